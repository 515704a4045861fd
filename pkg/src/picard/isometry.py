"""Perfect isometries between 2-blocks given as character tables plus decomposition data.

A signed bijection I : Irr(B) -> +-Irr(C) is perfect when it maps the lattice of
O-valued class functions of B onto that of C, and Z prj(B) onto Z prj(C).  The
first condition is tested on the block projections of class indicators; the
second by integer linear algebra on the columns of the decomposition matrices.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from typing import Sequence

import numpy as np

from picard import chartab, cyclo, groups
from picard.chartab import BlockData
from picard.cyclo import CycNum, in_2m_O, two_adic_valuation

MAX_ENUMERATION_SIZE = 16
MAX_EXHAUSTIVE_SIZE = 7


class EnumerationBoundError(OverflowError):
    """Block too large for the isometry search."""


# ---------------------------------------------------------------------------
# signed bijections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedBijection:
    source: BlockData = field(repr=False, compare=False)
    target: BlockData = field(repr=False, compare=False)
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if n != len(self.source) or n != len(self.target) or len(self.signs) != n:
            raise ValueError("bijection size does not match the blocks")
        if sorted(self.perm) != list(range(n)):
            raise ValueError("not a bijection")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def from_signed(cls, source, target, x: Sequence[int]) -> "SignedBijection":
        perm, signs = groups.decode_signed(x)
        return cls(source, target, perm, signs)

    @classmethod
    def identity(cls, block) -> "SignedBijection":
        n = len(block)
        return cls(block, block, tuple(range(n)), (1,) * n)

    @property
    def encoded(self) -> tuple[int, ...]:
        return groups.signed_perm(self.perm, self.signs)

    def inverse(self) -> "SignedBijection":
        perm, signs = groups.decode_signed(groups.invert_signed(self.encoded))
        return SignedBijection(self.target, self.source, perm, signs)

    def compose(self, other: "SignedBijection") -> "SignedBijection":
        """self after other."""
        perm, signs = groups.decode_signed(groups.compose_signed(self.encoded, other.encoded))
        return SignedBijection(other.source, self.target, perm, signs)

    def apply(self, coeffs: Sequence) -> list:
        """Image of an element sum_chi coeffs[chi] chi of Z Irr(B), as coefficients over Irr(C)."""
        out = [0] * len(self.perm)
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            out[p] = s * coeffs[i]
        return out

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "signs": list(self.signs)}


@dataclass
class PerfectReport:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# integer linear algebra
# ---------------------------------------------------------------------------

def _solve_exact(mat: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]):
    """Solve mat @ X = rhs over Q for a full column rank ``mat``; None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0])
    k = len(rhs[0]) if rhs else 0
    aug = [[Fraction(x) for x in mat[r]] + [Fraction(x) for x in rhs[r]] for r in range(rows)]
    piv_row = 0
    pivots = []
    for c in range(cols):
        pr = next((r for r in range(piv_row, rows) if aug[r][c] != 0), None)
        if pr is None:
            raise ValueError("matrix does not have full column rank")
        aug[piv_row], aug[pr] = aug[pr], aug[piv_row]
        pv = aug[piv_row][c]
        aug[piv_row] = [x / pv for x in aug[piv_row]]
        for r in range(rows):
            if r != piv_row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv_row])]
        pivots.append(piv_row)
        piv_row += 1
    for r in range(piv_row, rows):
        if any(aug[r][cols + j] != 0 for j in range(k)):
            return None
    return [[aug[r][cols + j] for j in range(k)] for r in range(cols)]


def _det(mat: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def prj_transition(iso: SignedBijection):
    """Matrix expressing I(prj(B)) in prj(C), or None when not integral."""
    src, tgt = iso.source, iso.target
    images = np.zeros((len(tgt), src.n_ibr), dtype=np.int64)
    d = src.dmat
    images[list(iso.perm)] = d * np.array(iso.signs, dtype=np.int64)[:, None]
    left, den = tgt.prj_left_inverse
    num = left @ images
    if (num % den).any():
        return None
    sol = num // den
    if not (tgt.dmat @ sol == images).all():
        return None
    return sol.tolist()


def _prj_ok(iso: SignedBijection) -> tuple[bool, str]:
    if iso.source.n_ibr != iso.target.n_ibr:
        return False, "prj ranks differ"
    mat = prj_transition(iso)
    if mat is None:
        return False, "I(prj(B)) not contained in Z prj(C)"
    if abs(_det(mat)) != 1:
        return False, "I(prj(B)) -> Z prj(C) not invertible over Z"
    return True, ""


# ---------------------------------------------------------------------------
# CF lattice test, numeric route
# ---------------------------------------------------------------------------

def _coords_at(block: BlockData, conductor: int) -> np.ndarray:
    if block.table.conductor == conductor:
        return block.coord_array
    phi = cyclo.totient(conductor)
    out = np.zeros((len(block), len(block.table.classes), phi), dtype=np.int64)
    for i in range(len(block)):
        for c, v in enumerate(block.values(i)):
            out[i, c] = v.lift(conductor).num
    return out


def _pair_product(a: np.ndarray, b: np.ndarray, t: np.ndarray) -> np.ndarray:
    """s[h, g, k] = sum_x sum_ij a[x, h, i] b[x, g, j] t[i, j, k], as two matrix products."""
    x, nh, phi = a.shape
    ng = b.shape[1]
    outer = a.reshape(x, nh * phi).T @ b.reshape(x, ng * phi)
    outer = outer.reshape(nh, phi, ng, phi).transpose(0, 2, 1, 3).reshape(nh * ng, phi * phi)
    return (outer @ t.reshape(phi * phi, -1)).reshape(nh, ng, -1)


def _cf_failures(src: BlockData, tgt: BlockData, perm, signs, conductor: int,
                 direction: str) -> list[str]:
    a = chartab.conj_coords(_coords_at(src, conductor), conductor)
    b = _coords_at(tgt, conductor)[list(perm)] * np.array(signs, dtype=np.int64)[:, None, None]
    t = chartab.tensor_array(conductor)
    s = _pair_product(a, b, t)
    failures = []
    for h, cls in enumerate(src.table.classes):
        m = two_adic_valuation(cls.centralizer_order)
        bad = np.argwhere((s[h] % (1 << m)) != 0)
        if len(bad):
            g = int(bad[0][0])
            kind = "2-singular" if not cls.regular else "2-regular"
            failures.append(f"{direction}: I(delta_h) not O-valued for h in class {h} ({kind}, "
                            f"order {cls.order}), first bad target class {g}")
    return failures


def is_perfect(iso: SignedBijection, exact: bool = False) -> PerfectReport:
    """Both lattice conditions, for I and for I^-1.

    ``exact=True`` evaluates the class-function test with CycNum arithmetic
    instead of integer coordinate arrays.
    """
    src, tgt = iso.source, iso.target
    if src.table is None or tgt.table is None:
        raise ValueError("is_perfect needs blocks with character tables")
    failures = []
    inv = iso.inverse()
    if exact:
        failures += _cf_failures_exact(iso, "I")
        failures += _cf_failures_exact(inv, "I^-1")
    else:
        conductor = math.lcm(src.table.conductor, tgt.table.conductor)
        failures += _cf_failures(src, tgt, iso.perm, iso.signs, conductor, "I")
        failures += _cf_failures(tgt, src, inv.perm, inv.signs, conductor, "I^-1")
    for direction, f in (("I", iso), ("I^-1", inv)):
        ok, msg = _prj_ok(f)
        if not ok:
            failures.append(f"{direction}: {msg}")
    return PerfectReport(not failures, failures)


def _cf_failures_exact(iso: SignedBijection, direction: str) -> list[str]:
    src, tgt = iso.source, iso.target
    failures = []
    conductor = math.lcm(src.table.conductor, tgt.table.conductor)
    n = len(src)
    for h, cls in enumerate(src.table.classes):
        m = two_adic_valuation(cls.centralizer_order)
        coeffs = [src.values(x)[h].conj().lift(conductor) for x in range(n)]
        for g in range(len(tgt.table.classes)):
            total = CycNum.from_int(0, conductor)
            for x in range(n):
                if coeffs[x].is_zero():
                    continue
                val = tgt.values(iso.perm[x])[g].lift(conductor)
                total = total + coeffs[x] * val * iso.signs[x]
            if not in_2m_O(total, m):
                failures.append(f"{direction}: class {h} fails at target class {g}")
                break
    return failures


# ---------------------------------------------------------------------------
# the CF lattice modulo 2^a, for pruning
# ---------------------------------------------------------------------------

def _v2(x: int) -> int:
    return two_adic_valuation(x)


def howell_form(rows: Sequence[np.ndarray], ncols: int, a: int) -> list[np.ndarray]:
    """Echelon basis over Z/2^a with the Howell property.

    For every j the rows whose pivot column is >= j span all vectors of the
    module vanishing on columns < j.
    """
    q = 1 << a
    work = [np.asarray(r, dtype=np.int64) % q for r in rows]
    work = [r for r in work if r.any()]
    out = []
    for c in range(ncols):
        cand = [i for i, r in enumerate(work) if r[c]]
        if not cand:
            continue
        best = min(cand, key=lambda i: _v2(int(work[i][c])))
        piv = work[best]
        s = _v2(int(piv[c]))
        unit = int(piv[c]) >> s
        piv = (piv * pow(unit, -1, q)) % q
        nxt = []
        for i, r in enumerate(work):
            if i == best:
                continue
            if r[c]:
                r = (r - (int(r[c]) >> s) * piv) % q
            if r.any():
                nxt.append(r)
        ann = (piv << (a - s)) % q
        if ann.any():
            nxt.append(ann)
        work = nxt
        out.append(piv)
    return out


class CFLattice:
    """Coefficient vectors of O-valued class functions in B, scaled by 2^a, modulo 2^a."""

    def __init__(self, block: BlockData):
        self.block = block
        self.conductor = block.table.conductor
        self.phi = cyclo.totient(self.conductor)
        self.a = _v2(block.table.order)
        self.q = 1 << self.a
        n = len(block)
        self.n = n
        x = chartab.conj_coords(block.coord_array, self.conductor)  # conj chi(h)
        t = chartab.tensor_array(self.conductor)
        gens = []
        for h, cls in enumerate(block.table.classes):
            v = _v2(cls.centralizer_order)
            odd = cls.centralizer_order >> v
            scale = ((1 << (self.a - v)) * pow(odd, -1, self.q)) % self.q
            base = x[:, h, :]  # n x phi
            for i in range(self.phi):
                # zeta^i * conj chi(h), coordinates
                unit = np.zeros(self.phi, dtype=np.int64)
                unit[i] = 1
                prod = np.einsum("i,xj,ijk->xk", unit, base, t)
                gens.append((scale * prod.reshape(-1)) % self.q)
        self.generators = gens

    @cached_property
    def _evaluation(self) -> np.ndarray:
        """Matrix sending a coefficient vector to the coordinates of sum_chi v_chi chi(g)."""
        t = chartab.tensor_array(self.conductor)
        x = self.block.coord_array
        ev = np.einsum("xgj,kjl->xkgl", x, t)
        return ev.reshape(self.n * self.phi, -1)

    def contains_all(self, vecs: np.ndarray) -> bool:
        """True iff every row of ``vecs`` lies in the lattice."""
        vals = (np.asarray(vecs, dtype=np.int64).reshape(-1, self.n * self.phi) @ self._evaluation)
        return not (vals % self.q).any()

    def contains(self, vec: np.ndarray) -> bool:
        return self.contains_all(np.asarray(vec)[None, :])

    def subspace_generators(self, chars: Sequence[int]) -> list[np.ndarray]:
        """Generators of the sublattice supported on the given characters."""
        inside = set(chars)
        outside = [c for c in range(self.n) if c not in inside]
        order = [c * self.phi + k for c in outside + list(chars) for k in range(self.phi)]
        cut = len(outside) * self.phi
        hf = howell_form([g[order] for g in self.generators], len(order), self.a)
        out = []
        inv_order = np.argsort(order)
        for row in hf:
            if not row[:cut].any():
                out.append(row[inv_order])
        return out


# ---------------------------------------------------------------------------
# Morita-invariant cells
# ---------------------------------------------------------------------------

@dataclass
class MoritaCells:
    block: BlockData
    cells: list[list[int]]           # characters with identical decomposition rows
    keys: list[tuple]                # (sorted row, pairing invariant) per cell
    classes: list[list[int]]         # cells grouped by key

    def cell_of(self, chi: int) -> int:
        for i, c in enumerate(self.cells):
            if chi in c:
                return i
        raise KeyError(chi)

    def preserved_by(self, perm: Sequence[int]) -> bool:
        """True iff the permutation maps cells onto cells with equal keys."""
        for ci, cell in enumerate(self.cells):
            images = {perm[x] for x in cell}
            tgt = self.cell_of(perm[cell[0]])
            if images != set(self.cells[tgt]) or self.keys[tgt] != self.keys[ci]:
                return False
        return True

    def to_json(self) -> dict:
        labels = self.block.labels
        return {"cells": [[labels[x] for x in c] for c in self.cells],
                "keys": [[list(k[0]), k[1]] for k in self.keys],
                "classes": self.classes}


def morita_constraints(block: BlockData) -> MoritaCells:
    rows = block.decomposition
    cells: dict = {}
    for i, r in enumerate(rows):
        cells.setdefault(r, []).append(i)
    cell_list = sorted(cells.values())
    keys = [(tuple(sorted(rows[c[0]], reverse=True)), chartab.pairing_invariant(c[0], block))
            for c in cell_list]
    grouped: dict = {}
    for i, k in enumerate(keys):
        grouped.setdefault(k, []).append(i)
    return MoritaCells(block, cell_list, keys, sorted(grouped.values()))


def column_permutation(block: BlockData, perm: Sequence[int]):
    """sigma with D[perm[chi], sigma[phi]] = D[chi, phi], or None."""
    d = block.dmat
    moved = np.zeros_like(d)
    for x, p in enumerate(perm):
        moved[p] = d[x]
    sigma = []
    used = set()
    for f in range(d.shape[1]):
        match = next((g for g in range(d.shape[1]) if g not in used and (moved[:, g] == d[:, f]).all()),
                     None)
        if match is None:
            return None
        used.add(match)
        sigma.append(match)
    return tuple(sigma)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _short_vectors(gram: np.ndarray, target: int) -> list[tuple[int, ...]]:
    """All integer a with a^T G a == target (Fincke-Pohst style recursion)."""
    n = gram.shape[0]
    g = gram.astype(float)
    # q[i][i] and q[i][j] from the LDL^T decomposition
    q = np.zeros((n, n))
    a = g.copy()
    for i in range(n):
        q[i, i] = a[i, i]
        for j in range(i + 1, n):
            q[i, j] = a[i, j] / a[i, i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j, k] -= q[i, j] * a[i, k]
                a[k, j] = a[j, k]
    out = []
    x = [0] * n
    eps = 1e-9

    def rec(i, budget):
        if i < 0:
            vec = np.array(x)
            if int(vec @ gram @ vec) == target:
                out.append(tuple(x))
            return
        centre = -sum(q[i, j] * x[j] for j in range(i + 1, n))
        radius = math.sqrt(max(budget, 0) / q[i, i]) + eps
        for xi in range(math.ceil(centre - radius), math.floor(centre + radius) + 1):
            x[i] = xi
            rest = budget - q[i, i] * (xi - centre) ** 2
            if rest >= -eps:
                rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, float(target))
    return out


def _row_sign_canonical(row) -> tuple[int, tuple[int, ...]] | None:
    """(sign, nonnegative row) if the row is single-signed, else None."""
    pos = all(v >= 0 for v in row)
    neg = all(v <= 0 for v in row)
    if pos:
        return 1, tuple(row)
    if neg:
        return -1, tuple(-v for v in row)
    return None


def _stage1(block: BlockData) -> list[np.ndarray]:
    """Candidate images W = (I(Phi_j))_j of the projective characters."""
    d = block.dmat
    cartan = block.cartan
    ell = d.shape[1]
    row_multiset = Counter(tuple(int(v) for v in r) for r in d)
    cands = []
    for j in range(ell):
        pattern = sorted(int(v) for v in d[:, j])
        found = []
        for a in _short_vectors(cartan, int(cartan[j, j])):
            vec = d @ np.array(a)
            if sorted(abs(int(v)) for v in vec) == pattern:
                found.append((np.array(a), vec))
        cands.append(found)
    results = []

    def rec(j, chosen):
        if j == ell:
            amat = [list(map(int, c[0])) for c in chosen]
            if abs(_det(amat)) != 1:
                return
            w = np.stack([c[1] for c in chosen], axis=1)
            rows = []
            for r in w:
                canon = _row_sign_canonical([int(v) for v in r])
                if canon is None:
                    return
                rows.append(canon[1])
            if Counter(rows) == row_multiset:
                results.append(w)
            return
        for a, vec in cands[j]:
            if all(int(vec @ chosen[i][1]) == int(cartan[i, j]) for i in range(j)):
                chosen.append((a, vec))
                rec(j + 1, chosen)
                chosen.pop()

    rec(0, [])
    return results


def _search_order(block: BlockData) -> list[int]:
    cells = morita_constraints(block)
    rank = {}
    for cell in cells.cells:
        for x in cell:
            rank[x] = (len(cell), x)
    return sorted(range(len(block)), key=rank.__getitem__)


@dataclass
class EnumerationStats:
    stage1_candidates: int = 0
    nodes: int = 0
    pruned: int = 0
    verified: int = 0


def perf_enumerate(block: BlockData, prune: bool = True, stats: EnumerationStats | None = None,
                   max_size: int = MAX_ENUMERATION_SIZE) -> groups.SignedPermGroup:
    """All perfect self-isometries of the block, as a signed permutation group."""
    n = len(block)
    if n > max_size:
        raise EnumerationBoundError(f"|Irr(B)| = {n} exceeds the search bound {max_size}")
    stats = stats if stats is not None else EnumerationStats()
    order = _search_order(block)
    lattice = CFLattice(block) if prune else None
    level_gens: dict[int, list[np.ndarray]] = {}
    if prune:
        prev = 0
        for k in range(1, n + 1):
            gens = lattice.subspace_generators(order[:k])
            if len(gens) != prev:
                level_gens[k] = np.array(gens).reshape(len(gens), n, lattice.phi)
            prev = len(gens)
    d_rows = [tuple(int(v) for v in r) for r in block.dmat]
    found = set()
    ws = _stage1(block)
    stats.stage1_candidates = len(ws)
    for w in ws:
        w_rows = [tuple(int(v) for v in r) for r in w]
        options = []
        for x in range(n):
            opts = []
            for psi in range(n):
                if w_rows[psi] == d_rows[x]:
                    opts.append((psi, 1))
                elif w_rows[psi] == tuple(-v for v in d_rows[x]):
                    opts.append((psi, -1))
            options.append(opts)
        perm: list = [None] * n
        signs: list = [1] * n
        used = set()

        def rec(k):
            stats.nodes += 1
            if k == n:
                iso = SignedBijection(block, block, tuple(perm), tuple(signs))
                stats.verified += 1
                if is_perfect(iso):
                    found.add(iso.encoded)
                return
            x = order[k]
            for psi, s in options[x]:
                if psi in used:
                    continue
                perm[x], signs[x] = psi, s
                used.add(psi)
                ok = True
                if prune and (k + 1) in level_gens:
                    gens = level_gens[k + 1]
                    img = np.zeros_like(gens)
                    assigned = order[: k + 1]
                    img[:, [perm[y] for y in assigned]] = (
                        gens[:, assigned] * np.array([signs[y] for y in assigned])[None, :, None])
                    ok = lattice.contains_all(img)
                if ok:
                    rec(k + 1)
                else:
                    stats.pruned += 1
                used.discard(psi)
                perm[x] = None
                signs[x] = 1

        rec(0)
    grp = groups.SignedPermGroup(n, _generators_of(sorted(found), n), [], sorted(found))
    if not grp.is_closed():
        raise AssertionError("enumerated perfect isometries are not closed under composition")
    return grp


def _generators_of(elements, degree) -> list[tuple[int, ...]]:
    """A small generating set, chosen greedily in sorted order."""
    gens: list = []
    span = {groups.identity_signed(degree)}
    for x in elements:
        if x not in span:
            gens.append(x)
            span = set(groups.closure(gens, degree).elements)
            if len(span) == len(elements):
                break
    return gens


def perf_exhaustive(block: BlockData, exact: bool = True,
                    max_size: int = MAX_EXHAUSTIVE_SIZE) -> groups.SignedPermGroup:
    """Brute force over all n! * 2^n signed permutations."""
    n = len(block)
    if n > max_size:
        raise EnumerationBoundError(f"exhaustive search limited to {max_size} characters")
    found = []
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            iso = SignedBijection(block, block, perm, signs)
            if is_perfect(iso, exact=exact):
                found.append(iso.encoded)
    found.sort()
    return groups.SignedPermGroup(n, _generators_of(found, n), [], found)


def factor_tensor(x: Sequence[int], n1: int, n2: int):
    """Split a signed permutation of Irr(B1 x B2) as J (x) K, or None.

    Characters of the product are indexed i * n2 + j.  The sign split is
    normalised so that J has a positive sign at index 0.
    """
    perm, signs = groups.decode_signed(x)
    p1 = [perm[i * n2] // n2 for i in range(n1)]
    p2 = [perm[j] % n2 for j in range(n2)]
    for i in range(n1):
        for j in range(n2):
            if perm[i * n2 + j] != p1[i] * n2 + p2[j]:
                return None
    base = signs[0]
    j_signs = [signs[i * n2] * base for i in range(n1)]
    k_signs = [signs[j] for j in range(n2)]
    for i in range(n1):
        for j in range(n2):
            if signs[i * n2 + j] != j_signs[i] * k_signs[j]:
                return None
    if sorted(p1) != list(range(n1)) or sorted(p2) != list(range(n2)):
        return None
    return groups.signed_perm(p1, j_signs), groups.signed_perm(p2, k_signs)


def group_report(grp: groups.SignedPermGroup, block: BlockData, claimed=None) -> dict:
    """JSON report: order, generators, fingerprint, optional iso-type match."""
    fp = groups.iso_fingerprint(grp) if grp.order <= groups.ISO_BOUND else None
    out = {
        "block": block.name,
        "order": grp.order,
        "generators": [{"perm": list(groups.decode_signed(g)[0]),
                        "signs": list(groups.decode_signed(g)[1])} for g in grp.generators],
        "fingerprint": _fingerprint_json(fp),
    }
    if claimed is not None:
        name, other = claimed
        out["matched_iso_type"] = {"claimed": name, "match": groups.iso_test(grp, other)}
    return out


def _fingerprint_json(fp):
    if fp is None:
        return None
    order, hist, ab, derived, center = fp
    return {"order": order, "element_orders": [[o, c] for o, c in hist],
            "abelianization": list(ab), "derived_series": list(derived), "center": center}
