"""Character tables and 2-block data for the supported families.

Tables of (C_{2^n})^k : E are built by Clifford theory over the abelian normal
subgroup, products by tensoring, and A5 / the principal 2-block of Aut(SL2(8))
from fixed data.  Character values are exact cyclotomic numbers.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import lcm
from typing import Sequence

import numpy as np

from picard import cyclo, groups
from picard.cyclo import CycNum


# ---------------------------------------------------------------------------
# character tables
# ---------------------------------------------------------------------------

@dataclass
class CharacterTable:
    group: groups.FiniteGroup | None
    classes: list[groups.ClassInfo]
    irr: list[tuple[CycNum, ...]]
    labels: list[str]
    conductor: int
    conventions: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return sum(c.size for c in self.classes)

    @property
    def degrees(self) -> list[int]:
        return [int(row[0].rational()) for row in self.irr]

    def __len__(self):
        return len(self.irr)

    def value(self, i: int, g) -> CycNum:
        """chi_i(g) for an element g of the underlying group."""
        return self.irr[i][self.group.conjugacy.class_of[g]]

    def inner(self, i: int, j: int) -> Fraction:
        total = CycNum.from_int(0, self.conductor)
        for c, cls in enumerate(self.classes):
            total = total + self.irr[i][c] * self.irr[j][c].conj() * cls.size
        return total.rational() / self.order

    @cached_property
    def coord_array(self) -> np.ndarray:
        """Integer coordinates, shape (characters, classes, phi(conductor))."""
        phi = cyclo.totient(self.conductor)
        out = np.zeros((len(self.irr), len(self.classes), phi), dtype=np.int64)
        for i, row in enumerate(self.irr):
            for c, v in enumerate(row):
                w = v.lift(self.conductor)
                if w.den != 1:
                    raise ValueError("character value is not an algebraic integer")
                out[i, c] = w.num
        return out

    def orthogonality_defects(self) -> list[str]:
        """Empty iff both orthogonality relations hold exactly."""
        x = self.coord_array
        xc = conj_coords(x, self.conductor)
        t = tensor_array(self.conductor)
        sizes = np.array([c.size for c in self.classes], dtype=np.int64)
        rows = np.einsum("aci,bcj,ijk,c->abk", x, xc, t, sizes, optimize=True)
        cols = np.einsum("aci,adj,ijk->cdk", x, xc, t, optimize=True)
        defects = []
        n = len(self.irr)
        expected_rows = np.zeros_like(rows)
        expected_rows[np.arange(n), np.arange(n), 0] = self.order
        bad = np.argwhere((rows != expected_rows).any(axis=2))
        defects += [f"row {a},{b}" for a, b in bad]
        expected_cols = np.zeros_like(cols)
        for c, cls in enumerate(self.classes):
            expected_cols[c, c, 0] = cls.centralizer_order
        bad = np.argwhere((cols != expected_cols).any(axis=2))
        defects += [f"column {a},{b}" for a, b in bad]
        if sum(d * d for d in self.degrees) != self.order:
            defects.append("sum of squared degrees")
        if n != len(self.classes):
            defects.append("table is not square")
        return defects

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "conductor": self.conductor,
            "classes": [{"order": c.order, "size": c.size, "regular": c.regular}
                        for c in self.classes],
            "characters": [{"label": lab, "degree": d, "values": [v.to_json() for v in row]}
                           for lab, d, row in zip(self.labels, self.degrees, self.irr)],
            "conventions": self.conventions,
        }


def tensor_array(conductor: int) -> np.ndarray:
    return np.array(cyclo.mult_tensor(conductor), dtype=np.int64)


def conj_coords(x: np.ndarray, conductor: int) -> np.ndarray:
    """Complex conjugation applied along the last axis."""
    g = np.array(cyclo.galois_matrix(conductor, -1 % conductor if conductor > 1 else 1),
                 dtype=np.int64)
    return x @ g


def _counter_to_cyc(conductor: int, values: Counter) -> CycNum:
    return CycNum.from_exponents(conductor, dict(values))


def _omega_convention(conductor: int) -> dict:
    return {"omega": "zeta_3 = zeta_N^(N/3), N the table conductor",
            "zeta": f"zeta_{conductor} = exp(2*pi*i/{conductor})",
            "coords": "power basis 1, zeta, ..., zeta^(phi(N)-1)"}


# ---------------------------------------------------------------------------
# Clifford construction over an abelian normal subgroup
# ---------------------------------------------------------------------------

def _cyclic_generator(grp, elems):
    m = len(elems)
    for s in elems:
        if grp.element_order(s) == m:
            return s
    return None


def _linear_chars_cyclic(grp, elems, modulus) -> list[dict]:
    """Characters of a cyclic subgroup as dicts element -> Counter of exponents."""
    m = len(elems)
    if m == 1:
        return [{elems[0]: Counter({0: 1})}]
    gen = _cyclic_generator(grp, elems)
    if gen is None:
        raise NotImplementedError("stabilizer is abelian but not cyclic")
    step = modulus // m
    powers = []
    x = grp.identity
    for _ in range(m):
        powers.append(x)
        x = grp.mul(x, gen)
    return [{s: Counter({(step * i * j) % modulus: 1}) for i, s in enumerate(powers)}
            for j in range(m)]


def _is_abelian(grp, elems) -> bool:
    return all(grp.mul(a, b) == grp.mul(b, a) for a in elems for b in elems)


def _irr_subgroup(grp, elems, modulus) -> list[dict]:
    """Irr of a small odd-order subgroup as full functions on the subgroup."""
    if _is_abelian(grp, elems):
        return _linear_chars_cyclic(grp, elems, modulus)
    order = len(elems)
    primes = [p for p in range(order, 1, -1) if order % p == 0 and all(p % q for q in range(2, p))]
    for p in primes:
        sylow = [s for s in elems if _is_power_of(grp.element_order(s), p)]
        sset = set(sylow)
        if any(grp.mul(a, b) not in sset for a in sylow for b in sylow):
            continue
        if not _is_abelian(grp, sylow):
            continue
        qsize = order // len(sylow)
        comp = None
        for s in elems:
            if grp.element_order(s) == qsize:
                comp = grp.subgroup([s])
                break
        if comp is None or (set(comp) & sset) != {grp.identity}:
            continue
        split = {grp.mul(nn, q): (nn, q) for nn in sylow for q in comp}
        lam = _linear_chars_cyclic(grp, sylow, modulus)
        lam = [{k: next(iter(v)) for k, v in chi.items()} for chi in lam]
        return [vals for _, _, vals in _clifford(grp, sylow, comp, lam, modulus, elems, split.__getitem__)]
    raise NotImplementedError("no character table available for this stabilizer")


def _is_power_of(x: int, p: int) -> bool:
    while x % p == 0:
        x //= p
    return x == 1


def _clifford(grp, normal, comp, lams, modulus, points, split):
    """Irreducible characters of normal : comp evaluated at ``points``.

    ``lams`` lists the characters of the abelian normal subgroup as dicts
    element -> exponent mod ``modulus``.  Returns (orbit index, mu index,
    values) with values a dict point -> Counter of exponents.
    """
    inv = grp.inv
    conj_cache: dict = {}

    def conj_by(t, x):
        key = (t, x)
        r = conj_cache.get(key)
        if r is None:
            r = grp.mul(grp.mul(inv(t), x), t)
            conj_cache[key] = r
        return r

    keys = [tuple(lam[n] for n in normal) for lam in lams]
    key_index = {k: i for i, k in enumerate(keys)}
    seen = set()
    out = []
    for li, lam in enumerate(lams):
        if li in seen:
            continue
        stab = []
        for q in comp:
            moved = tuple(lam[conj_by(q, n)] for n in normal)
            seen.add(key_index[moved])
            if moved == keys[li]:
                stab.append(q)
        stab_set = set(stab)
        transversal, covered = [], set()
        for t in comp:
            if t not in covered:
                transversal.append(t)
                covered.update(grp.mul(t, s) for s in stab)
        for mi, mu in enumerate(_irr_subgroup(grp, stab, modulus)):
            vals = {}
            for g in points:
                n0, q0 = split(g)
                total: Counter = Counter()
                for t in transversal:
                    qq = conj_by(t, q0)
                    if qq in stab_set:
                        shift = lam[conj_by(t, n0)]
                        for e, mult in mu[qq].items():
                            total[(e + shift) % modulus] += mult
                vals[g] = total
            out.append((li, mi, vals))
    return out


def irr_abelian(p: groups.FiniteGroup) -> CharacterTable:
    """Linear characters of an abelian 2-group P = prod C_{2^e}."""
    if not p.is_abelian():
        raise ValueError("irr_abelian needs an abelian group")
    mods = getattr(p, "moduli", None)
    if mods is None:
        raise ValueError("irr_abelian needs a product of cyclic 2-groups")
    conductor = p.exponent
    cj = p.conjugacy
    irr, labels = [], []
    for u in product(*(range(m) for m in mods)):
        row = []
        for cls in cj.classes:
            x = cls.representative
            e = sum((conductor // m) * ui * xi for ui, xi, m in zip(u, x, mods)) % conductor
            row.append(CycNum.from_exponents(conductor, [e]))
        irr.append(tuple(row))
        labels.append(f"theta{len(labels) + 1}")
    return CharacterTable(p, cj.classes, irr, labels, conductor, _omega_convention(conductor))


def irr_semidirect(g: groups.SemidirectGroup) -> CharacterTable:
    """Irr((Z/2^n)^k : E) via orbits of E on Irr(D) and inducing from stabilizers."""
    if len(g.e_elements) % 2 == 0:
        raise ValueError("acting group must have odd order")
    modulus = g.exponent
    cj = g.conjugacy
    reps = [c.representative for c in cj.classes]
    normal = g.normal_subgroup
    comp = g.complement
    step = modulus // g.mod
    lams = []
    for u in product(range(g.mod), repeat=g.k):
        lams.append({(v, 0): (step * sum(a * b for a, b in zip(u, v))) % modulus for (v, _) in normal})
    zero = tuple([0] * g.k)

    def split(x):
        return (x[0], 0), (zero, x[1])

    chars = _clifford(g, normal, comp, lams, modulus, reps, split)
    irr = [tuple(_counter_to_cyc(modulus, vals[r]) for r in reps) for _, _, vals in chars]
    labels = [f"chi{i + 1}" for i in range(len(irr))]
    return CharacterTable(g, cj.classes, irr, labels, modulus, _omega_convention(modulus))


def irr_a5(g: groups.FiniteGroup | None = None) -> CharacterTable:
    """Ordinary table of A5, characters ordered by degree 1, 3, 3', 4, 5."""
    g = g or groups.alternating_group_a5()
    cj = g.conjugacy
    five_cycle = (1, 2, 3, 4, 0)
    c5 = cj.class_of[five_cycle]
    one = CycNum.from_int(1, 5)
    z = [CycNum.from_exponents(5, [k]) for k in range(5)]
    golden = one + z[1] + z[4]
    other = one + z[2] + z[3]
    irr = []
    fixed = [sum(1 for i in range(5) if c.representative[i] == i) for c in cj.classes]
    for kind in ("1", "3a", "3b", "4", "5"):
        row = []
        for ci, cls in enumerate(cj.classes):
            o = cls.order
            if kind == "1":
                v = 1
            elif kind in ("3a", "3b"):
                if o == 5:
                    match = (ci == c5) == (kind == "3a")
                    row.append(golden if match else other)
                    continue
                v = {1: 3, 2: -1, 3: 0}[o]
            elif kind == "4":
                v = fixed[ci] - 1
            else:
                v = {1: 5, 2: 1, 3: -1, 5: 0}[o]
            row.append(CycNum.from_int(v, 5))
        irr.append(tuple(row))
    conv = _omega_convention(5)
    conv["3a"] = "value 1 + zeta_5 + zeta_5^4 on the class of (1 2 3 4 5)"
    return CharacterTable(g, cj.classes, irr, ["1", "3a", "3b", "4", "5"], 5, conv)


def tensor_table(t1: CharacterTable, t2: CharacterTable, group=None) -> CharacterTable:
    """Characters chi x psi of G1 x G2, both characters and classes in first-factor-major order."""
    conductor = lcm(t1.conductor, t2.conductor)
    classes = []
    for c1, c2 in product(t1.classes, t2.classes):
        rep = (c1.representative, c2.representative)
        classes.append(groups.ClassInfo(rep, c1.size * c2.size, lcm(c1.order, c2.order),
                                        c1.centralizer_order * c2.centralizer_order))
    irr, labels = [], []
    for (r1, l1), (r2, l2) in product(zip(t1.irr, t1.labels), zip(t2.irr, t2.labels)):
        irr.append(tuple(a.lift(conductor) * b.lift(conductor) for a, b in product(r1, r2)))
        labels.append(f"{l1}⊗{l2}")
    if group is not None:
        classes = [groups.ClassInfo(c.representative, s.size, s.order, s.centralizer_order)
                   for c, s in zip(group.conjugacy.classes, classes)]
    return CharacterTable(group, classes, irr, labels, conductor, _omega_convention(conductor))


def character_table(tag) -> CharacterTable:
    """Character table for a family tag or family string."""
    if isinstance(tag, str):
        tag = groups.parse_family(tag)
    if isinstance(tag, groups.DirectProduct):
        grp = groups.build_group(tag)
        tables = [character_table(f) for f in tag.factors]
        out = tables[0]
        for t in tables[1:-1]:
            out = tensor_table(out, t)
        return tensor_table(out, tables[-1], group=grp)
    grp = groups.build_group(tag)
    if isinstance(tag, groups.Abelian2Group):
        return irr_abelian(grp)
    if isinstance(tag, groups.SemidirectAbelianByOdd):
        return irr_semidirect(grp)
    if isinstance(tag, groups.NamedTable) and tag.name == "A5":
        return irr_a5(grp)
    raise ValueError(f"no character table for {tag.canonical()}")


# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------

@dataclass
class BlockData:
    name: str
    table: CharacterTable | None
    irr_indices: list[int]
    labels: list[str]
    degrees: list[int]
    ibr_labels: list[str]
    ibr_degrees: list[int]
    decomposition: tuple[tuple[int, ...], ...]
    group_order: int
    defect_order: int

    def __len__(self):
        return len(self.irr_indices)

    @property
    def n_ibr(self) -> int:
        return len(self.ibr_labels)

    @cached_property
    def dmat(self) -> np.ndarray:
        return np.array(self.decomposition, dtype=np.int64).reshape(len(self), self.n_ibr)

    @property
    def projectives(self) -> list[tuple[int, ...]]:
        """prj(B): the columns of D as integer combinations of Irr(B)."""
        return [tuple(int(x) for x in col) for col in self.dmat.T]

    @property
    def cartan(self) -> np.ndarray:
        return self.dmat.T @ self.dmat

    @cached_property
    def prj_left_inverse(self) -> tuple[np.ndarray, int]:
        """(M, den) with (M / den) @ D = identity, via the inverse Cartan matrix."""
        c = [[Fraction(int(x)) for x in row] for row in self.cartan]
        n = len(c)
        inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if c[r][col] != 0)
            c[col], c[piv] = c[piv], c[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            f = c[col][col]
            c[col] = [x / f for x in c[col]]
            inv[col] = [x / f for x in inv[col]]
            for r in range(n):
                if r != col and c[r][col] != 0:
                    g = c[r][col]
                    c[r] = [x - g * y for x, y in zip(c[r], c[col])]
                    inv[r] = [x - g * y for x, y in zip(inv[r], inv[col])]
        den = lcm(*(x.denominator for row in inv for x in row))
        inv_int = np.array([[int(x * den) for x in row] for row in inv], dtype=np.int64)
        return inv_int @ self.dmat.T, den

    @cached_property
    def column_sums(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.dmat.sum(axis=0))

    def values(self, i: int) -> tuple[CycNum, ...]:
        """Values of the i-th character of the block (block-local index)."""
        return self.table.irr[self.irr_indices[i]]

    @cached_property
    def coord_array(self) -> np.ndarray:
        return self.table.coord_array[self.irr_indices]

    def check(self) -> list[str]:
        """Structural sanity of the decomposition data."""
        problems = []
        d = self.dmat
        if (d < 0).any():
            problems.append("negative decomposition number")
        if (d.sum(axis=1) == 0).any():
            problems.append("zero row")
        c = self.cartan
        if not (c == c.T).all() or np.linalg.det(c.astype(float)) <= 0.5:
            problems.append("Cartan matrix not positive definite")
        if list(d @ np.array(self.ibr_degrees)) != list(self.degrees):
            problems.append("degrees inconsistent with decomposition")
        if self.table is not None:
            x = self.table.coord_array[self.irr_indices]
            prj = np.einsum("xf,xck->fck", d, x)
            for ci, cls in enumerate(self.table.classes):
                if not cls.regular and prj[:, ci].any():
                    problems.append(f"projective nonzero on 2-singular class {ci}")
        return problems

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "irr": [{"label": lab, "degree": d, "index": i}
                    for lab, d, i in zip(self.labels, self.degrees, self.irr_indices)],
            "ibr": [{"label": lab, "degree": d} for lab, d in zip(self.ibr_labels, self.ibr_degrees)],
            "decomposition": [list(r) for r in self.decomposition],
            "group_order": self.group_order,
            "defect_order": self.defect_order,
        }
        if self.table is not None:
            out["table"] = self.table.to_json()
        return out


def _two_part(n: int) -> int:
    return n & -n


def _block_abelian(tag, table) -> BlockData:
    n = len(table)
    return BlockData(tag.canonical(), table, list(range(n)), list(table.labels), table.degrees,
                     ["phi1"], [1], tuple((1,) for _ in range(n)), table.order, table.order)


def _block_semidirect(tag, table) -> BlockData:
    g = table.group
    e_points = g.complement
    cj = g.conjugacy
    ibr = irr_fixed_by(g.normal_subgroup, table)
    e_size = len(e_points)
    rows = []
    for i in range(len(table)):
        row = []
        for j in ibr:
            total = CycNum.from_int(0, table.conductor)
            for e in e_points:
                c = cj.class_of[e]
                total = total + table.irr[i][c] * table.irr[j][c].conj()
            q = total.rational() / e_size
            if q.denominator != 1:
                raise ArithmeticError("non-integral decomposition number")
            row.append(int(q))
        rows.append(tuple(row))
    return BlockData(tag.canonical(), table, list(range(len(table))), list(table.labels),
                     table.degrees, [f"phi{k + 1}" for k in range(len(ibr))],
                     [table.degrees[j] for j in ibr], tuple(rows), table.order,
                     _two_part(table.order))


A5_DECOMPOSITION = ((1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1))
SL28_DECOMPOSITION = (
    (1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (1, 0, 0, 1, 0),
    (0, 1, 0, 1, 0),
    (0, 0, 1, 1, 0),
    (1, 1, 1, 1, 1),
    (1, 1, 1, 2, 1),
)
SL28_DEGREES = [1, 1, 1, 7, 7, 7, 21, 27]
SL28_IBR = ["I", "1", "1*", "6", "12"]
SL28_IBR_DEGREES = [1, 1, 1, 6, 12]
AUT_SL28_ORDER = 1512


def _block_a5(table) -> BlockData:
    return BlockData("A5", table, [0, 1, 2, 4], ["psi1", "psi2", "psi3", "psi4"],
                     [table.degrees[i] for i in (0, 1, 2, 4)], ["mu1", "mu2", "mu3"], [1, 2, 2],
                     A5_DECOMPOSITION, 60, 4)


def _block_sl28() -> BlockData:
    labels = ["1a", "1b", "1c", "7a", "7b", "7c", "21", "27"]
    return BlockData("AutSL28-B0", None, list(range(8)), labels, list(SL28_DEGREES), list(SL28_IBR),
                     list(SL28_IBR_DEGREES), SL28_DECOMPOSITION, AUT_SL28_ORDER, 8)


def tensor_blocks(b1: BlockData, b2: BlockData, table: CharacterTable | None = None) -> BlockData:
    """Principal block of a direct product: tensor characters, Kronecker decomposition matrix."""
    n2 = len(b2.table) if b2.table is not None else len(b2)
    irr_idx = [i * n2 + j for i in b1.irr_indices for j in b2.irr_indices]
    dec = tuple(tuple(int(x) for x in row) for row in np.kron(b1.dmat, b2.dmat))
    return BlockData(
        f"{b1.name}x{b2.name}", table, irr_idx,
        [f"{a}⊗{b}" for a in b1.labels for b in b2.labels],
        [a * b for a in b1.degrees for b in b2.degrees],
        [f"{a}⊗{b}" for a in b1.ibr_labels for b in b2.ibr_labels],
        [a * b for a in b1.ibr_degrees for b in b2.ibr_degrees],
        dec, b1.group_order * b2.group_order, b1.defect_order * b2.defect_order)


def block_data(tag) -> BlockData:
    """Principal 2-block data for a family tag or family string."""
    if isinstance(tag, str):
        tag = groups.parse_family(tag)
    if isinstance(tag, groups.NamedTable) and tag.name == "AutSL28-B0":
        return _block_sl28()
    if isinstance(tag, groups.DirectProduct):
        blocks = [block_data(f) for f in tag.factors]
        if any(b.table is None for b in blocks):
            raise ValueError("products are supported only for families with explicit tables")
        table = character_table(tag)
        out = blocks[0]
        for b in blocks[1:]:
            out = tensor_blocks(out, b)
            out.table = None
        out = BlockData(tag.canonical(), table, out.irr_indices, out.labels, out.degrees,
                        out.ibr_labels, out.ibr_degrees, out.decomposition, out.group_order,
                        out.defect_order)
        return out
    table = character_table(tag)
    if isinstance(tag, groups.Abelian2Group):
        return _block_abelian(tag, table)
    if isinstance(tag, groups.SemidirectAbelianByOdd):
        return _block_semidirect(tag, table)
    if isinstance(tag, groups.NamedTable) and tag.name == "A5":
        return _block_a5(table)
    raise ValueError(f"unsupported block {tag!r}")


def irr_fixed_by(subgroup: Sequence, table: CharacterTable | BlockData) -> list[int]:
    """Indices of characters with ``subgroup`` in their kernel.

    For a BlockData the indices are block-local; for a table they index the table.
    """
    if isinstance(table, BlockData):
        block, tab = table, table.table
        candidates = table.irr_indices
    else:
        block, tab = None, table
        candidates = list(range(len(table)))
    g = tab.group
    if not g.is_normal(subgroup):
        raise ValueError("subgroup is not normal")
    cls = sorted({g.conjugacy.class_of[x] for x in subgroup})
    keep = []
    for pos, i in enumerate(candidates):
        deg = tab.irr[i][0]
        if all(tab.irr[i][c] == deg for c in cls):
            keep.append(pos if block is not None else i)
    return keep


def pairing_invariant(chi: int, block: BlockData) -> int:
    """sum_phi D[chi, phi] * (column sum of D at phi)."""
    return int(sum(d * s for d, s in zip(block.decomposition[chi], block.column_sums)))
