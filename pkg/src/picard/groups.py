"""Explicit finite groups, conjugacy data, automorphisms and signed permutations.

Groups are stored as an ordered element list plus a multiplication function on
normal forms.  Semidirect products D:E carry elements ``(v, e)`` with ``v`` a
vector over Z/2^n and ``e`` an index into the (matrix) group E.
"""
from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from math import gcd, lcm
from typing import Callable, Hashable, Sequence

from picard import kernels, matring

MAX_ORDER = 10 ** 5
AUT_BOUND = 200
ISO_BOUND = 10 ** 4
CLOSURE_LIMIT = 10 ** 6


class GroupBoundError(OverflowError):
    """A feasibility bound on group order was exceeded."""


# ---------------------------------------------------------------------------
# family descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Abelian2Group:
    exponents: tuple[int, ...]

    def canonical(self) -> str:
        return f"P({','.join(map(str, self.exponents))})"


@dataclass(frozen=True)
class SemidirectAbelianByOdd:
    """(C_{2^n})^k : E with E one of C3, C7, C7:C3 or a Singer cycle."""
    kind: str  # "G", "E:C7", "E:F21", "B"
    n: int

    def canonical(self) -> str:
        if self.kind == "G":
            return f"G({self.n})"
        if self.kind == "B":
            return f"B({self.n})"
        return f"E{8 ** self.n}:{'C7' if self.kind == 'E:C7' else 'F21'}"


@dataclass(frozen=True)
class NamedTable:
    name: str  # "A5" or "AutSL28-B0"

    def canonical(self) -> str:
        return self.name


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple

    def canonical(self) -> str:
        return "x".join(f.canonical() for f in self.factors)


FamilyTag = Abelian2Group | SemidirectAbelianByOdd | NamedTable | DirectProduct

_ATOM = re.compile(r"^(?:P\((?P<p>[\d,\s]*)\)|G\((?P<g>\d+)\)|B\((?P<b>\d+)\)"
                   r"|E(?P<e>\d+):(?P<ek>C7|F21)|E\((?P<en>\d+)\):(?P<enk>C7|F21)"
                   r"|(?P<named>A5|A4|AutSL28-B0))$")


def _split_top(s: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_family(text: str) -> FamilyTag:
    """Parse strings such as ``G(2)``, ``P(1,1)``, ``E8:C7``, ``P(1)xG(2)``, ``G(1)xA5``."""
    text = text.strip()
    parts = _split_top(text, "x")
    if len(parts) > 1:
        return DirectProduct(tuple(parse_family(p) for p in parts))
    m = _ATOM.match(text)
    if not m:
        raise ValueError(f"cannot parse family {text!r}")
    if m.group("p") is not None:
        exps = tuple(int(x) for x in m.group("p").split(",") if x.strip())
        if any(e < 1 for e in exps):
            raise ValueError("exponents must be positive")
        return Abelian2Group(exps)
    if m.group("g"):
        return SemidirectAbelianByOdd("G", int(m.group("g")))
    if m.group("b"):
        return SemidirectAbelianByOdd("B", int(m.group("b")))
    if m.group("e"):
        size = int(m.group("e"))
        n = 0
        while 8 ** n < size:
            n += 1
        if 8 ** n != size or n == 0:
            raise ValueError(f"E{size}: order must be 8^n")
        return SemidirectAbelianByOdd("E:C7" if m.group("ek") == "C7" else "E:F21", n)
    if m.group("en"):
        kind = "E:C7" if m.group("enk") == "C7" else "E:F21"
        return SemidirectAbelianByOdd(kind, int(m.group("en")))
    named = m.group("named")
    if named == "A4":
        return SemidirectAbelianByOdd("G", 1)
    return NamedTable(named)


# ---------------------------------------------------------------------------
# finite groups
# ---------------------------------------------------------------------------

@dataclass
class ClassInfo:
    representative: Hashable
    size: int
    order: int
    centralizer_order: int

    @property
    def regular(self) -> bool:
        """2-regular: odd element order."""
        return self.order % 2 == 1


@dataclass
class ConjugacyData:
    classes: list[ClassInfo]
    class_of: dict  # element -> class index
    power_maps: dict[int, list[int]]

    def __len__(self):
        return len(self.classes)


class FiniteGroup:
    """A finite group given by an ordered element list and a multiplication."""

    def __init__(self, elements: Sequence, mul: Callable, identity, generators: Sequence,
                 tag=None, name: str | None = None, class_key: Callable | None = None):
        self.elements = list(elements)
        if len(self.elements) > MAX_ORDER:
            raise GroupBoundError(f"order {len(self.elements)} exceeds {MAX_ORDER}")
        self.index = {x: i for i, x in enumerate(self.elements)}
        self._mul = mul
        self.identity = identity
        self.generators = list(generators)
        self.tag = tag
        self.name = name or (tag.canonical() if tag is not None else "group")
        self._class_key = class_key
        self._inv: dict = {}

    @classmethod
    def generate(cls, gens, mul, identity, **kw) -> "FiniteGroup":
        seen = {identity}
        elems = [identity]
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
                    queue.append(y)
                    if len(elems) > MAX_ORDER:
                        raise GroupBoundError("generated group exceeds order bound")
        return cls(elems, mul, identity, gens, **kw)

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        r = self._inv.get(a)
        if r is None:
            x, prev = a, self.identity
            while x != self.identity:
                prev = x
                x = self._mul(x, a)
            r = prev if a != self.identity else a
            self._inv[a] = r
        return r

    def conj(self, g, x):
        """g x g^-1."""
        return self._mul(self._mul(g, x), self.inv(g))

    def element_order(self, a) -> int:
        x, n = a, 1
        while x != self.identity:
            x = self._mul(x, a)
            n += 1
        return n

    def power(self, a, e: int):
        result, base = self.identity, a
        if e < 0:
            base, e = self.inv(a), -e
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    @cached_property
    def orders(self) -> dict:
        return {x: self.element_order(x) for x in self.elements}

    @cached_property
    def exponent(self) -> int:
        return lcm(*self.orders.values()) if self.elements else 1

    def is_abelian(self) -> bool:
        return all(self._mul(a, b) == self._mul(b, a) for a in self.generators for b in self.generators)

    def check_axioms(self, samples: int = 200, seed: int = 0) -> None:
        import random

        rng = random.Random(seed)
        for x in self.elements:
            if self._mul(x, self.inv(x)) != self.identity or self._mul(self.identity, x) != x:
                raise ValueError(f"inverse/identity axiom fails at {x!r}")
        for _ in range(samples):
            a, b, c = (rng.choice(self.elements) for _ in range(3))
            if self._mul(self._mul(a, b), c) != self._mul(a, self._mul(b, c)):
                raise ValueError("associativity fails")
        for a in self.generators:
            for b in self.elements[: min(len(self.elements), 50)]:
                if self._mul(a, b) not in self.index:
                    raise ValueError("not closed under multiplication")

    def subgroup(self, gens) -> list:
        seen = {self.identity}
        out = [self.identity]
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self._mul(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    queue.append(y)
        return out

    def is_normal(self, subset) -> bool:
        s = set(subset)
        return all(self.conj(g, x) in s for g in self.generators for x in s)

    def normal_closure(self, gens) -> list:
        seen = {self.identity}
        out = [self.identity]
        queue = deque([self.identity])
        gens = list(gens)
        while queue:
            x = queue.popleft()
            nexts = [self._mul(x, g) for g in gens]
            nexts += [self.conj(g, x) for g in self.generators]
            for y in nexts:
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    queue.append(y)
        return out

    @cached_property
    def conjugacy(self) -> ConjugacyData:
        return _orbit_classes(self)

    def center(self) -> list:
        return [z for z in self.elements
                if all(self._mul(z, g) == self._mul(g, z) for g in self.generators)]


def _orbit_classes(g: FiniteGroup) -> ConjugacyData:
    class_of: dict = {}
    raw = []
    for x in g.elements:
        if x in class_of:
            continue
        orbit = [x]
        class_of[x] = -1
        i = 0
        while i < len(orbit):
            y = orbit[i]
            i += 1
            for h in g.generators:
                z = g.conj(h, y)
                if z not in class_of:
                    class_of[z] = -1
                    orbit.append(z)
        raw.append(orbit)
    key = g._class_key or (lambda rep: ())
    decorated = []
    for orbit in raw:
        rep = min(orbit, key=g.index.__getitem__)
        decorated.append(((rep != g.identity, key(rep), g.orders[rep], g.index[rep]), rep, orbit))
    decorated.sort(key=lambda t: t[0])
    classes = []
    for ci, (_, rep, orbit) in enumerate(decorated):
        for y in orbit:
            class_of[y] = ci
        classes.append(ClassInfo(rep, len(orbit), g.orders[rep], g.order // len(orbit)))
    return ConjugacyData(classes, class_of, _power_maps(g, classes, class_of))


def _power_maps(g, classes, class_of) -> dict[int, list[int]]:
    primes = [p for p in range(2, g.order + 1)
              if g.order % p == 0 and all(p % q for q in range(2, int(p ** 0.5) + 1))]
    return {p: [class_of[g.power(c.representative, p)] for c in classes] for p in primes}


# ---------------------------------------------------------------------------
# concrete families
# ---------------------------------------------------------------------------

def _vec_add(a, b, mod):
    return tuple((x + y) % mod for x, y in zip(a, b))


def abelian_group(exponents: Sequence[int]) -> FiniteGroup:
    mods = tuple(2 ** e for e in exponents)
    elems = list(product(*(range(m) for m in mods)))

    def mul(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, mods))

    ident = tuple(0 for _ in mods)
    gens = [tuple(int(i == j) for j in range(len(mods))) for i in range(len(mods))]
    grp = FiniteGroup(elems, mul, ident, gens, tag=Abelian2Group(tuple(exponents)))
    grp.moduli = mods
    return grp


class SemidirectGroup(FiniteGroup):
    """(Z/2^n)^k : E with E a group of matrices acting on column vectors."""

    def __init__(self, k: int, n: int, acting: matring.MatSubgroup, tag=None, name=None):
        self.k, self.n = k, n
        self.mod = 2 ** n
        self.acting = acting
        self.e_elements = list(acting.elements)
        self.e_index = {m: i for i, m in enumerate(self.e_elements)}
        mod = self.mod
        e_list = self.e_elements
        e_index = self.e_index
        emul = {}
        for i, a in enumerate(e_list):
            for j, b in enumerate(e_list):
                emul[i, j] = e_index[matring.mat_mul(a, b, k, mod)]
        self.e_mul = emul
        act = {(i, v): matring.mat_vec(a, v, k, mod)
               for i, a in enumerate(e_list) for v in product(range(mod), repeat=k)}
        self.act = act

        def mul(x, y):
            v1, e1 = x
            v2, e2 = y
            w = act[e1, v2]
            return (tuple((p + q) % mod for p, q in zip(v1, w)), emul[e1, e2])

        zero = tuple([0] * k)
        vecs = list(product(range(mod), repeat=k))
        elems = [(v, e) for e in range(len(e_list)) for v in vecs]
        gens = [(tuple(int(i == j) for j in range(k)), 0) for i in range(k)]
        gens += [(zero, e_index[matring.reduce(g, mod)]) for g in acting.generators]
        super().__init__(elems, mul, (zero, 0), gens, tag=tag, name=name,
                         class_key=lambda rep: rep[1])

    @cached_property
    def normal_subgroup(self) -> list:
        """O_2 = the vector part D."""
        return [(v, 0) for v in product(range(self.mod), repeat=self.k)]

    @cached_property
    def complement(self) -> list:
        zero = tuple([0] * self.k)
        return [(zero, e) for e in range(len(self.e_elements))]

    def automorphism_from_matrix(self, m) -> dict:
        """Automorphism (v, e) -> (m v, m e m^-1) for m normalizing E."""
        k, mod = self.k, self.mod
        mi = matring.mat_inv(m, k, mod)
        emap = {}
        for i, a in enumerate(self.e_elements):
            c = matring.mat_mul(matring.mat_mul(m, a, k, mod), mi, k, mod)
            if c not in self.e_index:
                raise ValueError("matrix does not normalize the acting group")
            emap[i] = self.e_index[c]
        return {(v, e): (matring.mat_vec(m, v, k, mod), emap[e]) for (v, e) in self.elements}


def _semidirect_family(tag: SemidirectAbelianByOdd) -> SemidirectGroup:
    n = tag.n
    if n < 1:
        raise ValueError("n must be positive")
    if tag.kind == "G":
        acting = matring.lift_odd_subgroup(2, n, "C3")
        grp = SemidirectGroup(2, n, acting, tag=tag)
    elif tag.kind == "E:C7":
        grp = SemidirectGroup(3, n, matring.lift_odd_subgroup(3, n, "C7"), tag=tag)
    elif tag.kind == "E:F21":
        grp = SemidirectGroup(3, n, matring.lift_odd_subgroup(3, n, "C7:C3"), tag=tag)
    elif tag.kind == "B":
        if n not in matring.PRIMITIVE_POLYS:
            raise ValueError("Borel family supported for n <= 4")
        grp = SemidirectGroup(n, 1, matring.singer_subgroup(n), tag=tag)
    else:
        raise ValueError(tag.kind)
    return grp


def _perm_mul(a, b):
    """(a*b)(i) = a(b(i)): apply b first."""
    return tuple(a[i] for i in b)


def symmetric_group(n: int) -> FiniteGroup:
    elems = sorted(permutations(range(n)))
    gens = []
    if n > 1:
        gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return FiniteGroup(elems, _perm_mul, tuple(range(n)), gens, name=f"S{n}")


def alternating_group_a5() -> FiniteGroup:
    ident = tuple(range(5))
    gens = [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)]
    grp = FiniteGroup.generate(gens, _perm_mul, ident, tag=NamedTable("A5"))
    elems = sorted(grp.elements)
    grp = FiniteGroup(elems, _perm_mul, ident, gens, tag=NamedTable("A5"))
    return grp


class DirectProductGroup(FiniteGroup):
    def __init__(self, factors: Sequence[FiniteGroup], tag=None):
        self.factors = list(factors)
        fs = self.factors

        def mul(a, b):
            return tuple(f._mul(x, y) for f, x, y in zip(fs, a, b))

        total = 1
        for f in fs:
            total *= f.order
        if total > MAX_ORDER:
            raise GroupBoundError(f"order {total} exceeds {MAX_ORDER}")
        elems = list(product(*(f.elements for f in fs)))
        ident = tuple(f.identity for f in fs)
        gens = []
        for i, f in enumerate(fs):
            for g in f.generators:
                gens.append(tuple(g if j == i else h.identity for j, h in enumerate(fs)))
        name = "x".join(f.name for f in fs)
        super().__init__(elems, mul, ident, gens, tag=tag, name=name)

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def element_order(self, a) -> int:
        return lcm(*(f.orders[x] for f, x in zip(self.factors, a)))

    @cached_property
    def conjugacy(self) -> ConjugacyData:
        parts = [f.conjugacy for f in self.factors]
        classes, class_of = [], {}
        combos = list(product(*(range(len(p.classes)) for p in parts)))
        for ci, combo in enumerate(combos):
            infos = [p.classes[i] for p, i in zip(parts, combo)]
            rep = tuple(c.representative for c in infos)
            size = 1
            cent = 1
            for c in infos:
                size *= c.size
                cent *= c.centralizer_order
            classes.append(ClassInfo(rep, size, lcm(*(c.order for c in infos)), cent))
        strides = []
        for p in parts:
            strides.append(len(p.classes))
        for x in self.elements:
            idx = 0
            for p, xi in zip(parts, x):
                idx = idx * len(p.classes) + p.class_of[xi]
            class_of[x] = idx
        return ConjugacyData(classes, class_of, _power_maps(self, classes, class_of))


def build_group(tag: FamilyTag | str) -> FiniteGroup:
    """Construct the explicit group for a family descriptor (or its string form)."""
    if isinstance(tag, str):
        tag = parse_family(tag)
    if isinstance(tag, Abelian2Group):
        grp = abelian_group(tag.exponents)
    elif isinstance(tag, SemidirectAbelianByOdd):
        grp = _semidirect_family(tag)
    elif isinstance(tag, NamedTable):
        if tag.name != "A5":
            raise ValueError(f"no explicit group for {tag.name}")
        grp = alternating_group_a5()
    elif isinstance(tag, DirectProduct):
        grp = DirectProductGroup([build_group(f) for f in tag.factors], tag=tag)
    else:
        raise TypeError(tag)
    if grp.order <= 10 ** 4 and not isinstance(grp, DirectProductGroup):
        grp.check_axioms()
    return grp


# ---------------------------------------------------------------------------
# abstract constructions used for claimed isomorphism types
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(list(range(n)), lambda a, b: (a + b) % n, 0, [1 % n] if n > 1 else [],
                       name=f"C{n}")


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    return DirectProductGroup(groups)


def semidirect(normal: FiniteGroup, top: FiniteGroup, action: Callable, name=None) -> FiniteGroup:
    """normal : top with top acting by ``action(t, n)`` (a left action by automorphisms)."""
    def mul(x, y):
        n1, t1 = x
        n2, t2 = y
        return (normal.mul(n1, action(t1, n2)), top.mul(t1, t2))

    elems = [(a, t) for t in top.elements for a in normal.elements]
    gens = [(g, top.identity) for g in normal.generators] + [(normal.identity, t) for t in top.generators]
    return FiniteGroup(elems, mul, (normal.identity, top.identity), gens, name=name)


def cyclic_semidirect(m: int, n: int, mult: int, name=None) -> FiniteGroup:
    """C_m : C_n with the generator of C_n acting as x -> mult * x."""
    if pow(mult, n, m) != 1 % m:
        raise ValueError("action does not have the right order")
    return semidirect(cyclic_group(m), cyclic_group(n), lambda t, a: (pow(mult, t, m) * a) % m,
                      name=name or f"C{m}:C{n}")


def wreath_s2(x: FiniteGroup) -> FiniteGroup:
    base = direct_product(x, x)
    return semidirect(base, cyclic_group(2), lambda t, a: a if t == 0 else (a[1], a[0]),
                      name=f"({x.name})wrS2")


def dihedral_8() -> FiniteGroup:
    return cyclic_semidirect(4, 2, 3, name="D8")


def holomorph(p: FiniteGroup) -> FiniteGroup:
    """P : Aut(P) for a small abelian group P."""
    auts = automorphism_group(p)
    idx = p.index
    maps = [tuple(a) for a in auts.automorphisms]

    def compose(a, b):
        return tuple(a[b[i]] for i in range(len(b)))

    aut_grp = FiniteGroup(maps, compose, tuple(range(p.order)), maps, name=f"Aut({p.name})")
    return semidirect(p, aut_grp, lambda a, x: p.elements[a[idx[x]]], name=f"Hol({p.name})")


# ---------------------------------------------------------------------------
# signed permutations
# ---------------------------------------------------------------------------

def signed_perm(perm: Sequence[int], signs: Sequence[int] | None = None) -> tuple[int, ...]:
    """Encode chi_i -> signs[i] * chi_perm[i] as a tuple of nonzero ints."""
    signs = signs or [1] * len(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    return tuple(s * (p + 1) for p, s in zip(perm, signs))


def decode_signed(x: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(abs(v) - 1 for v in x), tuple(1 if v > 0 else -1 for v in x)


def compose_signed(p, q):
    """p∘q: apply q first."""
    return kernels.compose_signed(tuple(p), tuple(q))


def invert_signed(p) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        j = abs(v) - 1
        out[j] = (i + 1) if v > 0 else -(i + 1)
    return tuple(out)


def identity_signed(degree: int) -> tuple[int, ...]:
    return tuple(range(1, degree + 1))


@dataclass
class SignedPermGroup:
    degree: int
    generators: list[tuple[int, ...]]
    labels: list[str] = field(default_factory=list)
    elements: list[tuple[int, ...]] = field(default_factory=list, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(x) in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def as_finite_group(self) -> FiniteGroup:
        return FiniteGroup(self.elements, compose_signed, identity_signed(self.degree),
                           self.generators or [], name="SignedPermGroup")

    def is_closed(self) -> bool:
        s = self._set
        return all(compose_signed(a, b) in s for a in self.elements for b in self.generators)

    def subgroup(self, gens, labels=None) -> "SignedPermGroup":
        return closure(gens, self.degree, labels)

    def to_json(self) -> dict:
        return {"degree": self.degree, "order": self.order,
                "generators": [{"perm": list(decode_signed(g)[0]), "signs": list(decode_signed(g)[1]),
                                "label": lab}
                               for g, lab in zip(self.generators, self.labels or [""] * len(self.generators))]}


def closure(gens, degree: int | None = None, labels=None, limit: int = CLOSURE_LIMIT) -> SignedPermGroup:
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generator degrees differ")
    elems = kernels.closure(gens, degree, limit)
    return SignedPermGroup(degree, gens, list(labels or [""] * len(gens)), sorted(elems))


# ---------------------------------------------------------------------------
# automorphisms, isomorphisms, fingerprints
# ---------------------------------------------------------------------------

def _invariants(g: FiniteGroup) -> dict:
    cj = g.conjugacy
    cent = {x: cj.classes[cj.class_of[x]].centralizer_order for x in g.elements}
    return {x: (g.orders[x], cent[x]) for x in g.elements}


def _generating_sequence(g: FiniteGroup, inv: dict) -> list:
    counts = Counter(inv.values())
    ranked = sorted(g.elements, key=lambda x: (-g.orders[x], counts[inv[x]], g.index[x]))
    gens: list = []
    span = {g.identity}
    for x in ranked:
        if len(span) == g.order:
            break
        if x not in span:
            gens.append(x)
            span = set(g.subgroup(gens))
    return gens


def _right_column(g: FiniteGroup, t) -> list[int]:
    """Indices of x*t for every element x, memoized on the group."""
    cols = g.__dict__.setdefault("_right_columns", {})
    col = cols.get(t)
    if col is None:
        idx = g.index
        col = [idx[g.mul(x, t)] for x in g.elements]
        cols[t] = col
    return col


def _extend_map(g, h, gens, images):
    """BFS-extend gens -> images to a homomorphism on <gens>; None on conflict or non-injectivity."""
    gcols = [_right_column(g, s) for s in gens]
    hcols = [_right_column(h, t) for t in images]
    start_g, start_h = g.index[g.identity], h.index[h.identity]
    phi = {start_g: start_h}
    used = {start_h}
    queue = deque([start_g])
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for gc, hc in zip(gcols, hcols):
            y = gc[x]
            fy = hc[fx]
            old = phi.get(y)
            if old is None:
                if fy in used:
                    return None
                phi[y] = fy
                used.add(fy)
                queue.append(y)
            elif old != fy:
                return None
    ge, he = g.elements, h.elements
    return {ge[x]: he[y] for x, y in phi.items()}


def _search_isomorphisms(g: FiniteGroup, h: FiniteGroup, first_only: bool):
    if g.order != h.order:
        return []
    inv_g, inv_h = _invariants(g), _invariants(h)
    if Counter(inv_g.values()) != Counter(inv_h.values()):
        return []
    gens = _generating_sequence(g, inv_g)
    by_inv: dict = {}
    for y in h.elements:
        by_inv.setdefault(inv_h[y], []).append(y)
    cands = [by_inv.get(inv_g[s], []) for s in gens]
    found = []

    def rec(j, images):
        if j == len(gens):
            phi = _extend_map(g, h, gens, images)
            if phi is not None and len(phi) == g.order:
                found.append(phi)
                return first_only
            return False
        for t in cands[j]:
            imgs = images + [t]
            if _extend_map(g, h, gens[: j + 1], imgs) is None:
                continue
            if rec(j + 1, imgs):
                return True
        return False

    rec(0, [])
    return found


@dataclass
class AutomorphismData:
    group: FiniteGroup
    automorphisms: list[tuple[int, ...]]  # permutations of element indices
    inner: list[tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.automorphisms)

    @property
    def inner_order(self) -> int:
        return len(self.inner)

    @property
    def out_order(self) -> int:
        return self.order // self.inner_order

    @cached_property
    def out_group(self) -> FiniteGroup:
        inner = set(self.inner)

        def compose(a, b):
            return tuple(a[i] for i in b)

        coset_of = {}
        reps = []
        for a in self.automorphisms:
            if a in coset_of:
                continue
            coset = frozenset(compose(a, i) for i in inner)
            rep = min(coset)
            reps.append(rep)
            for c in coset:
                coset_of[c] = rep

        def mul(x, y):
            return coset_of[compose(x, y)]

        ident = coset_of[tuple(range(self.group.order))]
        return FiniteGroup(sorted(reps), mul, ident, sorted(reps), name=f"Out({self.group.name})")


def automorphism_group(g: FiniteGroup) -> AutomorphismData:
    """All automorphisms of a small group by backtracking over generator images."""
    if g.order > AUT_BOUND:
        raise GroupBoundError(f"automorphism search limited to order {AUT_BOUND}")
    isos = _search_isomorphisms(g, g, first_only=False)
    idx = g.index
    auts = sorted({tuple(idx[phi[x]] for x in g.elements) for phi in isos})
    inner = sorted({tuple(idx[g.conj(h, x)] for x in g.elements) for h in g.elements})
    return AutomorphismData(g, auts, inner)


def _as_group(x) -> FiniteGroup:
    if isinstance(x, SignedPermGroup):
        return x.as_finite_group()
    return x


def derived_subgroup(g: FiniteGroup, within: Sequence | None = None) -> list:
    """Commutator subgroup of ``within`` (default: g)."""
    elems = list(within) if within is not None else g.elements
    if within is None:
        gens = g.generators
    else:
        gens = _generating_sequence_subset(g, elems)
    comms = set()
    for a in gens:
        for b in gens:
            comms.add(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))))
    # normal closure inside <within>
    seen = {g.identity}
    out = [g.identity]
    queue = deque([g.identity])
    comms = list(comms)
    while queue:
        x = queue.popleft()
        nexts = [g.mul(x, c) for c in comms] + [g.conj(s, x) for s in gens]
        for y in nexts:
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


def _generating_sequence_subset(g, elems):
    gens: list = []
    span = {g.identity}
    target = len(elems)
    for x in sorted(elems, key=lambda y: (-g.orders[y], g.index[y])):
        if len(span) == target:
            break
        if x not in span:
            gens.append(x)
            span = set(g.subgroup(gens))
    return gens


def abelian_invariants(order: int, order_counts: dict[int, int]) -> tuple[int, ...]:
    """Invariants (prime powers, sorted) of an abelian group from d -> #{x : x^d = 1}."""
    invs = []
    m, p = order, 2
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            ranks = []
            for j in range(1, e + 1):
                ratio, r = order_counts[p ** j] // order_counts[p ** (j - 1)], 0
                while ratio > 1:
                    ratio //= p
                    r += 1
                ranks.append(r)
            for j, r in enumerate(ranks):
                nxt = ranks[j + 1] if j + 1 < len(ranks) else 0
                invs += [p ** (j + 1)] * (r - nxt)
        p += 1
    return tuple(sorted(invs))


def iso_fingerprint(x) -> tuple:
    """(order, element-order histogram, abelianization invariants, derived series orders, |Z|)."""
    g = _as_group(x)
    if g.order > ISO_BOUND:
        raise GroupBoundError(f"fingerprint limited to order {ISO_BOUND}")
    hist = tuple(sorted(Counter(g.orders.values()).items()))
    dser = []
    cur = g.elements
    while True:
        nxt = derived_subgroup(g, None if cur is g.elements else cur)
        dser.append(len(nxt))
        if len(nxt) == len(cur):
            break
        cur = nxt
    comm = set(derived_subgroup(g))
    q = g.order // len(comm)
    counts: Counter = Counter()
    for e in g.elements:
        # order of e modulo the commutator subgroup
        y, k = e, 1
        while y not in comm:
            y = g.mul(y, e)
            k += 1
        counts[k] += 1
    qcounts: dict[int, int] = {}
    for d in range(1, q + 1):
        if q % d == 0:
            qcounts[d] = sum(c for k, c in counts.items() if d % k == 0) // len(comm)
    return (g.order, hist, abelian_invariants(q, qcounts), tuple(dser), len(g.center()))


def iso_test(a, b) -> bool:
    """Definitive isomorphism test (fingerprint screen, then generator-image backtracking)."""
    g, h = _as_group(a), _as_group(b)
    if max(g.order, h.order) > ISO_BOUND:
        raise GroupBoundError(f"isomorphism testing limited to order {ISO_BOUND}")
    if iso_fingerprint(g) != iso_fingerprint(h):
        return False
    return bool(_search_isomorphisms(g, h, first_only=True))
