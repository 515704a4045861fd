"""Matrix groups over Z/2^n: lifted odd-order subgroups and their normalizers.

Matrices are row-major tuples of residues in [0, 2^n).  They act on column
vectors, so the matrix of an automorphism of (C_{2^n})^k has the image of the
i-th generator as its i-th column.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod

from picard import kernels

EXHAUSTIVE_LIMIT = 2 ** 26


def identity(k: int) -> tuple[int, ...]:
    return tuple(int(i == j) for i in range(k) for j in range(k))


def mat_mul(a, b, k, mod):
    return kernels.mat_mul(a, b, k, mod)


def mat_inv(a, k, mod):
    inv = kernels.mat_inv(tuple(a), k, mod)
    if inv is None:
        raise ValueError("matrix is not invertible")
    return inv


def mat_pow(a, e, k, mod):
    result = identity(k) if mod > 1 else tuple(0 for _ in range(k * k))
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base, k, mod)
        base = mat_mul(base, base, k, mod)
        e >>= 1
    return result


def mat_vec(a, v, k, mod):
    return tuple(sum(a[i * k + j] * v[j] for j in range(k)) % mod for i in range(k))


def reduce(a, mod):
    return tuple(x % mod for x in a)


def mat_order(a, k, mod, bound=10 ** 6):
    one = identity(k)
    x, n = a, 1
    while x != one:
        x = mat_mul(x, a, k, mod)
        n += 1
        if n > bound:
            raise OverflowError("matrix order exceeds bound")
    return n


def gl_order(k: int, n: int) -> int:
    """|GL_k(Z/2^n)| = |GL_k(2)| * 2^((n-1) k^2)."""
    base = prod(2 ** k - 2 ** i for i in range(k))
    return base * 2 ** ((n - 1) * k * k)


@dataclass
class MatSubgroup:
    k: int
    n: int
    generators: list[tuple[int, ...]]
    elements: list[tuple[int, ...]] = field(repr=False)
    label: str = "other"

    @property
    def modulus(self) -> int:
        return 2 ** self.n

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def generate(cls, gens, k, n, label="other", limit=10 ** 6):
        mod = 2 ** n
        one = identity(k)
        gens = [reduce(g, mod) for g in gens]
        seen = {one}
        elems = [one]
        frontier = [one]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mat_mul(x, g, k, mod)
                    if y not in seen:
                        seen.add(y)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
            if len(elems) > limit:
                raise OverflowError("subgroup closure exceeds limit")
        return cls(k, n, gens, elems, label)

    def reduce_to(self, n: int) -> "MatSubgroup":
        return MatSubgroup.generate(self.generators, self.k, n, self.label)

    def contains(self, a) -> bool:
        return reduce(a, self.modulus) in set(self.elements)

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "label": self.label, "order": self.order,
                "generators": [list(g) for g in self.generators]}


# --- polynomial helpers over Z/2^n (coefficient lists, lowest degree first) -----

def _pmod(p, mod):
    p = [c % mod for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, mod)


def _padd(a, b, mod):
    n = max(len(a), len(b))
    return _pmod([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], mod)


def _pdivmod(a, b, mod):
    """Division by a monic polynomial b."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [0], _pmod(a, mod)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] % mod
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _pmod(q, mod), _pmod(a[:db] or [0], mod)


def _bezout_mod2(f, g):
    """s, t with s f + t g = 1 over F_2 (f, g coprime)."""
    r0, r1 = _pmod(f, 2), _pmod(g, 2)
    s0, s1, t0, t1 = [1], [0], [0], [1]
    while r1 != [0]:
        # leading coefficient is 1 over F_2
        q, r = _pdivmod(r0, r1, 2)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pmul(q, s1, 2), 2)
        t0, t1 = t1, _padd(t0, _pmul(q, t1, 2), 2)
    if r0 != [1]:
        raise ArithmeticError("polynomials are not coprime mod 2")
    return s0, t0


def hensel_lift(target, f, g, n):
    """Lift target = f g (mod 2) to a factorization mod 2^n with f, g monic."""
    s, t = _bezout_mod2(f, g)
    f, g = _pmod(f, 2), _pmod(g, 2)
    for j in range(1, n):
        mod = 2 ** (j + 1)
        err = _padd(target, [-c for c in _pmul(f, g, mod)], mod)
        if any(c % 2 ** j for c in err):
            raise ArithmeticError("Hensel invariant broken")
        e = _pmod([(c // 2 ** j) for c in err], 2)
        # f' = f + 2^j (t e mod f), g' = g + 2^j (s e mod g)
        _, df = _pdivmod(_pmul(t, e, 2), f, 2)
        _, dg = _pdivmod(_pmul(s, e, 2), g, 2)
        f = _padd(f, [2 ** j * c for c in df], mod)
        g = _padd(g, [2 ** j * c for c in dg], mod)
    return f, g


def companion(poly, mod):
    """Companion matrix (acting on column vectors) of a monic polynomial."""
    k = len(poly) - 1
    m = [0] * (k * k)
    for i in range(1, k):
        m[i * k + (i - 1)] = 1
    for i in range(k):
        m[i * k + (k - 1)] = (-poly[i]) % mod
    return tuple(m)


C3_GL2 = (0, -1, 1, -1)

# x^3 + x + 1 divides x^7 - 1 over F_2; the cofactor is (x + 1)(x^3 + x^2 + 1)
_CUBIC = [1, 1, 0, 1]
_COFACTOR = [1, 1, 1, 0, 1]  # (x+1)(x^3+x^2+1) = x^4 + x^2 + x + 1 over F_2

# primitive polynomials over F_2, degree 1..4 (Singer cycles for the Borel family)
PRIMITIVE_POLYS = {1: [1, 1], 2: [1, 1, 1], 3: [1, 1, 0, 1], 4: [1, 1, 0, 0, 1]}


def lifted_cubic(n: int) -> list[int]:
    """Monic cubic factor of x^7 - 1 mod 2^n reducing to x^3 + x + 1."""
    target = [-1, 0, 0, 0, 0, 0, 0, 1]
    f, _ = hensel_lift(target, _CUBIC, _COFACTOR, n)
    return f


def _normalizing_order3(c, n):
    """Order-3 M with M C M^-1 = C^2 mod 2^n, built layer by layer from mod 2."""
    k = 3

    def ok(m, level):
        mod = 2 ** level
        cm = reduce(c, mod)
        m = reduce(m, mod)
        if kernels.mat_inv(m, k, mod) is None:
            return False
        lhs = mat_mul(m, cm, k, mod)
        rhs = mat_mul(mat_mul(cm, cm, k, mod), m, k, mod)
        return lhs == rhs and mat_pow(m, 3, k, mod) == identity(k)

    def search(m, level):
        if level == n:
            return m
        step = 2 ** level
        for x in product(range(2), repeat=k * k):
            cand = tuple(a + step * b for a, b in zip(m, x))
            if ok(cand, level + 1):
                found = search(cand, level + 1)
                if found is not None:
                    return found
        return None

    for m0 in product(range(2), repeat=k * k):
        if m0 != identity(k) and ok(m0, 1):
            found = search(m0, 1)
            if found is not None:
                return found
    raise ArithmeticError("no order-3 normalizing element lifts")  # must not occur


def lift_odd_subgroup(k: int, n: int, target: str) -> MatSubgroup:
    """The odd-order subgroup C3 (k=2), C7 or C7:C3 (k=3) of GL_k(Z/2^n)."""
    mod = 2 ** n
    if target == "C3":
        if k != 2:
            raise ValueError("C3 is realized in GL_2")
        return MatSubgroup.generate([reduce(C3_GL2, mod)], 2, n, "C3")
    if target not in ("C7", "C7:C3"):
        raise ValueError(f"unknown target {target!r}")
    if k != 3:
        raise ValueError(f"{target} is realized in GL_3")
    c = companion(lifted_cubic(n), mod)
    if mat_pow(c, 7, 3, mod) != identity(3):
        raise ArithmeticError("lifted companion matrix does not have order 7")
    if target == "C7":
        return MatSubgroup.generate([c], 3, n, "C7")
    m = _normalizing_order3(c, n)
    return MatSubgroup.generate([c, m], 3, n, "C7:C3")


def singer_subgroup(k: int) -> MatSubgroup:
    """Cyclic subgroup of order 2^k - 1 in GL_k(2) acting transitively on nonzero vectors."""
    c = companion(PRIMITIVE_POLYS[k], 2)
    return MatSubgroup.generate([c], k, 1, f"C{2 ** k - 1}")


def _small_generating_set(elements, k, mod):
    gens: list = []
    span = {identity(k)}
    for x in sorted(elements, key=lambda a: (-mat_order(a, k, mod), a)):
        if x not in span:
            gens.append(x)
            span = set(MatSubgroup.generate(gens, k, mod.bit_length() - 1).elements)
            if len(span) == len(elements):
                break
    return gens


def normalizer(s: MatSubgroup, method: str = "auto") -> MatSubgroup:
    """N_{GL_k(Z/2^n)}(S), by exhaustive scan or by lifting one 2-adic layer at a time."""
    k, n = s.k, s.n
    if method == "auto":
        method = "exhaustive" if 2 ** (n * k * k) <= 2 ** 18 or n == 1 else "layered"
    if method == "exhaustive":
        if 2 ** (n * k * k) > EXHAUSTIVE_LIMIT:
            raise OverflowError("exhaustive normalizer scan beyond feasibility bound")
        mod = 2 ** n
        elems = kernels.scan_normalizer(k, mod, s.generators, s.elements, [tuple([0] * (k * k))], 1)
    elif method == "layered":
        s1 = s.reduce_to(1)
        elems = kernels.scan_normalizer(k, 2, s1.generators, s1.elements, [tuple([0] * (k * k))], 1)
        for level in range(2, n + 1):
            sl = s.reduce_to(level)
            elems = kernels.scan_normalizer(k, 2 ** level, sl.generators, sl.elements,
                                            elems, 2 ** (level - 1))
    else:
        raise ValueError(f"unknown method {method!r}")
    elems = sorted(elems)
    gens = _small_generating_set(elems, k, 2 ** n)
    return MatSubgroup(k, n, gens, elems, f"N({s.label})")


@dataclass
class NormalizerReport:
    subgroup: MatSubgroup
    normalizer: MatSubgroup

    @property
    def quotient_order(self) -> int:
        return self.normalizer.order // self.subgroup.order

    def to_json(self) -> dict:
        return {"k": self.subgroup.k, "n": self.subgroup.n, "subgroup": self.subgroup.label,
                "subgroup_order": self.subgroup.order, "normalizer_order": self.normalizer.order,
                "quotient_order": self.quotient_order}


def gl_elements(k: int, n: int = 1) -> list[tuple[int, ...]]:
    mod = 2 ** n
    if 2 ** (n * k * k) > EXHAUSTIVE_LIMIT:
        raise OverflowError("GL enumeration beyond feasibility bound")
    return sorted(kernels.scan_normalizer(k, mod, [], [], [tuple([0] * (k * k))], 1))


def conjugacy_classes_of_subgroups(subgroups, ambient, k, mod):
    """Partition a list of subgroups (frozensets) into ambient-conjugacy classes."""
    remaining = list(dict.fromkeys(subgroups))
    classes = []
    while remaining:
        h = remaining[0]
        orbit = set()
        for g in ambient:
            gi = mat_inv(g, k, mod)
            orbit.add(frozenset(mat_mul(mat_mul(g, x, k, mod), gi, k, mod) for x in h))
        classes.append(sorted(orbit, key=sorted))
        remaining = [x for x in remaining if x not in orbit]
    return classes


def subgroup_conjugacy_count(shape: str, k: int, n: int = 1) -> tuple[int, int]:
    """(number of subgroups of the given shape, number of conjugacy classes) in GL_k(Z/2^n)."""
    mod = 2 ** n
    if gl_order(k, n) > 10 ** 4:
        raise OverflowError("ambient group too large")
    ambient = gl_elements(k, n)
    orders = {g: mat_order(g, k, mod) for g in ambient}
    subs = set()
    if shape in ("C3", "C7"):
        p = int(shape[1:])
        for g in ambient:
            if orders[g] == p:
                subs.add(frozenset(MatSubgroup.generate([g], k, n).elements))
    elif shape == "C7:C3":
        sevens = [g for g in ambient if orders[g] == 7]
        threes = [g for g in ambient if orders[g] == 3]
        for c in sevens:
            cyc = set(MatSubgroup.generate([c], k, n).elements)
            for m in threes:
                conj = mat_mul(mat_mul(m, c, k, mod), mat_inv(m, k, mod), k, mod)
                if conj in cyc:
                    subs.add(frozenset(MatSubgroup.generate([c, m], k, n).elements))
        subs = {h for h in subs if len(h) == 21}
    else:
        raise ValueError(f"unsupported shape {shape!r}")
    return len(subs), len(conjugacy_classes_of_subgroups(sorted(subs, key=sorted), ambient, k, mod))
