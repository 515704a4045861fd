"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) with a common
positive denominator.  The power basis is an integral basis of Z[zeta_N], so
integrality and 2-adic divisibility are read off the coordinates.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the power-basis coordinates of zeta_n^j, 0 <= j < n."""
    phi = totient(n)
    poly = cyclotomic_poly(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce x^phi = -sum poly[i] x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    return tuple(rows)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def _trace_weights(n: int) -> tuple[Fraction, ...]:
    """Normalized trace of each power-basis element zeta_n^i."""
    out = []
    for i in range(totient(n)):
        d = n // gcd(i, n)
        out.append(Fraction(_mobius(d), totient(d)))
    return tuple(out)


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num, den = [-x for x in num], -den
    g = den
    for x in num:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class CycNum:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("conductor", "num", "den", "_hash")

    def __init__(self, conductor: int, num: Iterable[int], den: int = 1):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        num = tuple(num)
        if len(num) != totient(conductor):
            raise ValueError(f"expected {totient(conductor)} coordinates, got {len(num)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.conductor = conductor
        self.num, self.den = _normalize(num, den)
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def from_int(cls, value, conductor: int = 1) -> "CycNum":
        value = Fraction(value)
        num = [0] * totient(conductor)
        num[0] = value.numerator
        return cls(conductor, num, value.denominator)

    @classmethod
    def from_coords(cls, conductor: int, coords: Sequence) -> "CycNum":
        fr = [Fraction(c) for c in coords]
        den = 1
        for f in fr:
            den = _lcm(den, f.denominator)
        return cls(conductor, [int(f * den) for f in fr], den)

    @classmethod
    def from_exponents(cls, conductor: int, exponents: dict[int, int] | Iterable[int]) -> "CycNum":
        """Sum of zeta_N^e (with multiplicity) reduced to the power basis."""
        table = _reduction_table(conductor)
        acc = [0] * totient(conductor)
        items = exponents.items() if isinstance(exponents, dict) else ((e, 1) for e in exponents)
        for e, mult in items:
            if mult:
                row = table[e % conductor]
                for i, r in enumerate(row):
                    if r:
                        acc[i] += mult * r
        return cls(conductor, acc)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    # conductor handling ---------------------------------------------------
    def lift(self, conductor: int) -> "CycNum":
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {conductor}")
        step = conductor // self.conductor
        table = _reduction_table(conductor)
        acc = [0] * totient(conductor)
        for i, c in enumerate(self.num):
            if c:
                for j, r in enumerate(table[(i * step) % conductor]):
                    if r:
                        acc[j] += c * r
        return CycNum(conductor, acc, self.den)

    def _common(self, other) -> tuple["CycNum", "CycNum"]:
        if not isinstance(other, CycNum):
            other = CycNum.from_int(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        n = _lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a.den == b.den:
            return CycNum(a.conductor, [x + y for x, y in zip(a.num, b.num)], a.den)
        return CycNum(a.conductor, [x * b.den + y * a.den for x, y in zip(a.num, b.num)],
                      a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, [-x for x in self.num], self.den)

    def __sub__(self, other):
        a, b = self._common(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycNum(self.conductor, [x * other.numerator for x in self.num],
                          self.den * other.denominator)
        a, b = self._common(other)
        n = a.conductor
        acc = [0] * n
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        acc[(i + j) % n] += x * y
        table = _reduction_table(n)
        out = [0] * len(a.num)
        for e, c in enumerate(acc):
            if c:
                for i, r in enumerate(table[e]):
                    if r:
                        out[i] += c * r
        return CycNum(n, out, a.den * b.den)

    __rmul__ = __mul__

    def galois(self, a: int) -> "CycNum":
        """Apply the automorphism zeta_N -> zeta_N^a (gcd(a, N) = 1)."""
        n = self.conductor
        if gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit mod {n}")
        exps = {}
        for i, c in enumerate(self.num):
            if c:
                e = (a * i) % n
                exps[e] = exps.get(e, 0) + c
        out = CycNum.from_exponents(n, exps)
        return CycNum(n, out.num, self.den)

    def conj(self) -> "CycNum":
        return self.galois(-1)

    def norm_down(self) -> Fraction:
        """Product of all Galois conjugates (a nonzero rational iff self != 0)."""
        n = self.conductor
        prod = CycNum.from_int(1, n)
        for a in range(1, n + 1):
            if gcd(a, n) == 1:
                prod = prod * self.galois(a)
        if not prod.is_rational():
            raise ArithmeticError("norm is not rational")
        return prod.rational()

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        others = CycNum.from_int(1, n)
        for a in range(2, n + 1):
            if gcd(a, n) == 1:
                others = others * self.galois(a)
        norm = (self * others).rational()
        return others * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNum.from_int(1, self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational() == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._common(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        if self._hash is None:
            # must agree across conductors: hash the normalized trace, which lifting preserves
            weights = _trace_weights(self.conductor)
            self._hash = hash(sum(w * c for w, c in zip(weights, self.num)) / self.den)
        return self._hash

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"CycNum[{self.conductor}]({' + '.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {"conductor": self.conductor,
                "coords": [int(c) if c.denominator == 1 else str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "CycNum":
        return cls.from_coords(data["conductor"], [Fraction(c) for c in data["coords"]])


def embed_root(conductor: int, order: int, power: int = 1) -> CycNum:
    """zeta_order^power inside Q(zeta_conductor), with zeta_order = zeta_conductor^(N/order)."""
    if order < 1 or conductor % order:
        raise ValueError(f"root order {order} does not divide conductor {conductor}")
    return CycNum.from_exponents(conductor, [(power * (conductor // order)) % conductor])


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    return (n & -n).bit_length() - 1


def in_2m_O(x: CycNum, m: int) -> bool:
    """True iff x lies in 2^m times the 2-local ring of integers.

    Tested at all primes above 2 at once: after clearing the odd part of the
    denominator every coordinate must be divisible by 2^m.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    e = two_adic_valuation(x.den)
    need = m + e
    return all(c == 0 or two_adic_valuation(c) >= need for c in x.num)


class RootSumVerdict(enum.Enum):
    ALL_EQUAL = "AllEqual"
    SUM_ZERO = "SumZero"
    HYPOTHESIS_FAILS = "HypothesisFails"


class LemmaViolation(ArithmeticError):
    """A sum of roots of unity in 2^m O that is neither constant nor zero."""


def check_root_sum(n: int, m: int, exponents: Sequence[int]) -> RootSumVerdict:
    """Classify sum(zeta^l) for zeta a primitive 2^n-th root and 2^m exponents."""
    if len(exponents) != 2 ** m:
        raise ValueError(f"need {2 ** m} exponents, got {len(exponents)}")
    q = 2 ** n
    s = CycNum.from_exponents(q, list(exponents))
    if not in_2m_O(s, m):
        return RootSumVerdict.HYPOTHESIS_FAILS
    if len({e % q for e in exponents}) == 1:
        return RootSumVerdict.ALL_EQUAL
    if s.is_zero():
        return RootSumVerdict.SUM_ZERO
    raise LemmaViolation(f"n={n}, m={m}, exponents={tuple(exponents)}")


@lru_cache(maxsize=None)
def mult_tensor(conductor: int):
    """T[i][j] = coordinates of zeta^i * zeta^j, as nested tuples of ints."""
    phi = totient(conductor)
    table = _reduction_table(conductor)
    return tuple(tuple(table[(i + j) % conductor] for j in range(phi)) for i in range(phi))


@lru_cache(maxsize=None)
def galois_matrix(conductor: int, a: int):
    """Row i = coordinates of sigma_a(zeta^i) = zeta^(a*i)."""
    if gcd(a, conductor) != 1:
        raise ValueError(f"{a} is not a unit mod {conductor}")
    table = _reduction_table(conductor)
    return tuple(table[(a * i) % conductor] for i in range(totient(conductor)))
