"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored as rational coefficient tuples in the power basis
``1, zeta, ..., zeta^(phi(n)-1)`` and reduced modulo the n-th cyclotomic
polynomial. Function-space values (Fourier coefficients, characters of
finite abelian groups) live here so that every kernel and eigenvector check
is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

from nilhecke.errors import NotAUnit
from nilhecke.rings.field import FiniteField


Rational = Union[int, Fraction]


def _poly_divmod(
    num: list[Fraction], den: list[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    out = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] / den[-1]
        out[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return out, num


def _trim(poly: list[Fraction]) -> list[Fraction]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            poly, rest = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            if rest:
                msg = f"x^{n} - 1 not divisible by Phi_{d}"
                raise ArithmeticError(msg)
    return tuple(_trim(poly))


class CyclotomicField:
    """The field Q(zeta_n)."""

    def __init__(self, n: int) -> None:
        if n < 1:
            msg = f"cyclotomic order must be positive, got {n}"
            raise ValueError(msg)
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1

    def __repr__(self) -> str:
        return f"Q(zeta_{self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("cyclotomic", self.n))

    def reduce(self, poly: list[Fraction]) -> tuple[Fraction, ...]:
        _, rest = _poly_divmod(poly, list(self.modulus))
        rest = rest + [Fraction(0)] * (self.degree - len(rest))
        return tuple(rest[: self.degree])

    def element(self, poly: list[Rational]) -> CycScalar:
        return CycScalar(self, self.reduce([Fraction(c) for c in poly]))

    def zero(self) -> CycScalar:
        return CycScalar(self, (Fraction(0),) * self.degree)

    def one(self) -> CycScalar:
        return self.rational(1)

    def rational(self, c: Rational) -> CycScalar:
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(c)
        return CycScalar(self, tuple(coeffs))

    def zeta(self, k: int = 1) -> CycScalar:
        """The root of unity zeta_n^k."""
        k %= self.n
        return self.element([0] * k + [1])


@lru_cache(maxsize=None)
def get_cyclotomic(n: int) -> CyclotomicField:
    return CyclotomicField(n)


class CycScalar:
    """An element of Q(zeta_n); immutable and hashable."""

    __slots__ = ("coeffs", "field")

    def __init__(self, field: CyclotomicField, coeffs: tuple[Fraction, ...]) -> None:
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other: CycScalar | Rational) -> CycScalar:
        if isinstance(other, CycScalar):
            if other.field != self.field:
                msg = f"mixing {self.field!r} and {other.field!r}"
                raise ValueError(msg)
            return other
        return self.field.rational(other)

    def __add__(self, other: CycScalar | Rational) -> CycScalar:
        o = self._coerce(other)
        return CycScalar(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other: CycScalar | Rational) -> CycScalar:
        o = self._coerce(other)
        return CycScalar(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other: Rational) -> CycScalar:
        return self._coerce(other) - self

    def __neg__(self) -> CycScalar:
        return CycScalar(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other: CycScalar | Rational) -> CycScalar:
        if not isinstance(other, CycScalar):
            c = Fraction(other)
            return CycScalar(self.field, tuple(a * c for a in self.coeffs))
        o = self._coerce(other)
        prod = [Fraction(0)] * (2 * self.field.degree)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycScalar(self.field, self.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> CycScalar:
        """Inverse through the extended Euclidean algorithm modulo Phi_n.

        Raises:
            NotAUnit: For the zero element.
        """
        if not self:
            msg = "zero has no inverse in a cyclotomic field"
            raise NotAUnit(msg)
        r0, r1 = list(self.field.modulus), _trim(list(self.coeffs))
        s0: list[Fraction] = []
        s1: list[Fraction] = [Fraction(1)]
        while len(r1) > 1:
            quo, rem = _poly_divmod(r0, r1)
            prod = _poly_mul(quo, s1)
            s_next = _poly_sub(s0, prod)
            r0, r1 = r1, rem
            s0, s1 = s1, s_next
        c = r1[0]
        return CycScalar(self.field, self.field.reduce([x / c for x in s1]))

    def __truediv__(self, other: CycScalar | Rational) -> CycScalar:
        if not isinstance(other, CycScalar):
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Rational) -> CycScalar:
        return self.inverse() * other

    def conj(self) -> CycScalar:
        """Complex conjugation zeta -> zeta^-1."""
        n = self.field.n
        poly = [Fraction(0)] * n
        for k, a in enumerate(self.coeffs):
            poly[(-k) % n] += a
        return CycScalar(self.field, self.field.reduce(poly))

    def lift(self, target: CyclotomicField) -> CycScalar:
        """Image under Q(zeta_n) -> Q(zeta_m) for n dividing m."""
        if target.n % self.field.n:
            msg = f"{self.field!r} does not embed in {target!r}"
            raise ValueError(msg)
        step = target.n // self.field.n
        poly = [Fraction(0)] * (step * len(self.coeffs) + 1)
        for k, a in enumerate(self.coeffs):
            poly[k * step] += a
        return CycScalar(target, target.reduce(poly))

    def rational_value(self) -> Fraction | None:
        """The value as a rational, or None if it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.n, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for k, a in enumerate(self.coeffs):
            if a:
                base = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                if not base:
                    terms.append(str(a))
                elif a == 1:
                    terms.append(base)
                else:
                    terms.append(f"{a}*{base}")
        return " + ".join(terms) or "0"


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [
        (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]
    return _trim(out)


def psi_eval(field: FiniteField, x: int, target: CyclotomicField | None = None) -> CycScalar:
    """The standard additive character psi(x) = zeta_p^Tr(x).

    Args:
        field: The finite field F_q containing ``x``.
        x: Element code.
        target: Optional larger cyclotomic field (order divisible by p).
    """
    base = get_cyclotomic(field.p)
    value = base.zeta(field.trace(x))
    return value if target is None else value.lift(target)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
