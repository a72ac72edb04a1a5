"""2x2 matrices over F_q((t))[eps]/(eps^2)."""

from __future__ import annotations

import random
from typing import Iterator
from typing import Union

from nilhecke.errors import NotAUnit
from nilhecke.errors import NotInvertible
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.laurent import format_laurent
from nilhecke.rings.laurent import parse_laurent


Entry = Union[LaurentElement, DualScalar, int]


class Mat2:
    """The matrix ``[[a, b], [c, d]]`` with LaurentElement entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(
        self, a: LaurentElement, b: LaurentElement, c: LaurentElement, d: LaurentElement
    ) -> None:
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    # constructors

    @classmethod
    def of(cls, field: FiniteField, prec: int, a: Entry, b: Entry, c: Entry, d: Entry) -> Mat2:
        """Build from entries that may be constants."""

        def lift(x: Entry) -> LaurentElement:
            if isinstance(x, LaurentElement):
                return x
            return LaurentElement.monomial(field, x, 0, prec)

        return cls(lift(a), lift(b), lift(c), lift(d))

    @classmethod
    def identity(cls, field: FiniteField, prec: int) -> Mat2:
        return cls.of(field, prec, 1, 0, 0, 1)

    @classmethod
    def zero(cls, field: FiniteField, prec: int) -> Mat2:
        return cls.of(field, prec, 0, 0, 0, 0)

    @classmethod
    def diag(cls, x: LaurentElement, y: LaurentElement) -> Mat2:
        z = LaurentElement.zero(x.field, min(x.precision, y.precision))
        return cls(x, z, z, y)

    @classmethod
    def elementary(cls, i: int, j: int, x: LaurentElement) -> Mat2:
        """Identity plus ``x`` at position (i, j), i != j (0-based)."""
        one = LaurentElement.one(x.field, x.precision)
        z = LaurentElement.zero(x.field, x.precision)
        if (i, j) == (0, 1):
            return cls(one, x, z, one)
        return cls(one, z, x, one)

    @classmethod
    def unit_matrix(cls, i: int, j: int, x: LaurentElement) -> Mat2:
        """The matrix with ``x`` at (i, j) and zeros elsewhere."""
        z = LaurentElement.zero(x.field, x.precision)
        entries = [z, z, z, z]
        entries[2 * i + j] = x
        return cls(*entries)

    # inspection

    @property
    def field(self) -> FiniteField:
        return self.a.field

    @property
    def precision(self) -> int:
        return min(e.precision for e in self.entries())

    def entries(self) -> Iterator[LaurentElement]:
        yield from (self.a, self.b, self.c, self.d)

    def min_order(self) -> int:
        """Smallest exponent carried by any entry, either part."""
        return min(e.order() for e in self.entries())

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.entries())

    def is_integral_unit(self) -> bool:
        """Membership in GL_2(O): integral with unit determinant."""
        return self.is_integral() and self.det().is_unit_integral()

    def is_upper_triangular(self) -> bool:
        return self.c.is_zero()

    def agrees(self, other: Mat2, prec: int | None = None) -> bool:
        return all(x.agrees(y, prec) for x, y in zip(self.entries(), other.entries()))

    # algebra

    def __mul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, x: LaurentElement) -> Mat2:
        return Mat2(x * self.a, x * self.b, x * self.c, x * self.d)

    def det(self) -> LaurentElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> LaurentElement:
        return self.a + self.d

    def adjugate(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> Mat2:
        """Inverse in GL_2(K).

        Raises:
            NotInvertible: If the determinant is not a unit of K.
        """
        try:
            inv = self.det().inverse()
        except NotAUnit as e:
            msg = "matrix determinant is not a unit"
            raise NotInvertible(msg) from e
        return self.adjugate().scale(inv)

    def theta(self) -> Mat2:
        """The transpose anti-involution."""
        return Mat2(self.a, self.c, self.b, self.d)

    def reduction(self) -> Mat2:
        """Reduction modulo eps."""
        return Mat2(*(e.reduction() for e in self.entries()))

    def eps_part(self) -> Mat2:
        """The eps-coefficient matrix, embedded with zero eps-part."""
        return Mat2(*(LaurentElement.reduced(e.eps) for e in self.entries()))

    def times_eps(self) -> Mat2:
        return Mat2(*(e.times_eps() for e in self.entries()))

    def truncate(self, prec: int) -> Mat2:
        return Mat2(*(e.truncate(prec) for e in self.entries()))

    def shift(self, k: int) -> Mat2:
        return Mat2(*(e.shift(k) for e in self.entries()))

    def __repr__(self) -> str:
        return format_mat2(self)


def format_mat2(m: Mat2) -> str:
    """Text form ``[[a,b],[c,d]]`` with entries in the Laurent grammar."""
    a, b, c, d = (format_laurent(e) for e in m.entries())
    return f"[[{a},{b}],[{c},{d}]]"


def parse_mat2(text: str, field: FiniteField, prec: int | None = None) -> Mat2:
    """Inverse of :func:`format_mat2`.

    Raises:
        ValueError: On malformed input.
    """
    body = text.replace(" ", "")
    if not (body.startswith("[[") and body.endswith("]]")):
        msg = f"matrix must look like [[a,b],[c,d]], got {text!r}"
        raise ValueError(msg)
    rows = body[2:-2].split("],[")
    if len(rows) != 2:
        msg = f"matrix must have two rows: {text!r}"
        raise ValueError(msg)
    cells = [cell for row in rows for cell in row.split(",")]
    if len(cells) != 4:
        msg = f"matrix must have four entries: {text!r}"
        raise ValueError(msg)
    a, b, c, d = (parse_laurent(cell, field, prec) for cell in cells)
    return Mat2(a, b, c, d)


def random_laurent(
    rng: random.Random,
    field: FiniteField,
    prec: int,
    low: int = -4,
    high: int = 4,
) -> LaurentElement:
    """Random element with both parts supported on ``t^low .. t^(prec-1)``."""
    n = prec - low
    red = [rng.randrange(field.q) for _ in range(n)]
    eps = [rng.randrange(field.q) for _ in range(n)]
    lead = rng.randint(low, high)
    for i in range(min(n, lead - low)):
        red[i] = 0
    if lead - low < n:
        red[lead - low] = rng.randrange(1, field.q)
    return LaurentElement(
        LaurentSeries.from_coeffs(field, red, low, prec),
        LaurentSeries.from_coeffs(field, eps, low, prec),
    )


def random_gl2(
    rng: random.Random, field: FiniteField, prec: int, low: int = -4, high: int = 4
) -> Mat2:
    """Random element of GL_2(K) with entry valuations in ``[low, high]``."""
    while True:
        m = Mat2(*(random_laurent(rng, field, prec, low, high) for _ in range(4)))
        if not m.det().red.is_zero():
            return m


def random_gl2_integral(rng: random.Random, field: FiniteField, prec: int) -> Mat2:
    """Random element of GL_2(O)."""
    while True:
        m = Mat2(*(random_laurent(rng, field, prec, 0, 2) for _ in range(4)))
        if m.is_integral_unit():
            return m


def random_upper(
    rng: random.Random, field: FiniteField, prec: int, low: int = -4, high: int = 4
) -> Mat2:
    """Random invertible upper-triangular matrix over K."""
    a = random_laurent(rng, field, prec, low, high)
    b = random_laurent(rng, field, prec, low, high)
    d = random_laurent(rng, field, prec, low, high)
    return Mat2(a, b, LaurentElement.zero(field, prec), d)
