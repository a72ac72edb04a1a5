"""Truncated Laurent series over F_q and over the dual numbers.

A :class:`LaurentSeries` stores the coefficients of ``t^low .. t^(prec-1)``;
everything from ``t^prec`` on is unknown. Products follow the usual
absolute-precision rule ``min(p1 + v2, p2 + v1)``.

A :class:`LaurentElement` is ``red + eps * eps_part`` with both parts
LaurentSeries, modelling the total fraction ring F_q((t))[eps]/(eps^2).
"""

from __future__ import annotations

import re
from typing import NamedTuple

import numpy as np

from nilhecke.errors import NotAUnit
from nilhecke.errors import PrecisionExhausted
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.field import FiniteField


class LaurentSeries:
    """Laurent series over F_q known modulo ``t^prec``."""

    __slots__ = ("coeffs", "field", "low", "prec")

    def __init__(
        self, field: FiniteField, low: int, coeffs: np.ndarray, prec: int
    ) -> None:
        if prec < low:
            low = prec
        n = prec - low
        arr = np.asarray(coeffs, dtype=np.int64)
        if len(arr) < n:
            arr = np.concatenate([arr, np.zeros(n - len(arr), dtype=np.int64)])
        self.field = field
        self.low = low
        self.coeffs = arr[:n]
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, field: FiniteField, prec: int) -> LaurentSeries:
        return cls(field, prec, np.zeros(0, dtype=np.int64), prec)

    @classmethod
    def constant(cls, field: FiniteField, c: int, prec: int) -> LaurentSeries:
        return cls.monomial(field, c, 0, prec)

    @classmethod
    def monomial(
        cls, field: FiniteField, c: int, k: int, prec: int
    ) -> LaurentSeries:
        if k >= prec or c % field.q == 0:
            return cls.zero(field, prec)
        arr = np.zeros(prec - k, dtype=np.int64)
        arr[0] = c % field.q
        return cls(field, k, arr, prec)

    @classmethod
    def from_coeffs(
        cls, field: FiniteField, coeffs: list[int] | np.ndarray, low: int, prec: int
    ) -> LaurentSeries:
        """Series with the given coefficients from ``t^low`` upwards."""
        if prec <= low:
            return cls.zero(field, prec)
        arr = np.asarray(coeffs, dtype=np.int64)[: prec - low]
        return cls(field, low, arr, prec)

    # inspection

    def coefficient(self, k: int) -> int:
        """Coefficient of ``t^k``.

        Raises:
            PrecisionExhausted: If ``k`` is beyond the known precision.
        """
        if k >= self.prec:
            msg = f"coefficient of t^{k} unknown at precision {self.prec}"
            raise PrecisionExhausted(msg)
        if k < self.low:
            return 0
        return int(self.coeffs[k - self.low])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of ``t^lo .. t^(hi-1)`` as an array.

        Raises:
            PrecisionExhausted: If ``hi`` exceeds the known precision.
        """
        if hi > self.prec:
            msg = f"window up to t^{hi} exceeds precision {self.prec}"
            raise PrecisionExhausted(msg)
        out = np.zeros(max(0, hi - lo), dtype=np.int64)
        a, b = max(lo, self.low), hi
        if b > a:
            out[a - lo : b - lo] = self.coeffs[a - self.low : b - self.low]
        return out

    def nonzero_exponents(self) -> np.ndarray:
        return np.nonzero(self.coeffs)[0] + self.low

    def is_zero(self) -> bool:
        """True if every known coefficient vanishes."""
        return not self.coeffs.any()

    def valuation(self) -> int:
        """Exponent of the first nonzero coefficient.

        Raises:
            PrecisionExhausted: If all known coefficients vanish.
        """
        nz = np.flatnonzero(self.coeffs)
        if len(nz) == 0:
            msg = f"series vanishes up to precision {self.prec}"
            raise PrecisionExhausted(msg)
        return int(nz[0]) + self.low

    def order(self) -> int:
        """Valuation, or the precision when nothing nonzero is known."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[0]) + self.low if len(nz) else self.prec

    def is_integral(self) -> bool:
        return self.order() >= 0

    # arithmetic

    def _aligned(self, other: LaurentSeries) -> tuple[int, int, np.ndarray, np.ndarray]:
        low = min(self.low, other.low)
        prec = min(self.prec, other.prec)
        return low, prec, self.window(low, prec), other.window(low, prec)

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        low, prec, a, b = self._aligned(other)
        return LaurentSeries(self.field, low, self.field.vadd(a, b), prec)

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        low, prec, a, b = self._aligned(other)
        return LaurentSeries(self.field, low, self.field.vsub(a, b), prec)

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(self.field, self.low, self.field.vneg(self.coeffs), self.prec)

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        prec = min(self.prec + other.order(), other.prec + self.order())
        low = self.low + other.low
        if prec <= low:
            return LaurentSeries.zero(self.field, prec)
        prod = self.field.convolve(self.coeffs, other.coeffs)
        return LaurentSeries(self.field, low, prod[: prec - low], prec)

    def scale(self, c: int) -> LaurentSeries:
        return LaurentSeries(
            self.field, self.low, self.field.vscale(c % self.field.q, self.coeffs), self.prec
        )

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by ``t^k``."""
        return LaurentSeries(self.field, self.low + k, self.coeffs, self.prec + k)

    def truncate(self, prec: int) -> LaurentSeries:
        if prec >= self.prec:
            return self
        return LaurentSeries(self.field, self.low, self.coeffs, prec)

    def inverse(self) -> LaurentSeries:
        """Multiplicative inverse; absolute precision drops to ``prec - 2v``.

        Raises:
            NotAUnit: If the series vanishes at known precision.
        """
        try:
            v = self.valuation()
        except PrecisionExhausted as e:
            msg = "cannot invert a series that vanishes at known precision"
            raise NotAUnit(msg) from e
        f = self.field
        n = self.prec - v
        u = self.window(v, self.prec)
        w = np.zeros(n, dtype=np.int64)
        inv0 = f.inv(int(u[0]))
        w[0] = inv0
        for k in range(1, n):
            # sum_{j=1..k} u_j w_{k-j}
            s = _sum_codes(f, f.vmul(u[1 : k + 1], w[k - 1 :: -1]))
            w[k] = f.mul(f.neg(s), inv0)
        return LaurentSeries(f, -v, w, n - v)

    def derivative(self) -> LaurentSeries:
        f = self.field
        exps = np.arange(self.low, self.prec, dtype=np.int64) % f.p
        d = f.vmul(exps, self.coeffs) if f.m == 1 else np.array(
            [f.mul(int(e), int(c)) for e, c in zip(exps, self.coeffs)], dtype=np.int64
        )
        return LaurentSeries(f, self.low - 1, d, self.prec - 1)

    def principal_part(self) -> LaurentSeries:
        """Terms of negative degree, known modulo ``t^0``."""
        if self.prec < 0:
            msg = "principal part needs precision at least 0"
            raise PrecisionExhausted(msg)
        return LaurentSeries(self.field, self.low, self.window(self.low, 0), 0)

    def agrees(self, other: LaurentSeries, prec: int | None = None) -> bool:
        """Coefficient agreement below ``prec`` (default: the common precision)."""
        top = min(self.prec, other.prec) if prec is None else prec
        low = min(self.low, other.low, top)
        return bool(np.array_equal(self.window(low, top), other.window(low, top)))

    def __repr__(self) -> str:
        return format_series(self)


def _sum_codes(field: FiniteField, arr: np.ndarray) -> int:
    """Field sum of an array of element codes."""
    if field.m == 1:
        return int(arr.sum() % field.p)
    digits = field.to_fp(arr).sum(axis=0) % field.p
    return int(field.from_fp(digits))


class Valuation(NamedTuple):
    """Result of :func:`laurent_valuation`."""

    value: int
    eps_torsion: bool


class LaurentElement:
    """The element ``red + eps * eps_part`` of F_q((t))[eps]/(eps^2)."""

    __slots__ = ("eps", "red")

    def __init__(self, red: LaurentSeries, eps: LaurentSeries) -> None:
        self.red = red
        self.eps = eps

    @classmethod
    def zero(cls, field: FiniteField, prec: int) -> LaurentElement:
        z = LaurentSeries.zero(field, prec)
        return cls(z, z)

    @classmethod
    def one(cls, field: FiniteField, prec: int) -> LaurentElement:
        return cls(LaurentSeries.constant(field, 1, prec), LaurentSeries.zero(field, prec))

    @classmethod
    def monomial(
        cls, field: FiniteField, c: DualScalar | int, k: int, prec: int
    ) -> LaurentElement:
        if isinstance(c, int):
            c = DualScalar.of(field, c)
        return cls(
            LaurentSeries.monomial(field, c.a0, k, prec),
            LaurentSeries.monomial(field, c.a1, k, prec),
        )

    @classmethod
    def reduced(cls, series: LaurentSeries) -> LaurentElement:
        """Embed a series over F_q with zero eps-part."""
        return cls(series, LaurentSeries.zero(series.field, series.prec))

    @classmethod
    def eps_only(cls, series: LaurentSeries) -> LaurentElement:
        return cls(LaurentSeries.zero(series.field, series.prec), series)

    @property
    def field(self) -> FiniteField:
        return self.red.field

    @property
    def precision(self) -> int:
        return min(self.red.prec, self.eps.prec)

    def __add__(self, other: LaurentElement) -> LaurentElement:
        return LaurentElement(self.red + other.red, self.eps + other.eps)

    def __sub__(self, other: LaurentElement) -> LaurentElement:
        return LaurentElement(self.red - other.red, self.eps - other.eps)

    def __neg__(self) -> LaurentElement:
        return LaurentElement(-self.red, -self.eps)

    def __mul__(self, other: LaurentElement) -> LaurentElement:
        return LaurentElement(
            self.red * other.red, self.red * other.eps + self.eps * other.red
        )

    def scale(self, c: DualScalar | int) -> LaurentElement:
        if isinstance(c, int):
            return LaurentElement(self.red.scale(c), self.eps.scale(c))
        return LaurentElement(
            self.red.scale(c.a0), self.eps.scale(c.a0) + self.red.scale(c.a1)
        )

    def shift(self, k: int) -> LaurentElement:
        return LaurentElement(self.red.shift(k), self.eps.shift(k))

    def truncate(self, prec: int) -> LaurentElement:
        return LaurentElement(self.red.truncate(prec), self.eps.truncate(prec))

    def times_eps(self) -> LaurentElement:
        return LaurentElement(LaurentSeries.zero(self.field, self.red.prec), self.red)

    def reduction(self) -> LaurentElement:
        return LaurentElement.reduced(self.red)

    def inverse(self) -> LaurentElement:
        """Inverse ``r^-1 - eps * e * r^-2``.

        Raises:
            NotAUnit: If the reduction vanishes (eps-torsion elements).
        """
        ri = self.red.inverse()
        return LaurentElement(ri, -(self.eps * ri * ri))

    def is_zero(self) -> bool:
        return self.red.is_zero() and self.eps.is_zero()

    def order(self) -> int:
        """Smallest exponent carrying a nonzero coefficient in either part."""
        return min(self.red.order(), self.eps.order())

    def is_integral(self) -> bool:
        return self.red.is_integral() and self.eps.is_integral()

    def is_unit_integral(self) -> bool:
        """Unit of D[[t]]: integral with reduction of valuation 0."""
        return self.is_integral() and self.red.order() == 0

    def coefficient(self, k: int) -> DualScalar:
        return DualScalar(self.field, self.red.coefficient(k), self.eps.coefficient(k))

    def principal_part(self) -> LaurentElement:
        return LaurentElement(self.red.principal_part(), self.eps.principal_part())

    def agrees(self, other: LaurentElement, prec: int | None = None) -> bool:
        return self.red.agrees(other.red, prec) and self.eps.agrees(other.eps, prec)

    def __repr__(self) -> str:
        return format_laurent(self)


def laurent_valuation(x: LaurentElement) -> Valuation:
    """Valuation of the reduction, or of the eps-part for eps-torsion elements.

    Raises:
        PrecisionExhausted: If all known coefficients vanish.
    """
    if not x.red.is_zero():
        return Valuation(x.red.valuation(), eps_torsion=False)
    if not x.eps.is_zero():
        return Valuation(x.eps.valuation(), eps_torsion=True)
    msg = f"element vanishes at precision {x.precision}"
    raise PrecisionExhausted(msg)


# text encoding

def _format_terms(series: LaurentSeries, eps: bool) -> list[str]:
    terms = []
    for k in series.nonzero_exponents():
        c = int(series.coeffs[k - series.low])
        parts = [] if c == 1 and (eps or k != 0) else [str(c)]
        if eps:
            parts.append("eps")
        if k == 1:
            parts.append("t")
        elif k != 0:
            parts.append(f"t^{k}")
        terms.append("*".join(parts))
    return terms


def format_series(series: LaurentSeries) -> str:
    body = " + ".join(_format_terms(series, eps=False)) or "0"
    return f"{body}@N={series.prec}"


def format_laurent(x: LaurentElement) -> str:
    """Canonical text form, e.g. ``t^-1 + 2*eps*t^3@N=12``.

    Reduction terms come first, then eps terms, each by increasing exponent;
    ``N`` is the precision of the element.
    """
    terms = _format_terms(x.red, eps=False) + _format_terms(x.eps, eps=True)
    return f"{' + '.join(terms) or '0'}@N={x.precision}"


_TERM_RE = re.compile(
    r"^(?:(?P<coef>\d+)\*?)?(?P<eps>eps)?\*?(?P<t>t(?:\^(?P<exp>-?\d+))?)?$"
)


def parse_laurent(text: str, field: FiniteField, prec: int | None = None) -> LaurentElement:
    """Parse the canonical text form.

    The grammar is ``sum ['@N=' int]`` where ``sum`` is a ``+``/``-``
    separated list of terms ``[c*][eps*][t[^k]]``; ``c`` is an element code.
    An explicit ``@N=`` overrides ``prec``.

    Raises:
        ValueError: On malformed input or missing precision.
    """
    body, _, tail = text.replace(" ", "").partition("@N=")
    if tail:
        prec = int(tail)
    if prec is None:
        msg = f"no precision given for {text!r}"
        raise ValueError(msg)
    result = LaurentElement.zero(field, prec)
    if body in ("", "0"):
        return result
    for sign, chunk in re.findall(r"([+-]?)([^+-]+)", body.replace("^-", "^~")):
        chunk = chunk.replace("^~", "^-")
        m = _TERM_RE.match(chunk)
        if not m or not (m.group("coef") or m.group("eps") or m.group("t")):
            msg = f"malformed term {chunk!r} in {text!r}"
            raise ValueError(msg)
        c = int(m.group("coef") or 1) % field.q
        if sign == "-":
            c = field.neg(c)
        k = 0
        if m.group("t"):
            k = int(m.group("exp")) if m.group("exp") else 1
        coef = DualScalar(field, 0, c) if m.group("eps") else DualScalar(field, c, 0)
        result = result + LaurentElement.monomial(field, coef, k, prec)
    return result
