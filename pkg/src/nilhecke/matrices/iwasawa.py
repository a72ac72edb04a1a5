"""Iwasawa decomposition over F_q((t))[eps]: g = b (1 + eps phi_n) k.

The decomposition runs in two steps. First the reduction g-bar is brought
to upper-triangular form by a column operation k1 in GL_2(O-bar). The
remaining eps-correction X = b1^-1 (g k1^-1)_eps then splits into an upper
part (absorbed into B(K)), the polar part of its (2,1) entry (the stratum)
and an integral part (absorbed into GL_2(O)).
"""

from __future__ import annotations

from typing import NamedTuple

from nilhecke.errors import NotInvertible
from nilhecke.errors import PrecisionExhausted
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries


class IwasawaDatum(NamedTuple):
    """Output of :func:`iwasawa_decompose`."""

    b: Mat2
    n: int
    k: Mat2

    def recompose(self) -> Mat2:
        return self.b * stratum_matrix(self.b.field, self.n, self.k.precision) * self.k


def stratum_matrix(field: FiniteField, n: int, prec: int) -> Mat2:
    """``1 + eps * t^-n * E21``; the identity for ``n = 0``."""
    one = Mat2.identity(field, prec)
    if n == 0:
        return one
    return Mat2.elementary(1, 0, LaurentElement.monomial(field, 1, -n, prec).times_eps())


def _split_polar(x: LaurentSeries, prec: int) -> tuple[LaurentSeries, LaurentSeries]:
    """Exact split ``x = polar + integral`` with the polar part a polynomial in 1/t."""
    if x.prec < 0:
        msg = "polar part unknown: precision below 0"
        raise PrecisionExhausted(msg)
    low = min(x.low, 0)
    polar = LaurentSeries.from_coeffs(x.field, x.window(low, 0), low, prec)
    integral = LaurentSeries.from_coeffs(x.field, x.window(0, x.prec), 0, x.prec)
    return polar, integral


def _reduced_column_op(g: Mat2) -> Mat2:
    """k1 in GL_2(O-bar) with ``g-bar k1^-1`` upper triangular."""
    f, prec = g.field, g.precision
    c, d = g.c.reduction(), g.d.reduction()
    if c.red.is_zero():
        return Mat2.identity(f, prec)
    if d.red.order() <= c.red.order():
        return Mat2.elementary(1, 0, c * d.inverse())
    z = LaurentElement.zero(f, prec)
    one = LaurentElement.one(f, prec)
    return Mat2(z, one, one, d * c.inverse())


def iwasawa_decompose(g: Mat2) -> IwasawaDatum:
    """Decompose ``g`` in GL_2(K) as ``b (1 + eps phi_n) k``.

    Args:
        g: Invertible matrix over the local fraction ring.

    Returns:
        The datum (b, n, k) with b upper triangular, k in GL_2(O).

    Raises:
        NotInvertible: If the reduction of det g vanishes.
        PrecisionExhausted: If the stratum cannot be read at this precision.
    """
    if g.det().red.is_zero():
        msg = "Iwasawa decomposition needs an invertible matrix"
        raise NotInvertible(msg)
    f = g.field
    k1 = _reduced_column_op(g)
    full = g * k1.inverse()
    b1 = full.reduction()
    x = b1.inverse() * full.eps_part()
    prec = x.precision
    z = LaurentElement.zero(f, prec)
    upper = Mat2(x.a, x.b, z, x.d)
    polar, integral = _split_polar(x.c.red, prec)
    b = b1 * (Mat2.identity(f, prec) + upper.times_eps())
    k_corr = Mat2.elementary(1, 0, LaurentElement.reduced(integral).times_eps())
    if polar.is_zero():
        return IwasawaDatum(b, 0, k_corr * k1)
    n = -polar.valuation()
    unit = LaurentElement.reduced(polar.shift(n))
    b0 = Mat2.diag(LaurentElement.one(f, prec), unit)
    return IwasawaDatum(b * b0, n, b0.inverse() * k_corr * k1)


def stratum_index(g: Mat2) -> int:
    return iwasawa_decompose(g).n
