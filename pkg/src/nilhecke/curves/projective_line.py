"""The projective line over F_q."""

from __future__ import annotations

from nilhecke.curves.base import Curve
from nilhecke.curves.base import CurveFunction
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.curves.base import RRSpace
from nilhecke.rings.laurent import LaurentSeries


def poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def poly_from_roots(roots: list[tuple[int, int]], p: int) -> list[int]:
    """``prod (x - u)^k`` for ``(u, k)`` pairs."""
    out = [1]
    for u, k in roots:
        for _ in range(k):
            out = poly_mul(out, [(-u) % p, 1], p)
    return out


class ProjectiveLine(Curve):
    """P^1 with affine coordinate x; the local parameter at a is ``x - a``
    and at infinity ``1/x``. The fixed differential is ``dx``."""

    genus = 0
    kind = "p1"

    def places(self) -> list[Place]:
        return [Place("affine", a) for a in range(self.q)] + [self.aux_place()]

    def aux_place(self) -> Place:
        return Place("infinity")

    def _local_xy(self, place: Place, prec: int) -> tuple[LaurentSeries, LaurentSeries]:
        f = self.field
        if place.is_infinite:
            x = LaurentSeries.monomial(f, 1, -1, prec)
        else:
            x = LaurentSeries.from_coeffs(f, [place.x, 1], 0, prec)
        return x, LaurentSeries.zero(f, prec)

    def omega_expansion(self, place: Place, prec: int) -> LaurentSeries:
        if place.is_infinite:
            return LaurentSeries.monomial(self.field, -1, -2, prec)
        return LaurentSeries.constant(self.field, 1, prec)

    def canonical_divisor(self) -> DivisorBar:
        return DivisorBar.point(self.aux_place(), -2)

    def rr_basis(self, divisor: DivisorBar) -> RRSpace:
        """``Z(x) x^i / prod (x - a)^(e_a)`` for ``0 <= i <= deg E``, where Z
        carries the forced zeros at places of negative multiplicity."""
        deg = divisor.degree()
        if deg < 0:
            return RRSpace(divisor, [])
        zeros = [(p.x, -m) for p, m in divisor.items() if not p.is_infinite and m < 0]
        poles = tuple((p.x, m) for p, m in divisor.items() if not p.is_infinite and m > 0)
        z = poly_from_roots(zeros, self.q)
        basis = [
            CurveFunction(tuple([0] * i + z), (), poles) for i in range(deg + 1)
        ]
        return RRSpace(divisor, basis)

    def pic_zero(self) -> list[Place | None]:
        return [None]

    def pic_add(self, a: PicLabel, b: PicLabel) -> PicLabel:
        return PicLabel(a.degree + b.degree)

    def line_bundle_divisor(self, label: PicLabel) -> DivisorBar:
        return DivisorBar.point(self.aux_place(), label.degree)

    def divisor_class(self, divisor: DivisorBar) -> PicLabel:
        return PicLabel(divisor.degree())

    def spec(self) -> dict[str, object]:
        return {"type": "p1", "q": self.q}
