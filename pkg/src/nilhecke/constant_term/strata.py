"""Points of the torus strata ``T(F) \\ T(A) / T(O)[D] g_D``.

Every bundle is ``u t g_D k`` with u unipotent, ``t = diag(a_1, a_2)``,
``g_D = 1 + eps f_D^-1 E21`` and k integral. The torus part is determined up
to ``T(O)[D]``: pairs of integral units whose reductions agree modulo
``t^n`` at every point of multiplicity n in D. A stratum point is therefore
labelled by the sub and quotient classes ``(L_0, M_0)`` of the reduction, a
unit ratio in ``prod_p (O/t^n_p)^*`` modulo constants, and on an elliptic
curve the ``H^1(O)`` coordinate of the eps-part of ``a_1``.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator
from typing import NamedTuple

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import line_bundle_idele
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.matrices.iwasawa import stratum_matrix
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries


class TorusPoint(NamedTuple):
    """``t = diag(a_1, a_2)`` on the stratum of D."""

    divisor: DivisorBar
    first: dict[Place, LaurentElement]
    second: dict[Place, LaurentElement]
    label: str

    def matrix(self, curve: Curve, prec: int) -> AdelicMatrix:
        """``t g_D``."""
        f = curve.field
        one = LaurentElement.one(f, prec)
        local = {}
        for p in sorted(set(self.first) | set(self.second) | set(self.divisor)):
            m = Mat2.diag(self.first.get(p, one), self.second.get(p, one))
            n = self.divisor[p]
            local[p] = m * stratum_matrix(f, n, prec) if n else m
        return AdelicMatrix(curve, local, prec)

    def ratio(self, field: FiniteField, place: Place, prec: int) -> LaurentSeries:
        """Reduction of ``a_1 / a_2`` at a place."""
        one = LaurentSeries.constant(field, 1, prec)
        a = self.first[place].red if place in self.first else one
        b = self.second[place].red if place in self.second else one
        return a * b.inverse()

    def places(self) -> list[Place]:
        return sorted(set(self.first) | set(self.second) | set(self.divisor))

    def times(self, place: Place, x: LaurentElement, y: LaurentElement) -> TorusPoint:
        """``t diag(x, y)`` at one place."""
        prec = min(x.precision, y.precision)
        one = LaurentElement.one(x.field, prec)
        first = dict(self.first)
        second = dict(self.second)
        first[place] = first.get(place, one) * x
        second[place] = second.get(place, one) * y
        return self._replace(first=first, second=second)

    def on_stratum(self, divisor: DivisorBar) -> TorusPoint:
        return self._replace(divisor=divisor)


def effective_divisors(curve: Curve, dmax: int) -> list[DivisorBar]:
    """Effective divisors supported on rational places with degree at most dmax."""
    places = curve.places()
    out = [DivisorBar()]
    for d in range(1, dmax + 1):
        for combo in itertools.combinations_with_replacement(places, d):
            mult: dict[Place, int] = {}
            for p in combo:
                mult[p] = mult.get(p, 0) + 1
            out.append(DivisorBar(mult))
    return out


def unit_ratios(curve: Curve, divisor: DivisorBar) -> list[tuple[tuple[int, ...], ...]]:
    """``prod_p (F_q[t]/t^n_p)^*`` modulo constants, as coefficient tuples.

    The constant term at the first place of the support is normalized to 1.
    """
    q = curve.q
    factors = []
    for i, (_, n) in enumerate(divisor.items()):
        heads = [1] if i == 0 else list(range(1, q))
        factors.append(
            [(h, *tail) for h in heads for tail in itertools.product(range(q), repeat=n - 1)]
        )
    return [tuple(u) for u in itertools.product(*factors)]


def stratum_points(
    curve: Curve, det: DetLabel, divisor: DivisorBar, gap: int, margin: int, prec: int
) -> Iterator[TorusPoint]:
    """Torus points of the stratum of D with determinant ``det``.

    The reduction is an extension of ``M_0`` by ``L_0``; only splittings with
    ``deg M_0 - deg L_0`` in ``[-gap, gap + margin]`` can reach a window of
    gap at most ``gap``.
    """
    f = curve.field
    d = det.degree
    tau = int(det.tau or 0)
    betas = range(curve.q) if curve.genus else [None]
    for split in range(-gap, gap + margin + 1):
        if (d - split) % 2:
            continue
        for sub in curve.pic_enumerate([(d - split) // 2]):
            quot = curve.pic_add(det.pic, curve.pic_neg(sub))
            for units in unit_ratios(curve, divisor):
                for beta in betas:
                    first = line_bundle_idele(curve, DetLabel(sub, beta), prec)
                    rest = None if beta is None else (tau - beta) % curve.q
                    second = line_bundle_idele(curve, DetLabel(quot, rest), prec)
                    for (p, _), coeffs in zip(divisor.items(), units):
                        u = LaurentElement.reduced(LaurentSeries.from_coeffs(f, list(coeffs), 0, prec))
                        first[p] = first[p] * u if p in first else u
                    yield TorusPoint(
                        divisor, first, second, _label(divisor, sub, quot, units, beta)
                    )


def _label(
    divisor: DivisorBar,
    sub: PicLabel,
    quot: PicLabel,
    units: tuple[tuple[int, ...], ...],
    beta: int | None,
) -> str:
    u = ";".join("".join(str(c) for c in cs) for cs in units)
    b = "" if beta is None else f"|b{beta}"
    return f"D={divisor.label()}|{sub.label()}/{quot.label()}|u{u}{b}"


def divisor_bound_for(genus: int, gap: int) -> int:
    """Largest stratum degree needed to test vanishing on gap at most ``gap``."""
    return (gap + 1) // 2 + genus


# the level torus T(O)[D]


def in_level_torus(divisor: DivisorBar, place: Place, k1: LaurentElement, k2: LaurentElement) -> bool:
    """Whether ``diag(k1, k2)`` lies in ``T(O)[D]`` at one place.

    Both entries are integral units and their reductions agree modulo
    ``t^n`` with n the multiplicity of the place in D.
    """
    if not (k1.is_unit_integral() and k2.is_unit_integral()):
        return False
    n = divisor[place]
    if not n:
        return True
    diff = (k1.red * k2.red.inverse()) - LaurentSeries.constant(k1.field, 1, k1.precision)
    return diff.is_zero() or diff.order() >= n


def random_level_element(
    rng: random.Random, curve: Curve, divisor: DivisorBar, place: Place, prec: int
) -> tuple[LaurentElement, LaurentElement]:
    """A random ``diag(k1, k2)`` in ``T(O)[D]`` at one place."""
    f = curve.field
    q = curve.q
    depth = min(prec, 4)

    def unit() -> LaurentElement:
        red = [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(depth - 1)]
        eps = [rng.randrange(q) for _ in range(depth)]
        return LaurentElement(
            LaurentSeries.from_coeffs(f, red, 0, prec), LaurentSeries.from_coeffs(f, eps, 0, prec)
        )

    k1 = unit()
    n = divisor[place]
    if not n:
        return k1, unit()
    tail = [rng.randrange(q) for _ in range(depth)]
    bump = LaurentSeries.constant(f, 1, prec) + LaurentSeries.from_coeffs(f, tail, n, prec)
    eps = [rng.randrange(q) for _ in range(depth)]
    k2 = k1 * LaurentElement(bump, LaurentSeries.from_coeffs(f, eps, 0, prec))
    return k1, k2


def equivalent_point(
    rng: random.Random, curve: Curve, point: TorusPoint, prec: int
) -> TorusPoint:
    """Another representative of the same stratum point, ``t k`` with k in ``T(O)[D]``."""
    out = point
    for p in point.places():
        k1, k2 = random_level_element(rng, curve, point.divisor, p, prec)
        out = out.times(p, k1, k2)
    return out
