"""Constant terms on P^1 through quasi line bundles.

The bundle of ``t g_D`` is an extension ``0 -> L -> V -> M -> 0`` of quasi
line bundles: ``L = a_1 (eps, t^n)`` and ``M = a_2 t^-n (eps, t^n)``. The
groupoid of such extensions is ``[H^1(Hom(M, L)) / H^0(Hom(M, L))]`` with
the action trivial, so pushing ``f`` forward to the stratum point gives

    q_* p^* f(t) = sum_{e in H^1} f(V_e) / |H^0(Hom(M, L))|,

and the constant term is ``vol * q_* p^* f`` with

    vol = kappa * |H^0(Hom(M, L))| / |H^1(Hom(M, L))|.

Every extension class is classified separately here, from a lattice model
built out of ``Hom(M, L)`` itself, and compared with the fiberwise engine.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from fractions import Fraction
from typing import Any
from typing import NamedTuple

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.window import BundleClass
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.engine import ConstantTermEngine
from nilhecke.constant_term.engine import Functional
from nilhecke.constant_term.engine import evaluate
from nilhecke.constant_term.engine import kappa
from nilhecke.constant_term.engine import restrict
from nilhecke.constant_term.strata import TorusPoint
from nilhecke.constant_term.strata import stratum_points
from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.adeles import LocalLattice
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import Place
from nilhecke.errors import InteriorEmpty
from nilhecke.errors import OutOfWindow
from nilhecke.errors import UnsupportedGenus
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.linalg import all_vectors


logger = logging.getLogger(__name__)


class QuasiLineBundle(NamedTuple):
    """The sheaf with local lattice ``b_p (eps O + t^n_p O)``, n the multiplicity in D.

    It is ``O[D]`` twisted by the idele b, and standard away from b and D.
    """

    divisor: DivisorBar
    scale: dict[Place, LaurentElement]

    def places(self) -> list[Place]:
        return sorted(set(self.scale) | set(self.divisor.support()))

    def at(self, place: Place, field: FiniteField, prec: int) -> LaurentElement:
        hit = self.scale.get(place)
        return LaurentElement.one(field, prec) if hit is None else hit

    def generators(self, place: Place, field: FiniteField, prec: int) -> list[LaurentElement]:
        b = self.at(place, field, prec)
        eps = LaurentElement.monomial(field, DualScalar.of(field, 0, 1), 0, prec)
        return [b * eps, b.shift(self.divisor[place])]

    def lattices(self, field: FiniteField, prec: int) -> dict[Place, LocalLattice]:
        out = {}
        for p in self.places():
            hi = self.at(p, field, prec).red.order() + self.divisor[p]
            out[p] = LocalLattice([(g,) for g in self.generators(p, field, prec)], hi)
        return out

    def dual(self, field: FiniteField, prec: int) -> QuasiLineBundle:
        """``Hom(self, O)``: the idele ``b^-1 t^-n`` with the same divisor."""
        scale = {
            p: self.at(p, field, prec).inverse().shift(-self.divisor[p]) for p in self.places()
        }
        return QuasiLineBundle(self.divisor, scale)

    def colon(self, target: QuasiLineBundle, field: FiniteField, prec: int) -> QuasiLineBundle:
        """``Hom(self, target)`` for two quasi line bundles on the same divisor."""
        scale = {
            p: (target.at(p, field, prec) * self.at(p, field, prec).inverse()).shift(-self.divisor[p])
            for p in sorted(set(self.places()) | set(target.places()))
        }
        return QuasiLineBundle(self.divisor, scale)


def sub_quotient(point: TorusPoint, field: FiniteField, prec: int) -> tuple[QuasiLineBundle, QuasiLineBundle]:
    """Sub and quotient of the bundle of ``t g_D``."""
    one = LaurentElement.one(field, prec)
    second = {
        p: point.second.get(p, one).shift(-point.divisor[p]) for p in point.places()
    }
    return QuasiLineBundle(point.divisor, dict(point.first)), QuasiLineBundle(point.divisor, second)


def _integral(x: LaurentElement, y: LaurentElement) -> bool:
    return x.is_integral() and y.is_integral()


def _in_lattice(g: Mat2, x: LaurentElement) -> bool:
    """Whether ``(x, 0)`` lies in ``g O^2``."""
    gi = g.inverse()
    return _integral(gi.a * x, gi.c * x)


def check_sub(point: TorusPoint, curve: Curve, prec: int) -> bool:
    """``L`` lies in the first coordinate of V and is saturated there."""
    f = curve.field
    g = point.matrix(curve, prec)
    sub, _ = sub_quotient(point, f, prec)
    eps = LaurentElement.monomial(f, DualScalar.of(f, 0, 1), -1, prec)
    for p in point.places():
        gp = g.at(p)
        if not all(_in_lattice(gp, x) for x in sub.generators(p, f, prec)):
            return False
        b = sub.at(p, f, prec)
        n = point.divisor[p]
        if _in_lattice(gp, b * eps):
            return False
        if n and _in_lattice(gp, b.shift(n - 1)):
            return False
    return True


def check_dual(bundle: QuasiLineBundle, field: FiniteField, prec: int) -> bool:
    """The dual pairs integrally with the bundle and is the largest such lattice."""
    dual = bundle.dual(field, prec)
    for p in bundle.places():
        gens = bundle.generators(p, field, prec)
        duals = dual.generators(p, field, prec)
        if not all((x * y).is_integral() for x in gens for y in duals):
            return False
        for y in duals:
            if all((x * y.shift(-1)).is_integral() for x in gens):
                return False
    return True


class GeometricReport(NamedTuple):
    """Comparison of the groupoid pushforward with the fiberwise constant term."""

    divisor: str
    points: int
    trials: int
    nonzero: int
    max_h1: int
    lattices_ok: bool
    dual_ok: bool
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return self.points > 0 and self.lattices_ok and self.dual_ok and not self.mismatches

    def to_dict(self) -> dict[str, Any]:
        return self._asdict() | {"ok": self.ok}


def pushforward(moduli: Moduli, point: TorusPoint, gap: int) -> tuple[Functional, int, int]:
    """``vol * q_* p^* f`` at t as a functional, with ``h^0`` and ``h^1`` of ``Hom(M, L)``."""
    curve = moduli.curve
    f = curve.field
    prec = moduli.prec
    sub, quot = sub_quotient(point, f, prec)
    hom = quot.colon(sub, f, prec)
    space = AdelicQuotient(curve, 1, hom.lattices(f, prec), levels=2)
    h0, h1 = space.h0_dim, space.h1_dim
    reps = [space.h1_representative(j) for j in range(h1)]
    base = point.matrix(curve, prec)
    seen: Counter[BundleClass] = Counter()
    for coeffs in all_vectors(f.p, h1):
        x: dict[Place, LaurentElement] = {}
        for c, (p, vec) in zip(coeffs, reps):
            if c:
                term = vec[0].scale(int(c))
                x[p] = x[p] + term if p in x else term
        u = AdelicMatrix(curve, {p: Mat2.elementary(0, 1, e) for p, e in x.items()}, prec)
        try:
            seen[moduli.canonicalize(u * base if x else base, gap)] += 1
        except OutOfWindow:
            continue
    q = Fraction(curve.q)
    vol = kappa(curve) * q**h0 / q**h1
    weight = 1 / q**h0
    return {cls: vol * weight * m for cls, m in seen.items()}, h0, h1


def geometric_crosscheck(
    moduli: Moduli,
    spec: WindowSpec,
    divisor: DivisorBar,
    trials: int = 20,
    limit: int = 6,
    seed: int = 0,
) -> GeometricReport:
    """Compare ``E_D`` with the quasi-line-bundle pushforward at stratum points.

    Raises:
        UnsupportedGenus: Off the projective line.
        InteriorEmpty: If the window is empty.
    """
    curve = moduli.curve
    if curve.genus:
        msg = f"geometric constant terms are only modelled on P^1, not genus {curve.genus}"
        raise UnsupportedGenus(msg)
    window = moduli.enumerate_window(spec)
    if not len(window):
        msg = f"window {spec.det.label()}, gap {spec.gap} is empty"
        raise InteriorEmpty(msg)
    engine = ConstantTermEngine(moduli, spec.gap)
    rng = random.Random(seed)
    functions = [[Fraction(rng.randint(-5, 5)) for _ in window] for _ in range(trials)]
    points = list(stratum_points(curve, spec.det, divisor, spec.gap, 0, moduli.prec))[:limit]
    bad: list[str] = []
    nonzero = max_h1 = 0
    lattices_ok = dual_ok = True
    for point in points:
        lattices_ok &= check_sub(point, curve, moduli.prec)
        for bundle in sub_quotient(point, curve.field, moduli.prec):
            dual_ok &= check_dual(bundle, curve.field, moduli.prec)
        geo, _, h1 = pushforward(moduli, point, spec.gap)
        max_h1 = max(max_h1, h1)
        fib = restrict(engine.constant_term(point), window)
        geo = restrict(geo, window)
        if geo != fib:
            bad.append(f"{point.label}: functionals differ")
            continue
        for fn in functions:
            value = evaluate(geo, window, fn)
            nonzero += value != 0
    logger.info(
        "geometric constant term on D=%s: %d points, %d mismatches",
        divisor.label(),
        len(points),
        len(bad),
    )
    return GeometricReport(
        divisor.label(), len(points), trials, nonzero, max_h1, lattices_ok, dual_ok, bad
    )
