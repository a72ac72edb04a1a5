"""Compatibility of ``E_D`` with the Hecke operator of a simple divisor.

Let ``n`` be the multiplicity of ``c-bar`` in D and ``f = f_c``. Decomposing
``g_D h g_c`` for the ``q(q + 1)`` cosets h gives, for ``n > 0``,

    E_D T_c f(t) = sum_{a in A(c)} E_{D - c} f(t diag(1 - eps t^-n a_0, (1 + eps t^-n a_0) f^-1))
                 + sum_{b in F_q} E_{D + c} f(t diag(f^-1, 1 + b t^n)),

and for ``n = 0``

    E_D T_c f(t) = |A(c)| E_D f(t diag(1, f^-1))
                 + sum_{b != 0} E_{D + c} f(t diag(f^-1, b))
                 + E_D f(t diag(f^-1, 1)).

Both sides are computed as functionals on the window of f and compared
exactly, then evaluated on random functions.
"""

from __future__ import annotations

import logging
import random
from fractions import Fraction
from typing import Any
from typing import NamedTuple

from nilhecke.bundles.pic import det_add
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.engine import ConstantTermEngine
from nilhecke.constant_term.engine import Functional
from nilhecke.constant_term.engine import evaluate
from nilhecke.constant_term.engine import restrict
from nilhecke.constant_term.strata import TorusPoint
from nilhecke.constant_term.strata import stratum_points
from nilhecke.curves.base import DivisorBar
from nilhecke.errors import InteriorEmpty
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.laurent import LaurentElement


logger = logging.getLogger(__name__)


class CompatibilityReport(NamedTuple):
    """Exact comparison of both sides of the compatibility identity."""

    divisor: str
    stratum: str
    multiplicity: int
    points: int
    trials: int
    nonzero: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return self.points > 0 and not self.mismatches

    def to_dict(self) -> dict[str, Any]:
        return self._asdict() | {"ok": self.ok}


def _add(acc: dict[Any, Fraction], functional: Functional, weight: int = 1) -> None:
    for cls, w in functional.items():
        acc[cls] = acc.get(cls, Fraction(0)) + weight * w


def lhs(engine: ConstantTermEngine, c: SimpleDivisor, point: TorusPoint) -> Functional:
    """``E_D T_c`` at t: the modifications act on the right of ``u_x t g_D``."""
    acc: Functional = {}
    for m in c.modifications():
        _add(acc, engine.constant_term(point, right=(c.place, m)))
    return acc


def rhs(engine: ConstantTermEngine, c: SimpleDivisor, point: TorusPoint) -> Functional:
    """The right side of the identity at t."""
    f = c.local.field
    prec = engine.prec
    place = c.place
    n = point.divisor[place]
    fc = c.f_c
    inv = fc.inverse()
    one = LaurentElement.one(f, prec)
    up = point.divisor + DivisorBar.point(place)
    acc: Functional = {}
    if n == 0:
        moved = point.times(place, one, inv)
        _add(acc, engine.constant_term(moved), f.q * f.q)
        for b in range(1, f.q):
            moved = point.times(place, inv, LaurentElement.monomial(f, b, 0, prec))
            _add(acc, engine.constant_term(moved.on_stratum(up)))
        _add(acc, engine.constant_term(point.times(place, inv, one)))
        return acc
    down = point.divisor - DivisorBar.point(place)
    for a0 in range(f.q):
        nil = LaurentElement.monomial(f, DualScalar.of(f, 0, a0), -n, prec)
        moved = point.times(place, one - nil, (one + nil) * inv)
        # a runs over A(c) = F_q[eps]; only a_0 enters the torus part
        _add(acc, engine.constant_term(moved.on_stratum(down)), f.q)
    for b in range(f.q):
        unit = one + LaurentElement.monomial(f, b, n, prec)
        moved = point.times(place, inv, unit)
        _add(acc, engine.constant_term(moved.on_stratum(up)))
    return acc


def verify_compatibility(
    moduli: Moduli,
    c: SimpleDivisor,
    spec: WindowSpec,
    divisor: DivisorBar,
    trials: int = 20,
    limit: int = 6,
    margin: int = 2,
    seed: int = 0,
) -> CompatibilityReport:
    """Check ``E_D T_c = (right side)`` at stratum points of determinant ``spec.det``.

    Args:
        moduli: Classifier.
        c: The simple divisor.
        spec: Determinant L of the torus points and gap of the scan.
        divisor: The stratum D.
        trials: Number of random functions f evaluated on both sides.
        limit: Number of stratum points tested.
        margin: Extra gap of the support window of f.
        seed: Seed for the random functions.

    Raises:
        InteriorEmpty: If the support window of f is empty.
    """
    curve = moduli.curve
    det = det_add(curve, spec.det, c.det_shift(curve))
    target = moduli.enumerate_window(WindowSpec(det, spec.gap + margin))
    if not len(target):
        msg = f"support window {det.label()} gap {spec.gap + margin} is empty"
        raise InteriorEmpty(msg)
    engine = ConstantTermEngine(moduli, target.spec.gap)
    rng = random.Random(seed)
    functions = [[Fraction(rng.randint(-5, 5)) for _ in target] for _ in range(trials)]
    points = list(stratum_points(curve, spec.det, divisor, spec.gap, 0, moduli.prec))[:limit]
    bad: list[str] = []
    nonzero = 0
    for point in points:
        left = restrict(lhs(engine, c, point), target)
        right = restrict(rhs(engine, c, point), target)
        if left != right:
            bad.append(f"{point.label}: functionals differ")
            continue
        for f in functions:
            a, b = evaluate(left, target, f), evaluate(right, target, f)
            if a != b:
                bad.append(f"{point.label}: {a} != {b}")
                break
            nonzero += a != 0
    n = divisor[c.place]
    logger.info(
        "E_D T_c compatibility %s on D=%s (n=%d): %d points, %d mismatches",
        c.label(),
        divisor.label(),
        n,
        len(points),
        len(bad),
    )
    return CompatibilityReport(
        c.label(), divisor.label(), n, len(points), trials, nonzero, bad
    )
