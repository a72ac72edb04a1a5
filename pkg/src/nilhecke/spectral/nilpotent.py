"""Dimension of the nilpotent cuspidal functions.

Counted two ways: as the rank of the nilpotent projection of the cuspidal
kernel, and as ``(q - 1) sum_D N(D)`` over the effective divisors D in the
linear system of ``omega^2``, with ``N(sum n_i x_i) = prod (n_i + 1)``.
"""

from __future__ import annotations

import logging
import math
from typing import Any
from typing import NamedTuple

from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.kernel import CuspidalReport
from nilhecke.constant_term.kernel import cuspidal_kernel
from nilhecke.constant_term.strata import divisor_bound_for
from nilhecke.constant_term.strata import effective_divisors
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.errors import UnsupportedGenus
from nilhecke.errors import WindowInsufficient
from nilhecke.spectral.decomposition import independent
from nilhecke.spectral.fourier import NILPOTENT
from nilhecke.spectral.fourier import FourierProjector


logger = logging.getLogger(__name__)


def divisor_weight(divisor: DivisorBar) -> int:
    """``N(D) = prod (n_i + 1)``."""
    return math.prod(n + 1 for _, n in divisor.items())


def nilpotent_formula(curve: Curve) -> int:
    """``(q - 1) sum N(D)`` over effective D linearly equivalent to ``2K``.

    Raises:
        UnsupportedGenus: When ``2K`` has positive degree; only rational
            places are enumerated.
    """
    canonical = curve.canonical_divisor() * 2
    degree = canonical.degree()
    if degree < 0:
        return 0
    if degree > 0:
        msg = f"linear systems of degree {degree} are not enumerated (genus {curve.genus})"
        raise UnsupportedGenus(msg)
    target = curve.divisor_class(canonical)
    total = sum(
        divisor_weight(d)
        for d in effective_divisors(curve, degree)
        if d.degree() == degree and curve.divisor_class(d) == target
    )
    return (curve.q - 1) * total


class NilpotentReport(NamedTuple):
    """Both counts of the nilpotent cuspidal dimension on one window."""

    det: str
    gap: int
    projector_dim: int
    formula_dim: int
    stable: bool

    @property
    def ok(self) -> bool:
        return self.stable and self.projector_dim == self.formula_dim

    def to_dict(self) -> dict[str, Any]:
        return self._asdict() | {"ok": self.ok}


def nilpotent_dimension(moduli: Moduli, report: CuspidalReport) -> int:
    """Rank of the nilpotent projection of the kernel."""
    projector = FourierProjector(moduli, report.window)
    return len(independent([projector.project_rational(v, [NILPOTENT]) for v in report.basis]))


def dim_nilpotent_cuspidal(
    moduli: Moduli, spec: WindowSpec, dmax: int | None = None, margin: int = 2
) -> NilpotentReport:
    """Projector-side and formula-side dimension of the nilpotent cuspidal part.

    The projector side is recomputed on the window of gap ``spec.gap + 2``.

    Raises:
        WindowInsufficient: If the projector side changes on the larger window.
        UnsupportedGenus: If the formula cannot be evaluated.
    """
    curve = moduli.curve
    formula = nilpotent_formula(curve)
    if dmax is None:
        dmax = divisor_bound_for(curve.genus, spec.gap)
    dims = []
    for gap in (spec.gap, spec.gap + 2):
        report = cuspidal_kernel(moduli, spec._replace(gap=gap), dmax + (gap - spec.gap), margin)
        dims.append(nilpotent_dimension(moduli, report))
    if dims[0] != dims[1]:
        msg = (
            f"nilpotent dimension on {spec.det.label()} moved from {dims[0]} at gap {spec.gap}"
            f" to {dims[1]} at gap {spec.gap + 2}"
        )
        raise WindowInsufficient(msg)
    logger.info(
        "nilpotent cuspidal dimension on %s: projector %d, formula %d",
        spec.det.label(),
        dims[0],
        formula,
    )
    return NilpotentReport(spec.det.label(), spec.gap, dims[0], formula, True)
