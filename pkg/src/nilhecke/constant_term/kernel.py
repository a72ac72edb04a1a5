"""Cuspidal kernels of bundle windows.

The cuspidal functions on a window are those killed by ``E_D`` at every
torus point of every stratum. Only strata of degree at most ``dmax`` are
scanned; the result is certified empirically by recomputing with a larger
window and with ``dmax + 2``.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any
from typing import Callable
from typing import NamedTuple

from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.engine import ConstantTermEngine
from nilhecke.constant_term.engine import Functional
from nilhecke.constant_term.engine import as_row
from nilhecke.constant_term.strata import divisor_bound_for
from nilhecke.constant_term.strata import effective_divisors
from nilhecke.constant_term.strata import stratum_points
from nilhecke.errors import InteriorEmpty
from nilhecke.hecke.operators import HeckeMatrix
from nilhecke.rings.linalg import rational_kernel
from nilhecke.rings.linalg import rational_rank


logger = logging.getLogger(__name__)


class CuspidalReport(NamedTuple):
    """Kernel of the constant terms on one window.

    The basis is rational; it is the rational part of the kernel over any
    cyclotomic field since the constraints are rational.
    """

    window: Window
    genus: int
    dmax: int
    basis: list[list[Fraction]]
    strongly_cuspidal: list[list[Fraction]]
    strata: int
    rows: int
    single_term_strata: int
    stability: dict[str, bool | None]

    @property
    def kernel_dim(self) -> int:
        return len(self.basis)

    @property
    def divisor_bound(self) -> int:
        """Stratum degree needed to see every class of the window."""
        return divisor_bound_for(self.genus, self.window.spec.gap)

    def to_dict(self) -> dict[str, Any]:
        return {
            "det": self.window.spec.det.label(),
            "gap": self.window.spec.gap,
            "dmax": self.dmax,
            "classes": [c.label() for c in self.window],
            "kernel_dim": self.kernel_dim,
            "basis": [[str(x) for x in v] for v in self.basis],
            "strongly_cuspidal_dim": len(self.strongly_cuspidal),
            "strata": self.strata,
            "rows": self.rows,
            "single_term_strata": self.single_term_strata,
            "stability": self.stability,
            "divisor_bound": self.divisor_bound,
        }


def constant_term_rows(
    engine: ConstantTermEngine,
    window: Window,
    dmax: int,
    margin: int,
    progress: Callable[[], None] | None = None,
) -> tuple[list[list[Fraction]], list[list[Fraction]], int, int]:
    """Rows of ``E_D`` and of ``E^1`` on the window, deduplicated.

    Returns:
        ``(E_D rows, E^1 rows, points scanned, single-term points)``.
    """
    curve = engine.curve
    seen: set[tuple[Fraction, ...]] = set()
    seen1: set[tuple[Fraction, ...]] = set()
    rows: list[list[Fraction]] = []
    rows1: list[list[Fraction]] = []
    points = single = 0
    for divisor in effective_divisors(curve, dmax):
        for point in stratum_points(
            curve, window.spec.det, divisor, window.spec.gap, margin, engine.prec
        ):
            points += 1
            sums = engine.fiber(point)
            single += sums.single_term
            functional: Functional = {}
            for hit in sums.hits:
                if hit is None:
                    continue
                row1 = as_row({c: Fraction(m) for c, m in hit.items()}, window)
                key1 = tuple(row1)
                if any(row1) and key1 not in seen1:
                    seen1.add(key1)
                    rows1.append(row1)
                for c, m in hit.items():
                    functional[c] = functional.get(c, Fraction(0)) + m
            row = as_row(functional, window)
            key = tuple(row)
            if any(row) and key not in seen:
                seen.add(key)
                rows.append(row)
            if progress is not None:
                progress()
    logger.info(
        "window %s gap %d, dmax %d: %d stratum points, %d distinct rows",
        window.spec.det.label(),
        window.spec.gap,
        dmax,
        points,
        len(rows),
    )
    return rows, rows1, points, single


def cuspidal_kernel(
    moduli: Moduli,
    spec: WindowSpec,
    dmax: int,
    margin: int = 2,
    check_stability: bool = False,
    progress: Callable[[], None] | None = None,
) -> CuspidalReport:
    """``ker E_D`` for ``deg D <= dmax`` on the window of ``spec``.

    The rows are rescaled by ``|H^1| / kappa``, which leaves the kernel unchanged.

    Raises:
        InteriorEmpty: If the window has no classes.
    """
    window = moduli.enumerate_window(spec)
    if not len(window):
        msg = f"window {spec.det.label()}, gap {spec.gap} is empty"
        raise InteriorEmpty(msg)
    engine = ConstantTermEngine(moduli, spec.gap)
    rows, rows1, points, single = constant_term_rows(engine, window, dmax, margin, progress)
    basis = rational_kernel(rows, len(window))
    strong = rational_kernel(rows1, len(window))
    stability: dict[str, bool | None] = {"gap_plus2": None, "dmax_plus2": None}
    if check_stability:
        wider = cuspidal_kernel(moduli, spec._replace(gap=spec.gap + 2), dmax, margin)
        deeper = cuspidal_kernel(moduli, spec, dmax + 2, margin)
        stability["gap_plus2"] = _same_kernel(basis, window, wider)
        stability["dmax_plus2"] = deeper.kernel_dim == len(basis)
    logger.info(
        "cuspidal kernel on %s gap %d: dim %d (strongly cuspidal %d)",
        spec.det.label(),
        spec.gap,
        len(basis),
        len(strong),
    )
    return CuspidalReport(
        window, moduli.curve.genus, dmax, basis, strong, points, len(rows), single, stability
    )


def _same_kernel(basis: list[list[Fraction]], window: Window, wider: CuspidalReport) -> bool:
    """The wider kernel has the same dimension and restricts onto this one."""
    if wider.kernel_dim != len(basis):
        return False
    restricted = [
        [v[wider.window.position(c)] for c in window] for v in wider.basis
    ]
    return rational_rank(restricted + basis) == len(basis) == rational_rank(restricted)


# properties of the kernel


def vanishing_violations(report: CuspidalReport, bound: int | None = None) -> list[str]:
    """Classes with split reduction and gap at least ``bound`` where a kernel vector is nonzero.

    ``bound`` defaults to ``6 genus - 1``.
    """
    if bound is None:
        bound = 6 * report.genus - 1
    bad = []
    for i, cls in enumerate(report.window):
        if cls.is_split() and cls.frame.split_gap >= bound:
            if any(v[i] for v in report.basis):
                bad.append(cls.label())
    return bad


def in_span(vectors: list[list[Fraction]], basis: list[list[Fraction]]) -> bool:
    if not vectors:
        return True
    return rational_rank(basis + vectors) == rational_rank(basis)


def hecke_stable(tc: HeckeMatrix, rows: CuspidalReport, cols: CuspidalReport) -> tuple[int, bool]:
    """Whether ``T_c`` maps the kernel on its column window into the kernel on its rows.

    Images are compared on the interior rows of ``T_c``, against the row
    kernel restricted to those rows.

    Returns:
        ``(vectors tested, all images in the row kernel)``.
    """
    interior = tc.interior_rows()
    images = []
    for v in cols.basis:
        f = [v[cols.window.position(c)] for c in tc.cols]
        tf = tc.apply(f, Fraction(0))
        images.append([Fraction(tf[i]) for i in interior])  # type: ignore[arg-type]
    positions = [rows.window.position(tc.rows[i]) for i in interior]
    restricted = [[v[p] for p in positions] for v in rows.basis]
    return len(images), in_span(images, restricted)
