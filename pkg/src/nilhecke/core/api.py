"""Core API module for nilhecke.

This module runs the verification pipelines and assembles their reports.
Stages share one classifier, so windows and frames computed early are
reused later.
"""

from __future__ import annotations

import itertools
import logging
from typing import Any
from typing import Callable

from nilhecke.bundles.adelic import euler_characteristic_expected
from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.pic import two_torsion_twists
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec
from nilhecke.config.settings import RunConfig
from nilhecke.config.settings import load_curve_config
from nilhecke.config.settings import settings
from nilhecke.constant_term.compatibility import verify_compatibility
from nilhecke.constant_term.geometric import geometric_crosscheck
from nilhecke.constant_term.kernel import CuspidalReport
from nilhecke.constant_term.kernel import cuspidal_kernel
from nilhecke.constant_term.kernel import hecke_stable
from nilhecke.constant_term.kernel import vanishing_violations
from nilhecke.constant_term.strata import divisor_bound_for
from nilhecke.curves import load_curve
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.errors import ConfigError
from nilhecke.errors import NilheckeError
from nilhecke.errors import StageError
from nilhecke.hecke.commutation import IdentityReport
from nilhecke.hecke.commutation import coset_count
from nilhecke.hecke.commutation import verify_duality
from nilhecke.hecke.commutation import verify_global_commutation
from nilhecke.hecke.commutation import verify_square_commutation
from nilhecke.hecke.commutation import verify_tensor_identity
from nilhecke.hecke.commutation import verify_twist_commutation
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.modular import verify_modular_route
from nilhecke.hecke.operators import hecke_matrix
from nilhecke.local.commutation import verify_local_commutation
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.local.witness import noncommutation_witness
from nilhecke.reports.cache import WindowCache
from nilhecke.reports.writer import report_envelope
from nilhecke.reports.writer import write_json
from nilhecke.reports.writer import write_triplets
from nilhecke.spectral.decomposition import decompose_kernel
from nilhecke.spectral.nilpotent import dim_nilpotent_cuspidal
from nilhecke.spectral.theorem_f import verify_theorem_F
from nilhecke.types import PipelineResult
from nilhecke.types import Stage
from nilhecke.types import StageResult


logger = logging.getLogger(__name__)

# local equations compared pairwise when no divisors are given
DEFAULT_LOCAL_EQUATIONS = ["t", "t+eps", "t+eps*t", "t+eps+eps*t"]


def default_divisors(curve: Curve) -> list[str]:
    """Two divisors over the first place and one over the second."""
    first, second = (p.label() for p in curve.places()[:2])
    return [f"{first}:t", f"{first}:t+eps", f"{second}:t"]


class PipelineContext:
    """State shared by the stages of one run.

    Args:
        config: The run.
        curve: Its curve backend.
        cache_dir: Window cache directory; None disables the cache.
        matrix_dir: Directory for CSV exports of the Hecke matrices.
    """

    def __init__(
        self,
        config: RunConfig,
        curve: Curve,
        cache_dir: str | None,
        matrix_dir: str | None = None,
    ) -> None:
        self.config = config
        self.curve = curve
        self.moduli = Moduli(
            curve, config.precision, settings.max_window_classes, config.seed
        )
        self.cache = WindowCache(cache_dir, curve) if cache_dir else None
        self.matrix_dir = matrix_dir
        self.det = parse_det_label(curve, config.det)
        texts = config.divisors or default_divisors(curve)
        self.divisors = [SimpleDivisor.parse(curve, d, config.precision) for d in texts]
        self._windows: dict[WindowSpec, Window] = {}
        self.kernel: CuspidalReport | None = None

    def window(self, gap: int | None = None) -> Window:
        spec = WindowSpec(self.det, self.config.gap if gap is None else gap)
        hit = self._windows.get(spec)
        if hit is None:
            if self.cache is not None:
                hit, _ = self.cache.window(self.moduli, spec)
            else:
                hit = self.moduli.enumerate_window(spec)
            self._windows[spec] = hit
        return hit


def local_commute_stage(ctx: PipelineContext) -> StageResult:
    q, prec = ctx.curve.q, ctx.config.precision
    eqs = [d.partition(":")[2] for d in ctx.config.divisors] or DEFAULT_LOCAL_EQUATIONS
    pairs = [verify_local_commutation(q, prec, a, b) for a, b in itertools.combinations(eqs, 2)]
    witness = noncommutation_witness(SimpleDivisorLocal.parse(eqs[0], q, prec))
    return StageResult(
        Stage.LOCAL_COMMUTE,
        {"pairs": [p.to_dict() for p in pairs], "witness": witness._asdict() | {"valid": witness.valid}},
        {"commutation": all(p.ok for p in pairs), "witness": witness.valid},
    )


def euler_checks(moduli: Moduli, window: Window) -> list[dict[str, Any]]:
    """``h^0 - h^1`` of every class against ``2 (deg V-bar + 2 (1 - g))``."""
    out = []
    for cls in window:
        g = moduli.representative(cls)
        coh = g.cohomology
        expected = euler_characteristic_expected(g)
        out.append(
            {
                "class": cls.label(),
                "h0": coh.h0,
                "h1": coh.h1,
                "euler": coh.euler,
                "expected": expected,
                "ok": coh.euler == expected,
            }
        )
    return out


def enumerate_stage(ctx: PipelineContext) -> StageResult:
    window = ctx.window()
    checks = ctx.moduli.mass_checks(window)
    euler = euler_checks(ctx.moduli, window)
    return StageResult(
        Stage.ENUMERATE,
        {
            "det": window.spec.det.label(),
            "gap": window.spec.gap,
            "classes": [c.label() for c in window],
            "mass": [m.to_dict() for m in checks],
            "euler": euler,
        },
        {"mass": all(m.ok for m in checks), "euler": all(e["ok"] for e in euler)},
    )


def hecke_stage(ctx: PipelineContext) -> StageResult:
    rows = ctx.window()
    curve = ctx.curve
    q = curve.q
    counts = {c.label(): coset_count(c) for c in ctx.divisors}
    operators = []
    for c in ctx.divisors:
        tc = hecke_matrix(ctx.moduli, c, rows)
        operators.append({"name": tc.name, "shape": list(tc.shape), "interior": len(tc.interior_rows())})
        if ctx.matrix_dir:
            write_triplets(f"{ctx.matrix_dir}/{_slug(tc.name)}.csv", tc.triplets())
    commutation = [
        verify_global_commutation(ctx.moduli, c, d, rows)
        for c, d in itertools.combinations(ctx.divisors, 2)
    ]
    identities: list[IdentityReport] = []
    modular = []
    trivial = parse_det_label(curve, "0")
    twists = [t for t in two_torsion_twists(curve) if t != trivial]
    for c in ctx.divisors:
        # InteriorEmpty propagates as a stage error
        identities.append(verify_duality(ctx.moduli, c, rows))
        identities.append(verify_tensor_identity(ctx.moduli, c, rows))
        identities.extend(
            verify_twist_commutation(ctx.moduli, c, rows, t) for t in twists
        )
        modular.append(verify_modular_route(ctx.moduli, c, rows))
    first = ctx.divisors[0]
    control = verify_square_commutation(ctx.moduli, first, first, rows)
    data: dict[str, Any] = {
        "cosets": {k: list(v) for k, v in counts.items()},
        "operators": operators,
        "commutation": [r.to_dict() for r in commutation],
        "identities": [r.to_dict() for r in identities],
        "modular": [r.to_dict() for r in modular],
        "negative_control": control.to_dict() | {"detected": bool(control.mismatches)},
    }
    return StageResult(
        Stage.HECKE,
        data,
        {
            "cosets": all(a == b == q * (q + 1) for a, b in counts.values()),
            "commutation": all(r.ok for r in commutation),
            "identities": all(r.ok for r in identities),
            "modular": all(r.ok for r in modular),
        },
    )


def _slug(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name).strip("_")


def kernel_stability(ctx: PipelineContext, report: CuspidalReport) -> list[dict[str, Any]]:
    """Whether every ``T_c`` maps the cuspidal kernel into itself."""
    out = []
    kernels: dict[WindowSpec, CuspidalReport] = {}
    for c in ctx.divisors:
        tc = hecke_matrix(ctx.moduli, c, ctx.window())
        spec = tc.cols.spec
        if spec not in kernels:
            dmax = max(ctx.config.dmax, divisor_bound_for(ctx.curve.genus, spec.gap))
            kernels[spec] = cuspidal_kernel(ctx.moduli, spec, dmax, settings.strata_margin)
        tested, stable = hecke_stable(tc, report, kernels[spec])
        out.append({"operator": tc.name, "tested": tested, "stable": stable})
    return out


def cuspidal_stage(ctx: PipelineContext) -> StageResult:
    spec = ctx.window().spec
    report = cuspidal_kernel(
        ctx.moduli, spec, ctx.config.dmax, settings.strata_margin, check_stability=True
    )
    ctx.kernel = report
    bad = vanishing_violations(report)
    data: dict[str, Any] = {"kernel": report.to_dict(), "vanishing_violations": bad}
    verdicts = {
        "vanishing": not bad,
        "stability": all(v is not False for v in report.stability.values()),
    }
    compat = []
    for c in ctx.divisors:
        for divisor in (DivisorBar(), DivisorBar.point(c.place)):
            compat.append(
                verify_compatibility(ctx.moduli, c, spec, divisor, seed=ctx.config.seed)
            )
    if compat:
        data["compatibility"] = [r.to_dict() for r in compat]
        verdicts["compatibility"] = all(r.ok for r in compat)
    stability = kernel_stability(ctx, report)
    data["hecke_stability"] = stability
    verdicts["hecke_stability"] = all(s["stable"] for s in stability)
    if ctx.curve.genus == 0:
        geo = [
            geometric_crosscheck(ctx.moduli, spec, DivisorBar.point(p, m), seed=ctx.config.seed)
            for p, m in ((ctx.curve.places()[0], 1), (ctx.curve.places()[0], 2))
        ]
        data["geometric"] = [r.to_dict() for r in geo]
        verdicts["geometric"] = all(r.ok for r in geo)
        verdicts["genus0_nullity"] = report.kernel_dim == 0
    return StageResult(Stage.CUSPIDAL, data, verdicts)


def spectral_stage(ctx: PipelineContext) -> StageResult:
    if ctx.curve.field.p == 2:
        # orbit projectors are undefined; nothing to verify
        return StageResult(Stage.SPECTRAL, {"skipped": "characteristic 2"}, {})
    if ctx.kernel is None:
        ctx.kernel = cuspidal_kernel(
            ctx.moduli, ctx.window().spec, ctx.config.dmax, settings.strata_margin
        )
    decomposition = decompose_kernel(ctx.moduli, ctx.kernel)
    data: dict[str, Any] = {
        "buckets": [{"key": k, "dim": v} for k, v in decomposition.keys.items()],
        "decomposition": decomposition.to_dict(),
        "decomposition_ok": decomposition.ok,
    }
    verdicts = {"decomposition": decomposition.ok}
    if ctx.curve.genus == 1:
        nilpotent = dim_nilpotent_cuspidal(
            ctx.moduli, ctx.window().spec, ctx.config.dmax, settings.strata_margin
        )
        data["nilpotent"] = nilpotent.to_dict()
        verdicts["nilpotent"] = nilpotent.ok
    if ctx.config.alpha is not None:
        theorem = verify_theorem_F(
            ctx.moduli,
            ctx.config.alpha,
            ctx.config.gap,
            ctx.divisors,
            margin=settings.strata_margin,
        )
        data["theoremF"] = theorem.to_dict()
        verdicts["theoremF"] = theorem.ok
    return StageResult(Stage.SPECTRAL, data, verdicts)


STAGES: dict[Stage, Callable[[PipelineContext], StageResult]] = {
    Stage.LOCAL_COMMUTE: local_commute_stage,
    Stage.ENUMERATE: enumerate_stage,
    Stage.HECKE: hecke_stage,
    Stage.CUSPIDAL: cuspidal_stage,
    Stage.SPECTRAL: spectral_stage,
}


def parse_stages(names: list[str]) -> list[Stage]:
    """Stages in pipeline order.

    Raises:
        ConfigError: On an unknown stage name.
    """
    try:
        chosen = {Stage(n) for n in names}
    except ValueError as e:
        msg = f"unknown stage in {names}: {e}"
        raise ConfigError(msg) from e
    return [s for s in Stage if s in chosen]


def resolve_curve(config: RunConfig) -> Curve:
    if config.curve is None:
        return load_curve(load_curve_config(config.curve_path or ""))
    return load_curve(config.curve)


def run_pipeline(
    config: RunConfig,
    cache_dir: str | None = None,
    progress: Callable[[str], None] | None = None,
    matrix_dir: str | None = None,
) -> PipelineResult:
    """Run the requested stages and write a single JSON report.

    Args:
        config: The run; echoed into the report.
        cache_dir: Window cache directory; None disables caching.
        progress: Called with each stage name before it starts.
        matrix_dir: Directory for CSV exports of the Hecke matrices.

    Returns:
        Every stage result and the report.

    Raises:
        StageError: If a stage fails with a domain error.
        ConfigError: If the configuration is invalid.
        RuntimeError: On any other failure.
    """
    stages = parse_stages(config.stages)
    curve = resolve_curve(config)
    ctx = PipelineContext(config, curve, cache_dir, matrix_dir)
    results: list[StageResult] = []
    for stage in stages:
        if progress is not None:
            progress(stage.value)
        logger.info("stage %s", stage.value)
        try:
            results.append(STAGES[stage](ctx))
        except NilheckeError as e:
            raise StageError(stage.value, e) from e
        except Exception as e:
            msg = f"Unexpected error in stage '{stage.value}': {e}"
            raise RuntimeError(msg) from e
    echoed = config.model_dump(mode="json")
    partial = PipelineResult(echoed, results, {})
    report = report_envelope(echoed, {r.stage.value: r.data for r in results}, partial.verdicts())
    path = None
    if config.output:
        path = str(write_json(config.output, report))
    return PipelineResult(echoed, results, report, path)
