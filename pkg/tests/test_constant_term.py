"""Constant terms along strata, their kernel and its cross-checks."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.compatibility import verify_compatibility
from nilhecke.constant_term.engine import ConstantTermEngine
from nilhecke.constant_term.engine import kappa
from nilhecke.constant_term.engine import restrict
from nilhecke.constant_term.geometric import geometric_crosscheck
from nilhecke.constant_term.kernel import cuspidal_kernel
from nilhecke.constant_term.kernel import hecke_stable
from nilhecke.constant_term.kernel import in_span
from nilhecke.constant_term.kernel import vanishing_violations
from nilhecke.constant_term.strata import divisor_bound_for
from nilhecke.constant_term.strata import effective_divisors
from nilhecke.constant_term.strata import equivalent_point
from nilhecke.constant_term.strata import in_level_torus
from nilhecke.constant_term.strata import random_level_element
from nilhecke.constant_term.strata import stratum_points
from nilhecke.constant_term.strata import unit_ratios
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.errors import UnsupportedGenus
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.operators import hecke_matrix


def _spec(moduli: Moduli, det: str = "0", gap: int = 2) -> WindowSpec:
    return WindowSpec(parse_det_label(moduli.curve, det), gap)


class TestStrata:
    def test_effective_divisors(self, p1_q2: ProjectiveLine) -> None:
        assert len(effective_divisors(p1_q2, 0)) == 1
        assert len(effective_divisors(p1_q2, 1)) == 1 + 3
        assert len(effective_divisors(p1_q2, 2)) == 1 + 3 + 6

    def test_unit_ratios(self, p1_q3: ProjectiveLine) -> None:
        zero, one = p1_q3.places()[:2]
        assert len(unit_ratios(p1_q3, DivisorBar.point(zero, 2))) == 3
        assert len(unit_ratios(p1_q3, DivisorBar.point(zero) + DivisorBar.point(one))) == 2
        assert unit_ratios(p1_q3, DivisorBar()) == [()]

    def test_divisor_bound(self) -> None:
        assert divisor_bound_for(0, 2) == 1
        assert divisor_bound_for(1, 2) == 2
        assert divisor_bound_for(0, 0) == 0

    def test_kappa(self, p1_q3: ProjectiveLine, elliptic: EllipticCurve) -> None:
        assert kappa(p1_q3) == Fraction(1, 9)
        assert kappa(elliptic) == 1

    def test_level_torus(self, p1_q3: ProjectiveLine, rng: random.Random) -> None:
        zero = p1_q3.places()[0]
        divisor = DivisorBar.point(zero, 2)
        for _ in range(10):
            k1, k2 = random_level_element(rng, p1_q3, divisor, zero, 8)
            assert in_level_torus(divisor, zero, k1, k2)

    def test_constant_term_ignores_the_representative(
        self, p1_moduli: Moduli, rng: random.Random
    ) -> None:
        spec = _spec(p1_moduli)
        window = p1_moduli.enumerate_window(spec)
        engine = ConstantTermEngine(p1_moduli, spec.gap)
        divisor = DivisorBar.point(p1_moduli.curve.places()[0])
        points = stratum_points(p1_moduli.curve, spec.det, divisor, spec.gap, 0, p1_moduli.prec)
        for point in list(points)[:4]:
            other = equivalent_point(rng, p1_moduli.curve, point, p1_moduli.prec)
            assert restrict(engine.constant_term(point), window) == restrict(
                engine.constant_term(other), window
            ), point.label


class TestCuspidalKernel:
    def test_nothing_is_cuspidal_on_p1(self, p1_q2_moduli: Moduli) -> None:
        report = cuspidal_kernel(p1_q2_moduli, _spec(p1_q2_moduli), dmax=1)
        assert report.kernel_dim == 0
        assert report.strata > 0
        assert not vanishing_violations(report)
        assert report.to_dict()["kernel_dim"] == 0

    def test_in_span(self) -> None:
        basis = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        assert in_span([[Fraction(3), Fraction(-2)]], basis)
        assert in_span([], [])
        assert not in_span([[Fraction(1), Fraction(1)]], [[Fraction(1), Fraction(0)]])

    @pytest.mark.slow
    def test_stability_on_p1(self, p1_moduli: Moduli) -> None:
        report = cuspidal_kernel(p1_moduli, _spec(p1_moduli), dmax=1, check_stability=True)
        assert report.kernel_dim == 0
        assert all(v is not False for v in report.stability.values())

    @pytest.mark.slow
    def test_vanishing_on_the_elliptic_curve(self, elliptic_moduli: Moduli) -> None:
        spec = _spec(elliptic_moduli, gap=4)
        report = cuspidal_kernel(elliptic_moduli, spec, dmax=divisor_bound_for(1, spec.gap))
        assert not vanishing_violations(report)
        assert len(report.strongly_cuspidal) <= report.kernel_dim
        assert in_span(report.strongly_cuspidal, report.basis)

    @pytest.mark.slow
    def test_strongly_cuspidal_kernel_on_the_elliptic_curve(self, elliptic_moduli: Moduli) -> None:
        report = cuspidal_kernel(elliptic_moduli, _spec(elliptic_moduli), dmax=2)
        assert report.kernel_dim > 0
        assert len(report.strongly_cuspidal) <= report.kernel_dim
        assert in_span(report.strongly_cuspidal, report.basis)

    @pytest.mark.slow
    def test_hecke_stability(self, elliptic_moduli: Moduli) -> None:
        spec = _spec(elliptic_moduli)
        rows = cuspidal_kernel(elliptic_moduli, spec, dmax=2)
        c = SimpleDivisor.parse(elliptic_moduli.curve, "0,0:t+eps", elliptic_moduli.prec)
        tc = hecke_matrix(elliptic_moduli, c, rows.window)
        cols_spec = tc.cols.spec
        cols = cuspidal_kernel(
            elliptic_moduli, cols_spec, dmax=divisor_bound_for(1, cols_spec.gap)
        )
        tested, stable = hecke_stable(tc, rows, cols)
        assert tested > 0
        assert stable


class TestCrossChecks:
    @pytest.mark.parametrize("stratum", ["empty", "point"])
    def test_compatibility(self, p1_q2_moduli: Moduli, stratum: str) -> None:
        c = SimpleDivisor.parse(p1_q2_moduli.curve, "0:t+eps", p1_q2_moduli.prec)
        divisor = DivisorBar() if stratum == "empty" else DivisorBar.point(c.place)
        report = verify_compatibility(p1_q2_moduli, c, _spec(p1_q2_moduli, gap=1), divisor)
        assert report.ok, report.mismatches

    def test_geometric(self, p1_moduli: Moduli) -> None:
        divisor = DivisorBar.point(p1_moduli.curve.places()[0])
        report = geometric_crosscheck(p1_moduli, _spec(p1_moduli), divisor, trials=5, limit=3)
        assert report.lattices_ok
        assert report.dual_ok
        assert report.ok, report.mismatches

    def test_geometric_needs_genus_zero(self, elliptic_moduli: Moduli) -> None:
        with pytest.raises(UnsupportedGenus):
            geometric_crosscheck(elliptic_moduli, _spec(elliptic_moduli), DivisorBar())

    @pytest.mark.slow
    @pytest.mark.parametrize("stratum", ["empty", "point"])
    def test_compatibility_on_the_elliptic_curve(self, elliptic_moduli: Moduli, stratum: str) -> None:
        c = SimpleDivisor.parse(elliptic_moduli.curve, "0,0:t+eps", elliptic_moduli.prec)
        divisor = DivisorBar() if stratum == "empty" else DivisorBar.point(c.place)
        report = verify_compatibility(
            elliptic_moduli, c, _spec(elliptic_moduli, gap=1), divisor, trials=20
        )
        assert report.multiplicity == (0 if stratum == "empty" else 1)
        assert report.trials >= 20
        assert report.ok, report.mismatches
