"""Orbit projectors, the nilpotent count and Hitchin fiber eigenbases."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp

from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.kernel import cuspidal_kernel
from nilhecke.constant_term.strata import divisor_bound_for
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.errors import AlphaIsSquare
from nilhecke.errors import CharacteristicTwo
from nilhecke.errors import UnsupportedGenus
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.rings.field import get_field
from nilhecke.spectral.decomposition import decompose_kernel
from nilhecke.spectral.decomposition import projector_identities
from nilhecke.spectral.fourier import NILPOTENT
from nilhecke.spectral.fourier import ZERO
from nilhecke.spectral.fourier import FourierProjector
from nilhecke.spectral.fourier import OrbitKey
from nilhecke.spectral.fourier import galois_buckets
from nilhecke.spectral.fourier import square_class
from nilhecke.spectral.hitchin import character_table
from nilhecke.spectral.hitchin import check_alpha
from nilhecke.spectral.hitchin import hitchin_fiber
from nilhecke.spectral.hitchin import spectral_group_order
from nilhecke.spectral.nilpotent import dim_nilpotent_cuspidal
from nilhecke.spectral.nilpotent import divisor_weight
from nilhecke.spectral.nilpotent import nilpotent_formula
from nilhecke.spectral.theorem_f import verify_theorem_F


class TestBuckets:
    def test_galois_buckets(self) -> None:
        buckets = galois_buckets(get_field(5))
        assert buckets["zero"] == [ZERO]
        assert buckets["nilpotent"] == [NILPOTENT]
        assert sorted(k.d for k in buckets["split"]) == [1, 4]
        assert sorted(k.d for k in buckets["nonsplit"]) == [2, 3]

    def test_square_class(self) -> None:
        assert square_class(get_field(3), 2) == [OrbitKey("semisimple", 2)]
        assert [k.d for k in square_class(get_field(5), 2)] == [2, 3]

    def test_labels(self) -> None:
        assert OrbitKey("semisimple", 2).label() == "semisimple(2)"
        assert NILPOTENT.label() == "nilpotent"
        assert OrbitKey("semisimple", 1).is_split(get_field(3))
        assert not OrbitKey("semisimple", 2).is_split(get_field(3))


class TestFourierProjector:
    def test_needs_odd_characteristic(self, p1_q2_moduli: Moduli) -> None:
        window = p1_q2_moduli.enumerate_window(
            WindowSpec(parse_det_label(p1_q2_moduli.curve, "0"), 1)
        )
        with pytest.raises(CharacteristicTwo):
            FourierProjector(p1_q2_moduli, window)

    def test_projections_add_up(self, p1_moduli: Moduli, rng: random.Random) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "0"), 2))
        projector = FourierProjector(p1_moduli, window)
        f = [Fraction(rng.randint(-3, 3)) for _ in window]
        assert projector.is_complete(f)
        total = [Fraction(0)] * len(window)
        for keys in galois_buckets(p1_moduli.curve.field).values():
            part = projector.project_rational(f, keys)
            total = [a + b for a, b in zip(total, part)]
        assert total == f

    def test_projectors_are_idempotent(self, p1_moduli: Moduli, rng: random.Random) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "1"), 2))
        projector = FourierProjector(p1_moduli, window)
        f = [Fraction(rng.randint(-3, 3)) for _ in window]
        once = projector.project_rational(f, [NILPOTENT])
        assert projector.project_rational(once, [NILPOTENT]) == once

    def test_decomposition_on_p1(self, p1_moduli: Moduli) -> None:
        spec = WindowSpec(parse_det_label(p1_moduli.curve, "0"), 1)
        report = decompose_kernel(p1_moduli, cuspidal_kernel(p1_moduli, spec, dmax=1))
        assert report.kernel_dim == 0
        assert report.complete
        assert report.orthogonal
        assert report.ok

    def test_projector_identities_on_indicators(self, p1_moduli: Moduli) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "1"), 2))
        projector = FourierProjector(p1_moduli, window)
        groups = galois_buckets(p1_moduli.curve.field)
        complete, orthogonal, images = projector_identities(projector, groups)
        assert complete
        assert orthogonal
        assert sorted(images) == sorted(groups)
        assert all(len(v) == len(window) for v in images.values())

    @pytest.mark.slow
    def test_decomposition_on_the_elliptic_curve(self, elliptic_moduli: Moduli) -> None:
        curve = elliptic_moduli.curve
        spec = WindowSpec(parse_det_label(curve, "0"), 2)
        kernel = cuspidal_kernel(elliptic_moduli, spec, dmax=divisor_bound_for(curve.genus, 2))
        report = decompose_kernel(elliptic_moduli, kernel)
        assert report.complete
        assert report.orthogonal


class TestNilpotentFormula:
    def test_divisor_weight(self, p1_q3: ProjectiveLine) -> None:
        zero, one = p1_q3.places()[:2]
        assert divisor_weight(DivisorBar()) == 1
        assert divisor_weight(DivisorBar.point(zero, 2) + DivisorBar.point(one)) == 6

    def test_formula(self, p1_q3: ProjectiveLine, elliptic: EllipticCurve) -> None:
        assert nilpotent_formula(p1_q3) == 0
        assert nilpotent_formula(elliptic) == 2
        assert nilpotent_formula(EllipticCurve(5, 1, 0)) == 4

    @pytest.mark.slow
    def test_projector_matches_formula(self, elliptic_moduli: Moduli) -> None:
        spec = WindowSpec(parse_det_label(elliptic_moduli.curve, "0"), 2)
        report = dim_nilpotent_cuspidal(elliptic_moduli, spec)
        assert report.ok, report.to_dict()


class TestHitchinFiber:
    def test_group_order(self, elliptic: EllipticCurve) -> None:
        assert spectral_group_order(elliptic) == 8
        fiber = hitchin_fiber(elliptic, 2)
        assert fiber.order == 8
        assert fiber.points == 16
        assert fiber.rational == 4
        assert len(fiber.cosets) == 4
        assert len(fiber.characters) == 8
        assert fiber.orthogonal()
        assert fiber.to_dict()["group_order"] == 8

    @pytest.mark.parametrize(
        ("q", "a", "b", "alpha", "order"),
        [(3, 1, 0, 2, 8), (3, 2, 0, 2, 8), (5, 1, 0, 2, 16), (5, 1, 1, 3, 6)],
    )
    def test_order_follows_the_point_counts(
        self, q: int, a: int, b: int, alpha: int, order: int
    ) -> None:
        curve = EllipticCurve(q, a, b)
        fiber = hitchin_fiber(curve, alpha)
        assert spectral_group_order(curve) == order
        assert fiber.order == order
        assert fiber.rational == curve.count_points(1)
        assert fiber.points == curve.count_points(2)
        assert len(fiber.characters) == order
        assert fiber.orthogonal()
        assert fiber.elements[0] == (0, None)

    def test_character_coordinates_are_the_identity(self, elliptic: EllipticCurve) -> None:
        coords = character_coordinates(hitchin_fiber(elliptic, 2))
        assert coords is not None
        assert coords == [[Fraction(int(i == j)) for j in range(8)] for i in range(8)]

    @pytest.mark.parametrize("alpha", [0, 1, 4])
    def test_alpha_must_be_a_non_square(self, elliptic: EllipticCurve, alpha: int) -> None:
        with pytest.raises(AlphaIsSquare):
            check_alpha(elliptic, alpha)

    def test_needs_odd_characteristic(self, p1_q2: ProjectiveLine) -> None:
        with pytest.raises(CharacteristicTwo):
            check_alpha(p1_q2, 1)

    def test_needs_an_elliptic_curve(self, p1_q3: ProjectiveLine) -> None:
        with pytest.raises(UnsupportedGenus):
            hitchin_fiber(p1_q3, 2)

    def test_character_table_of_a_cyclic_group(self) -> None:
        exponent, table = character_table([0, 1, 2, 3], lambda x, y: (x + y) % 4, 0)
        assert exponent == 4
        assert len(table) == 4
        assert all(row[0] == 1 for row in table)

    @pytest.mark.slow
    def test_eigenbasis(self, elliptic_moduli: Moduli) -> None:
        curve = elliptic_moduli.curve
        divisors = [
            SimpleDivisor.parse(curve, text, elliptic_moduli.prec)
            for text in ("0,0:t", "0,0:t+eps", "2,1:t")
        ]
        report = verify_theorem_F(elliptic_moduli, 2, 2, divisors)
        assert report.group_order == 8
        assert report.bucket_dim == 8
        assert report.ok, report.to_dict()
        assert report.diagonalizable
        assert len(report.eigenvalues) == 8
        assert all(e["d"] == "2" for e in report.eigenvalues)


class TestJointEigenbasis:
    def test_commuting_operators(self) -> None:
        a = sp.diag(1, 1, 2)
        b = sp.Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 5]])
        vectors, complete = joint_eigenbasis({"a": a, "b": b})
        assert complete
        assert len(vectors) == 3
        for v in vectors:
            for m in (a, b):
                w = m * v
                k = next(i for i in range(3) if v[i] != 0)
                assert w == (w[k] / v[k]) * v

    def test_degenerate_spectrum_still_spans(self) -> None:
        vectors, complete = joint_eigenbasis({"one": sp.eye(2), "two": 2 * sp.eye(2)})
        assert complete
        assert sp.Matrix.hstack(*vectors).rank() == 2

    def test_jordan_block_is_not_diagonalizable(self) -> None:
        _, complete = joint_eigenbasis({"j": sp.Matrix([[1, 1], [0, 1]])})
        assert not complete
