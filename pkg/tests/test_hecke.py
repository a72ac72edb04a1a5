"""Global Hecke operators on windows and the identities they satisfy."""

from __future__ import annotations

from fractions import Fraction

import pytest

from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.pic import two_torsion_twists
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec
from nilhecke.errors import ConfigError
from nilhecke.hecke.commutation import coset_count
from nilhecke.hecke.commutation import verify_duality
from nilhecke.hecke.commutation import verify_global_commutation
from nilhecke.hecke.commutation import verify_square_commutation
from nilhecke.hecke.commutation import verify_tensor_identity
from nilhecke.hecke.commutation import verify_twist_commutation
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.modular import verify_modular_route
from nilhecke.hecke.operators import hecke_matrix
from nilhecke.hecke.operators import hecke_matrix_prime


def _rows(moduli: Moduli, det: str = "0", gap: int = 1) -> Window:
    return moduli.enumerate_window(WindowSpec(parse_det_label(moduli.curve, det), gap))


def _divisor(moduli: Moduli, text: str) -> SimpleDivisor:
    return SimpleDivisor.parse(moduli.curve, text, moduli.prec)


class TestSimpleDivisor:
    @pytest.mark.parametrize("text", ["0:t", "1:t+eps", "inf:t+eps*t"])
    def test_coset_count(self, p1_q2_moduli: Moduli, text: str) -> None:
        assert coset_count(_divisor(p1_q2_moduli, text)) == (6, 6)

    @pytest.mark.parametrize("text", ["0", "0:", "7:t", "0:t^2"])
    def test_malformed(self, p1_q2_moduli: Moduli, text: str) -> None:
        with pytest.raises(ConfigError):
            _divisor(p1_q2_moduli, text)

    def test_label(self, p1_q2_moduli: Moduli) -> None:
        assert _divisor(p1_q2_moduli, "0:t+eps").label().startswith("0:")


class TestOperators:
    def test_interior_rows_keep_their_mass(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t+eps")
        tc = hecke_matrix(p1_q2_moduli, c, _rows(p1_q2_moduli))
        assert tc.interior_rows()
        for i in tc.interior_rows():
            assert tc.row_sum(i) == len(c.modifications())

    def test_determinant_shift(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t")
        rows = _rows(p1_q2_moduli)
        assert hecke_matrix(p1_q2_moduli, c, rows).cols.spec.det.degree == 1
        assert hecke_matrix_prime(p1_q2_moduli, c, rows).cols.spec.det.degree == -1

    def test_triplets_and_apply(self, p1_q2_moduli: Moduli) -> None:
        tc = hecke_matrix(p1_q2_moduli, _divisor(p1_q2_moduli, "0:t"), _rows(p1_q2_moduli))
        triplets = tc.triplets()
        assert triplets == sorted(triplets)
        assert all(m > 0 for _, _, m in triplets)
        ones = [Fraction(1)] * len(tc.cols)
        for i, v in enumerate(tc.apply(ones, Fraction(0))):
            if tc.interior[i]:
                assert v == tc.row_sum(i)
            else:
                assert v is None
        assert tc.as_dict()["name"] == tc.name


class TestIdentities:
    def test_commutation_at_one_place(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t")
        d = _divisor(p1_q2_moduli, "0:t+eps")
        report = verify_global_commutation(p1_q2_moduli, c, d, _rows(p1_q2_moduli))
        assert report.interior > 0
        assert report.ok, report.mismatches

    def test_commutation_at_two_places(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t+eps")
        d = _divisor(p1_q2_moduli, "1:t")
        assert verify_global_commutation(p1_q2_moduli, c, d, _rows(p1_q2_moduli)).ok

    def test_duality(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t+eps")
        report = verify_duality(p1_q2_moduli, c, _rows(p1_q2_moduli))
        assert report.ok, report.mismatches

    def test_tensor_identity(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t+eps*t")
        report = verify_tensor_identity(p1_q2_moduli, c, _rows(p1_q2_moduli))
        assert report.ok, report.mismatches

    def test_modular_route(self, p1_q2_moduli: Moduli) -> None:
        c = _divisor(p1_q2_moduli, "0:t+eps")
        report = verify_modular_route(p1_q2_moduli, c, _rows(p1_q2_moduli), limit=3)
        assert report.classes
        assert report.ok, report.mismatches
        assert report.to_dict()["ok"] is True

    @pytest.mark.slow
    def test_commutation_over_f3(self, p1_moduli: Moduli) -> None:
        c = _divisor(p1_moduli, "0:t")
        d = _divisor(p1_moduli, "0:t+eps")
        assert verify_global_commutation(p1_moduli, c, d, _rows(p1_moduli)).ok

    @pytest.mark.slow
    def test_twists_on_the_elliptic_curve(self, elliptic_moduli: Moduli) -> None:
        curve = elliptic_moduli.curve
        c = _divisor(elliptic_moduli, "0,0:t+eps")
        rows = _rows(elliptic_moduli, gap=0)
        trivial = parse_det_label(curve, "0")
        for label in two_torsion_twists(curve):
            if label == trivial:
                continue
            report = verify_twist_commutation(elliptic_moduli, c, rows, label)
            assert report.ok, report.mismatches

    @pytest.mark.slow
    def test_commutation_on_the_elliptic_curve(self, elliptic_moduli: Moduli) -> None:
        rows = _rows(elliptic_moduli, gap=1)
        pairs = [("0,0:t", "0,0:t+eps"), ("0,0:t+eps", "2,1:t"), ("0,0:t", "2,2:t+eps*t")]
        for a, b in pairs:
            c, d = _divisor(elliptic_moduli, a), _divisor(elliptic_moduli, b)
            report = verify_global_commutation(elliptic_moduli, c, d, rows)
            assert report.interior > 0
            assert report.ok, (a, b, report.mismatches)

    @pytest.mark.slow
    def test_square_of_a_divisor_does_not_commute(self, p1_moduli: Moduli) -> None:
        c = _divisor(p1_moduli, "0:t")
        report = verify_square_commutation(p1_moduli, c, c, _rows(p1_moduli, gap=2))
        assert report.interior > 0
        assert report.mismatches
        assert not report.ok
