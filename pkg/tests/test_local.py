"""Double cosets of simple divisors, local convolution and the non-commutation witness."""

from __future__ import annotations

from fractions import Fraction

import pytest

from nilhecke.errors import PrecisionExhausted
from nilhecke.local.algebra import HeckeElement
from nilhecke.local.algebra import convolve
from nilhecke.local.algebra import pole_order
from nilhecke.local.algebra import truncation_bound
from nilhecke.local.algebra import verify_theta_invariance
from nilhecke.local.commutation import is_associative
from nilhecke.local.commutation import verify_local_commutation
from nilhecke.local.cosets import left_coset_reps
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.local.divisor import local_field
from nilhecke.local.divisor import prime_power
from nilhecke.local.witness import noncommutation_witness
from nilhecke.rings.field import get_field


PREC = 8
# the triple product carries poles of order 2
ASSOC_PREC = 10
EQUATIONS = ["t", "t+eps", "t+eps*t", "t+eps+eps*t"]


class TestSimpleDivisor:
    @pytest.mark.parametrize(("q", "expected"), [(2, 6), (3, 12)])
    @pytest.mark.parametrize("fc", EQUATIONS)
    def test_coset_count(self, q: int, expected: int, fc: str) -> None:
        sd = SimpleDivisorLocal.parse(fc, q, PREC)
        assert len(left_coset_reps(sd.double_coset())) == expected

    @pytest.mark.parametrize("text", ["t^2", "eps*t", "1+t", "t^-1+t"])
    def test_rejects_non_uniformizers(self, text: str) -> None:
        with pytest.raises(ValueError):
            SimpleDivisorLocal.parse(text, 3, PREC)

    def test_residue_field(self) -> None:
        assert prime_power(9) == (3, 2)
        assert local_field(2, residue_degree=2) == get_field(2, 2)
        with pytest.raises(ValueError, match="prime power"):
            prime_power(6)

    def test_theta_invariant(self) -> None:
        sd = SimpleDivisorLocal.parse("t+eps", 3, PREC)
        assert verify_theta_invariance(sd.double_coset())


class TestConvolution:
    def test_unit_is_neutral(self) -> None:
        sd = SimpleDivisorLocal.parse("t+eps", 2, PREC)
        h = sd.hecke_element()
        unit = HeckeElement.unit(sd.g_c())
        assert convolve(unit, h) == h
        assert convolve(h, unit) == h

    def test_mass_is_preserved(self) -> None:
        c = SimpleDivisorLocal.parse("t", 2, PREC)
        d = SimpleDivisorLocal.parse("t+eps*t", 2, PREC)
        assert (c.hecke_element() * d.hecke_element()).total_weight() == Fraction(1)

    def test_associative(self) -> None:
        eqs = ("t", "t+eps", "t")
        hs = [SimpleDivisorLocal.parse(f, 2, ASSOC_PREC).hecke_element() for f in eqs]
        assert is_associative(*hs)

    def test_truncation_bound(self) -> None:
        h = SimpleDivisorLocal.parse("t", 2, PREC).hecke_element()
        assert pole_order(h) == 1
        assert truncation_bound(pole_order(h)) == 7
        assert pole_order(h * h) == 2

    def test_below_the_truncation_bound(self) -> None:
        with pytest.raises(PrecisionExhausted, match="truncation >= 7"):
            verify_local_commutation(2, 6, "t", "t+eps")
        assert verify_local_commutation(2, 7, "t", "t+eps").equal


class TestLocalCommutation:
    def test_pair_over_f2(self) -> None:
        report = verify_local_commutation(2, PREC, "t", "t+eps")
        assert report.equal
        assert report.stable
        assert report.ok
        assert report.to_dict()["ok"] is True

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [2, 3])
    def test_all_pairs(self, q: int) -> None:
        for i, fc in enumerate(EQUATIONS):
            for fd in EQUATIONS[i + 1 :]:
                assert verify_local_commutation(q, PREC, fc, fd).ok, (q, fc, fd)


class TestWitness:
    def test_witness_over_f2(self) -> None:
        cert = noncommutation_witness(SimpleDivisorLocal.parse("t", 2, PREC))
        assert cert.factorization_ok
        assert cert.in_forward
        assert not cert.in_reverse
        assert cert.valid

    @pytest.mark.slow
    @pytest.mark.parametrize("fc", EQUATIONS)
    def test_witness_over_f3(self, fc: str) -> None:
        assert noncommutation_witness(SimpleDivisorLocal.parse(fc, 3, PREC)).valid

    def test_needs_precision(self) -> None:
        with pytest.raises(PrecisionExhausted):
            noncommutation_witness(SimpleDivisorLocal.parse("t", 2, 5))
