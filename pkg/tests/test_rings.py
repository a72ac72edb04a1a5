"""Finite fields, dual numbers, truncated Laurent series, cyclotomic fields and elimination."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from nilhecke.errors import NotAUnit
from nilhecke.errors import NotInvertible
from nilhecke.errors import PrecisionExhausted
from nilhecke.rings.cyclotomic import get_cyclotomic
from nilhecke.rings.cyclotomic import psi_eval
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.dual import dual_elements
from nilhecke.rings.dual import dual_invert
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import get_field
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.laurent import format_laurent
from nilhecke.rings.laurent import laurent_valuation
from nilhecke.rings.laurent import parse_laurent
from nilhecke.rings.linalg import exact_rank
from nilhecke.rings.linalg import inverse_mod_p
from nilhecke.rings.linalg import nullspace_mod_p
from nilhecke.rings.linalg import rank_mod_p
from nilhecke.rings.linalg import rational_kernel
from nilhecke.rings.linalg import rational_rank
from nilhecke.rings.linalg import rational_rref
from nilhecke.rings.linalg import solve_mod_p


class TestFiniteField:
    @pytest.mark.parametrize(("p", "m"), [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)])
    def test_every_unit_has_an_inverse(self, p: int, m: int) -> None:
        f = get_field(p, m)
        assert f.q == p**m
        for a in f.units():
            assert f.mul(a, f.inv(a)) == 1

    def test_generator_has_full_order(self) -> None:
        f = get_field(3, 2)
        powers = {f.pow(f.generator, k) for k in range(f.q - 1)}
        assert powers == set(f.units())

    def test_half_the_units_are_squares_in_odd_characteristic(self) -> None:
        for f in (get_field(3), get_field(5), get_field(3, 2)):
            assert len(f.squares) == (f.q - 1) // 2

    def test_frobenius_fixes_the_prime_field(self) -> None:
        f = get_field(3, 2)
        fixed = [a for a in f.elements() if f.pow(a, 3) == a]
        assert fixed == [0, 1, 2]

    def test_rejects_composite_characteristic(self) -> None:
        with pytest.raises(ValueError, match="prime"):
            FiniteField(4)

    def test_division_by_zero(self) -> None:
        with pytest.raises(NotAUnit):
            get_field(3).inv(0)

    def test_shared_instances(self) -> None:
        assert get_field(3) is get_field(3)


class TestDualNumbers:
    def test_units_invert(self, field: FiniteField) -> None:
        one = DualScalar.of(field, 1)
        for x in dual_elements(field):
            if x.is_unit():
                assert x * dual_invert(x) == one

    def test_eps_is_nilpotent(self, field: FiniteField) -> None:
        eps = DualScalar.of(field, 0, 1)
        assert (eps * eps).is_zero()
        with pytest.raises(NotAUnit):
            dual_invert(eps)

    def test_text_form(self) -> None:
        f = get_field(3)
        assert repr(DualScalar.of(f, 2, 1)) == "2 + eps"
        assert repr(DualScalar.of(f, 0, 2)) == "2*eps"
        assert repr(DualScalar.of(f, 0, 0)) == "0"


class TestLaurent:
    def test_series_inverse(self, field: FiniteField) -> None:
        prec = 10
        x = LaurentSeries.from_coeffs(field, [1, 1, 0, 1], -1, prec)
        y = x.inverse()
        assert y.low == 1
        assert (x * y).agrees(LaurentSeries.constant(field, 1, prec))

    def test_inverse_coefficients(self) -> None:
        f = get_field(3)
        x = LaurentSeries.from_coeffs(f, [1, 1, 0, 1], 0, 10)
        y = x.inverse()
        # 1 / (1 + t + t^3) = 1 - t + t^2 + t^3 + 0 t^4 - ...
        assert [y.coefficient(k) for k in range(5)] == [1, 2, 1, 1, 0]
        assert (x * y).agrees(LaurentSeries.constant(f, 1, 10))

    def test_inverse_over_f4(self) -> None:
        f = get_field(2, 2)
        x = LaurentSeries.from_coeffs(f, [2, 1, 3, 0, 1], 0, 9)
        assert (x * x.inverse()).agrees(LaurentSeries.constant(f, 1, 9))

    def test_inverse_of_zero_series(self, field: FiniteField) -> None:
        with pytest.raises(NotAUnit):
            LaurentSeries.zero(field, 6).inverse()

    def test_unknown_coefficient(self, field: FiniteField) -> None:
        x = LaurentSeries.constant(field, 1, 4)
        with pytest.raises(PrecisionExhausted):
            x.coefficient(4)

    def test_product_precision_rule(self) -> None:
        f = get_field(3)
        a = LaurentSeries.monomial(f, 1, 2, 8)
        b = LaurentSeries.monomial(f, 1, -1, 5)
        assert (a * b).prec == min(8 - 1, 5 + 2)

    def test_element_inverse(self, field: FiniteField, rng: random.Random) -> None:
        prec = 9
        for _ in range(10):
            red = [rng.randrange(1, field.q)] + [rng.randrange(field.q) for _ in range(5)]
            eps = [rng.randrange(field.q) for _ in range(6)]
            x = LaurentElement(
                LaurentSeries.from_coeffs(field, red, 0, prec),
                LaurentSeries.from_coeffs(field, eps, -2, prec),
            )
            prod = x * x.inverse()
            assert prod.agrees(LaurentElement.one(field, prec), prod.precision - 2)

    def test_eps_torsion_valuation(self) -> None:
        f = get_field(3)
        x = parse_laurent("eps*t^2", f, 8)
        v = laurent_valuation(x)
        assert v.value == 2
        assert v.eps_torsion
        with pytest.raises(NotAUnit):
            x.inverse()

    def test_canonical_text(self) -> None:
        f = get_field(3)
        x = parse_laurent("t^-1 + 2*eps*t^3", f, 12)
        assert format_laurent(x) == "t^-1 + 2*eps*t^3@N=12"
        assert parse_laurent(format_laurent(x), f).agrees(x)

    def test_subtraction_and_signs(self) -> None:
        f = get_field(3)
        assert parse_laurent("t - t", f, 5).is_zero()
        assert parse_laurent("-1", f, 5).agrees(parse_laurent("2", f, 5))

    @pytest.mark.parametrize("text", ["t^", "3x", "eps^2"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(ValueError):
            parse_laurent(text, get_field(3), 6)

    def test_missing_precision(self) -> None:
        with pytest.raises(ValueError, match="precision"):
            parse_laurent("t", get_field(3))


class TestCyclotomic:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 12])
    def test_root_of_unity(self, n: int) -> None:
        field = get_cyclotomic(n)
        z = field.zeta()
        acc = field.one()
        for _ in range(n):
            acc = acc * z
        assert acc == 1

    def test_sum_of_roots_vanishes(self) -> None:
        field = get_cyclotomic(6)
        total = sum((field.zeta(k) for k in range(6)), field.zero())
        assert not total

    def test_inverse_and_conjugate(self) -> None:
        field = get_cyclotomic(12)
        x = field.element([1, 2, 0, Fraction(1, 3)])
        assert x * x.inverse() == 1
        assert field.zeta(5).conj() == field.zeta(7)
        with pytest.raises(NotAUnit):
            field.zero().inverse()

    def test_norm_is_rational(self) -> None:
        field = get_cyclotomic(3)
        x = field.element([2, 1])
        assert (x * x.conj()).rational_value() == 3
        assert x.rational_value() is None

    def test_lift(self) -> None:
        z3 = get_cyclotomic(3).zeta()
        assert z3.lift(get_cyclotomic(6)) == get_cyclotomic(6).zeta(2)
        with pytest.raises(ValueError):
            z3.lift(get_cyclotomic(4))

    def test_additive_character_sums_to_zero(self) -> None:
        for f in (get_field(3), get_field(3, 2), get_field(5)):
            target = get_cyclotomic(f.p)
            total = sum((psi_eval(f, a) for a in f.elements()), target.zero())
            assert not total


class TestLinalg:
    def test_nullspace(self) -> None:
        a = np.array([[1, 2, 0], [0, 1, 1]])
        ker = nullspace_mod_p(a, 3)
        assert ker.shape == (1, 3)
        assert not ((a @ ker.T) % 3).any()
        assert rank_mod_p(a, 3) == 2

    def test_solve(self) -> None:
        a = np.array([[1, 0, 1], [0, 1, 1]])
        x = solve_mod_p(a, np.array([2, 1, 0]), 3)
        assert x is not None
        assert list((x @ a) % 3) == [2, 1, 0]
        assert solve_mod_p(a, np.array([0, 0, 1]), 3) is None

    def test_inverse(self) -> None:
        a = np.array([[1, 1], [0, 1]])
        assert ((a @ inverse_mod_p(a, 2)) % 2 == np.eye(2, dtype=np.int64)).all()
        with pytest.raises(NotInvertible):
            inverse_mod_p(np.array([[1, 1], [1, 1]]), 2)

    def test_rational_kernel(self) -> None:
        rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
        assert rational_rank(rows) == 1
        ker = rational_kernel(rows, 3)
        assert len(ker) == 2
        for v in ker:
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)

    def test_rational_kernel_without_rows(self) -> None:
        assert rational_kernel([], 2) == [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        assert rational_rank([]) == 0

    def test_rational_rref(self) -> None:
        rows = [[Fraction(2), Fraction(1, 2)], [Fraction(4), Fraction(1)], [Fraction(0), Fraction(3)]]
        red, pivots = rational_rref(rows)
        assert pivots == [0, 1]
        assert red == [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]

    def test_cyclotomic_rank(self) -> None:
        z = get_cyclotomic(3).zeta()
        rows = [[z, z * z], [z * z, z * z * z]]
        assert exact_rank(rows) == 1
