"""2x2 matrices over the local ring and the eps-level Iwasawa decomposition."""

from __future__ import annotations

import random

import pytest

from nilhecke.errors import NotInvertible
from nilhecke.matrices.iwasawa import iwasawa_decompose
from nilhecke.matrices.iwasawa import stratum_index
from nilhecke.matrices.iwasawa import stratum_matrix
from nilhecke.matrices.mat2 import Mat2
from nilhecke.matrices.mat2 import format_mat2
from nilhecke.matrices.mat2 import parse_mat2
from nilhecke.matrices.mat2 import random_gl2
from nilhecke.matrices.mat2 import random_gl2_integral
from nilhecke.matrices.mat2 import random_upper
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import get_field


PREC = 30


def test_inverse(field: FiniteField, rng: random.Random) -> None:
    for _ in range(10):
        g = random_gl2(rng, field, PREC, -2, 2)
        prod = g * g.inverse()
        assert prod.agrees(Mat2.identity(field, PREC), prod.precision)


def test_singular_matrix() -> None:
    f = get_field(3)
    with pytest.raises(NotInvertible):
        Mat2.of(f, 8, 1, 1, 1, 1).inverse()


def test_theta_reverses_products(field: FiniteField, rng: random.Random) -> None:
    x = random_gl2(rng, field, PREC, -2, 2)
    y = random_gl2(rng, field, PREC, -2, 2)
    assert (x * y).theta().agrees(y.theta() * x.theta())


def test_text_form() -> None:
    f = get_field(3)
    m = parse_mat2("[[t, eps], [0, 1 + 2*eps*t^-1]]", f, 10)
    assert format_mat2(m) == "[[t@N=10,eps@N=10],[0@N=10,1 + 2*eps*t^-1@N=10]]"
    assert parse_mat2(format_mat2(m), f).agrees(m)
    with pytest.raises(ValueError):
        parse_mat2("[[t, 1]]", f, 10)


def test_integral_units(field: FiniteField, rng: random.Random) -> None:
    k = random_gl2_integral(rng, field, PREC)
    assert k.is_integral_unit()
    assert k.inverse().is_integral()


class TestIwasawa:
    def test_stratum_matrix_is_its_own_stratum(self) -> None:
        f = get_field(3)
        for n in range(4):
            assert stratum_index(stratum_matrix(f, n, PREC)) == n

    def test_roundtrip(self, field: FiniteField, rng: random.Random) -> None:
        for _ in range(50):
            g = random_gl2(rng, field, PREC, -2, 2)
            datum = iwasawa_decompose(g)
            assert datum.b.is_upper_triangular()
            assert datum.k.is_integral_unit()
            assert datum.n >= 0
            assert datum.recompose().agrees(g)

    def test_stratum_is_invariant(self, field: FiniteField, rng: random.Random) -> None:
        for _ in range(20):
            g = random_gl2(rng, field, PREC, -2, 2)
            b = random_upper(rng, field, PREC, -1, 1)
            k = random_gl2_integral(rng, field, PREC)
            assert stratum_index(b * g * k) == stratum_index(g)

    def test_rejects_eps_torsion_determinant(self) -> None:
        f = get_field(3)
        g = parse_mat2("[[eps, 0], [0, 1]]", f, 8)
        with pytest.raises(NotInvertible):
            iwasawa_decompose(g)

    @pytest.mark.slow
    def test_thousand_roundtrips(self) -> None:
        rng = random.Random(7)
        for p in (2, 3):
            f = get_field(p)
            for _ in range(500):
                g = random_gl2(rng, f, PREC, -3, 3)
                assert iwasawa_decompose(g).recompose().agrees(g)
