"""Curve backends: places, group law, Riemann-Roch and Serre duality."""

from __future__ import annotations

import itertools

import pytest

from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.cohomology import AdelicClass
from nilhecke.curves.cohomology import is_principal_plus_integral
from nilhecke.curves.cohomology import line_bundle_cohomology
from nilhecke.curves.cohomology import pairing_is_perfect
from nilhecke.curves.cohomology import principal_adele
from nilhecke.curves.cohomology import reduce_adelic_class
from nilhecke.curves.elliptic import ORIGIN
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.errors import CharacteristicTwo
from nilhecke.errors import ConfigError


def _divisors(curve: Curve) -> list[DivisorBar]:
    """A spread of divisors of degree -2 .. 3 over the first two places."""
    p, q = curve.places()[:2]
    inf = curve.aux_place()
    return [
        DivisorBar(),
        DivisorBar.point(inf, -2),
        DivisorBar.point(p, 2),
        DivisorBar.point(p) - DivisorBar.point(q),
        DivisorBar.point(p) + DivisorBar.point(q) + DivisorBar.point(inf),
        DivisorBar.point(q, 3) - DivisorBar.point(inf),
    ]


class TestProjectiveLine:
    def test_places(self, p1_q3: ProjectiveLine) -> None:
        assert [p.label() for p in p1_q3.places()] == ["0", "1", "2", "inf"]
        assert p1_q3.canonical_divisor().degree() == -2

    def test_place_lookup(self, p1_q3: ProjectiveLine) -> None:
        assert p1_q3.place("inf").is_infinite
        with pytest.raises(ConfigError):
            p1_q3.place("7")

    def test_rejects_prime_powers(self) -> None:
        with pytest.raises(ConfigError):
            ProjectiveLine(4)

    def test_trivial_bundle_has_an_empty_window(self, p1_q3: ProjectiveLine) -> None:
        space = AdelicQuotient(p1_q3, 2, {}, levels=2)
        assert space.dim == 0
        assert space.lattice_rows.shape == (0, 0)
        assert space.h0_dim == 4
        assert space.h1_dim == 0
        assert space.h1_coordinates(space.encode({})).shape == (0,)

    def test_polar_part_of_a_function_is_trivial(self, p1_q3: ProjectiveLine) -> None:
        inf = p1_q3.aux_place()
        x = p1_q3.rr_basis(DivisorBar.point(inf, 2)).basis[2]
        assert is_principal_plus_integral(p1_q3, principal_adele(p1_q3, x, [inf], 4))
        zero = p1_q3.places()[0]
        assert is_principal_plus_integral(p1_q3, AdelicClass.monomial(p1_q3, zero, -1))


class TestEllipticCurve:
    def test_point_counts(self, elliptic: EllipticCurve) -> None:
        assert elliptic.count_points() == 4
        assert elliptic.count_points(2) == 16
        assert elliptic.canonical_divisor() == DivisorBar()

    def test_group_law(self, elliptic: EllipticCurve) -> None:
        pts = elliptic.places()
        for p in pts:
            assert elliptic.add(p, elliptic.neg(p)) == ORIGIN
            assert elliptic.multiply(p, len(pts)) == ORIGIN
        for a, b, c in itertools.product(pts, repeat=3):
            assert elliptic.add(elliptic.add(a, b), c) == elliptic.add(a, elliptic.add(b, c))

    def test_divisor_class(self, elliptic: EllipticCurve) -> None:
        p = elliptic.place("2,1")
        label = elliptic.divisor_class(DivisorBar.point(p) - DivisorBar.point(ORIGIN))
        assert label.degree == 0
        assert label.point == p
        assert elliptic.divisor_class(elliptic.line_bundle_divisor(label)) == label

    def test_singular_and_even(self) -> None:
        with pytest.raises(ConfigError, match="singular"):
            EllipticCurve(3, 0, 0)
        with pytest.raises(CharacteristicTwo):
            EllipticCurve(2, 1, 1)

    def test_origin_pole_is_a_nonzero_class(self, elliptic: EllipticCurve) -> None:
        x = AdelicClass.monomial(elliptic, ORIGIN, -1)
        assert not is_principal_plus_integral(elliptic, x)
        assert reduce_adelic_class(elliptic, x).any()


@pytest.mark.parametrize("backend", ["p1", "elliptic"])
class TestCohomology:
    @pytest.fixture
    def curve(self, backend: str, p1_q3: ProjectiveLine, elliptic: EllipticCurve) -> Curve:
        return p1_q3 if backend == "p1" else elliptic

    def test_riemann_roch(self, curve: Curve) -> None:
        for d in _divisors(curve):
            h0, h1 = line_bundle_cohomology(curve, d)
            assert h0 - h1 == d.degree() + 1 - curve.genus, d.label()
            assert curve.rr_basis(d).dim == h0, d.label()

    def test_serre_duality(self, curve: Curve) -> None:
        for d in _divisors(curve):
            h0, h1 = line_bundle_cohomology(curve, d)
            assert h1 == line_bundle_cohomology(curve, curve.canonical_divisor() - d)[0]
            assert pairing_is_perfect(curve, d), d.label()
