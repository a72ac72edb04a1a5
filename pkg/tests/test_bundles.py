"""Determinant labels, canonical forms and windows of rank-2 bundles."""

from __future__ import annotations

import pytest

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.adelic import euler_characteristic_expected
from nilhecke.bundles.adelic import h0
from nilhecke.bundles.adelic import monomial_idele
from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_add
from nilhecke.bundles.pic import det_neg
from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.pic import pic_c
from nilhecke.bundles.pic import square_classes
from nilhecke.bundles.pic import two_torsion_twists
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.bundles.window import bundle_class_from_dict
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.errors import ConfigError
from nilhecke.errors import WindowTooLarge


class TestDetLabels:
    def test_plain_degrees_on_p1(self, p1_q3: ProjectiveLine) -> None:
        d = parse_det_label(p1_q3, "-1")
        assert d.degree == -1
        assert d.label() == "-1"
        assert det_add(p1_q3, d, d).degree == -2
        assert det_neg(p1_q3, d).label() == "1"

    @pytest.mark.parametrize("text", ["1;0", "x", ""])
    def test_malformed_on_p1(self, p1_q3: ProjectiveLine, text: str) -> None:
        with pytest.raises(ConfigError):
            parse_det_label(p1_q3, text)

    def test_unknown_place(self, elliptic: EllipticCurve) -> None:
        with pytest.raises(ConfigError):
            parse_det_label(elliptic, "0;9,9")

    def test_elliptic_group(self, elliptic: EllipticCurve) -> None:
        zero = parse_det_label(elliptic, "0")
        labels = pic_c(elliptic, [0])
        assert len(labels) == 4 * 3
        for a in labels:
            assert det_add(elliptic, a, zero) == a
            assert det_add(elliptic, a, det_neg(elliptic, a)) == zero

    def test_label_text(self, elliptic: EllipticCurve) -> None:
        d = parse_det_label(elliptic, "1;2,1;2")
        assert d.tau == 2
        assert parse_det_label(elliptic, d.label()) == d

    def test_two_torsion(self, p1_q3: ProjectiveLine, elliptic: EllipticCurve) -> None:
        assert len(two_torsion_twists(p1_q3)) == 1
        twists = two_torsion_twists(elliptic)
        assert len(twists) == 2
        assert all(t.tau == 0 for t in twists)

    def test_square_classes(self, p1_q3: ProjectiveLine, elliptic: EllipticCurve) -> None:
        assert square_classes(p1_q3, 0) == [DetLabel(p1_q3.pic_enumerate([0])[0])]
        assert len(square_classes(elliptic, 0)) == 2
        assert len(square_classes(elliptic, 1)) == 2


class TestWindowP1:
    @pytest.mark.parametrize("gap", [0, 1, 2])
    def test_window_is_sorted_and_distinct(self, p1_moduli: Moduli, gap: int) -> None:
        det = parse_det_label(p1_moduli.curve, "0")
        window = p1_moduli.enumerate_window(WindowSpec(det, gap))
        assert len(window) > 0
        assert len(set(window)) == len(window)
        assert all(c.gap <= gap for c in window)
        assert all(window.position(c) == i for i, c in enumerate(window))

    def test_trivial_bundle_is_split(self, p1_moduli: Moduli) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "0"), 0))
        split = [c for c in window if c.is_split()]
        assert [c.reduction_label() for c in split] == ["(0,0)"]

    def test_restrict_is_monotone(self, p1_moduli: Moduli) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "0"), 2))
        assert len(window.restrict(0)) <= len(window.restrict(1)) <= len(window)

    @pytest.mark.parametrize("gap", [0, 2])
    def test_mass_identity(self, p1_moduli: Moduli, gap: int) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "0"), gap))
        checks = p1_moduli.mass_checks(window)
        assert checks
        assert all(m.ok for m in checks), [m.to_dict() for m in checks if not m.ok]

    def test_canonical_form_of_representative(self, p1_moduli: Moduli) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "-1"), 2))
        for cls in window:
            assert p1_moduli.canonicalize(p1_moduli.representative(cls), 2) == cls

    def test_automorphism_counts_agree(self, p1_moduli: Moduli) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "0"), 2))
        for cls in window:
            assert p1_moduli.aut_order(cls) == p1_moduli.aut_order_from_orbit(cls), cls.label()

    def test_dict_form(self, p1_moduli: Moduli) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, "1"), 1))
        for cls in window:
            assert bundle_class_from_dict(p1_moduli.curve, cls.as_dict()) == cls

    def test_resource_guard(self, p1_q3: ProjectiveLine) -> None:
        moduli = Moduli(p1_q3, prec=12, max_classes=1)
        with pytest.raises(WindowTooLarge):
            moduli.enumerate_window(WindowSpec(parse_det_label(p1_q3, "0"), 2))


class TestWindowElliptic:
    def test_window_respects_the_determinant(self, elliptic_moduli: Moduli) -> None:
        det = parse_det_label(elliptic_moduli.curve, "0;0,0;1")
        window = elliptic_moduli.enumerate_window(WindowSpec(det, 0))
        assert len(window) > 0
        assert all(c.det == det for c in window)

    def test_dict_form(self, elliptic_moduli: Moduli) -> None:
        det = parse_det_label(elliptic_moduli.curve, "1")
        window = elliptic_moduli.enumerate_window(WindowSpec(det, 1))
        for cls in window:
            assert bundle_class_from_dict(elliptic_moduli.curve, cls.as_dict()) == cls

    @pytest.mark.slow
    def test_mass_identity(self, elliptic_moduli: Moduli) -> None:
        det = parse_det_label(elliptic_moduli.curve, "0")
        window = elliptic_moduli.enumerate_window(WindowSpec(det, 2))
        assert all(m.ok for m in elliptic_moduli.mass_checks(window))

    @pytest.mark.slow
    def test_canonical_form_of_representative(self, elliptic_moduli: Moduli) -> None:
        det = parse_det_label(elliptic_moduli.curve, "1")
        window = elliptic_moduli.enumerate_window(WindowSpec(det, 1))
        for cls in window:
            assert elliptic_moduli.canonicalize(elliptic_moduli.representative(cls), 1) == cls


def _split(curve: Curve, a: int, b: int, prec: int) -> AdelicMatrix:
    """``O(a) + O(b)``, both degrees placed at the first affine place."""
    place = curve.places()[0]
    return AdelicMatrix.diagonal(
        curve,
        monomial_idele(curve, DivisorBar.point(place, a), prec),
        monomial_idele(curve, DivisorBar.point(place, b), prec),
        prec,
    )


class TestCohomology:
    def test_trivial_bundle_on_p1(self, p1_q3: ProjectiveLine) -> None:
        dim, basis = h0(AdelicMatrix.identity(p1_q3, 12))
        assert dim == 4
        assert len(basis) == 4

    def test_negative_bundle_has_no_sections(self, p1_q3: ProjectiveLine) -> None:
        g = _split(p1_q3, -1, -1, 12)
        assert h0(g)[0] == 0
        assert g.cohomology.euler == euler_characteristic_expected(g) == 0

    @pytest.mark.parametrize("d", [0, 1, 2])
    def test_line_bundle_sections(self, p1_q3: ProjectiveLine, d: int) -> None:
        g = _split(p1_q3, d, -1, 12)
        assert h0(g)[0] == 2 * (d + 1)
        assert g.cohomology.euler == euler_characteristic_expected(g)

    @pytest.mark.parametrize("det", ["0", "-1"])
    def test_euler_characteristic_on_p1(self, p1_moduli: Moduli, det: str) -> None:
        window = p1_moduli.enumerate_window(WindowSpec(parse_det_label(p1_moduli.curve, det), 2))
        for cls in window:
            g = p1_moduli.representative(cls)
            assert g.cohomology.euler == euler_characteristic_expected(g), cls.label()

    @pytest.mark.slow
    def test_euler_characteristic_on_the_elliptic_curve(self, elliptic_moduli: Moduli) -> None:
        det = parse_det_label(elliptic_moduli.curve, "1")
        window = elliptic_moduli.enumerate_window(WindowSpec(det, 1))
        for cls in window:
            g = elliptic_moduli.representative(cls)
            assert g.cohomology.euler == euler_characteristic_expected(g), cls.label()
