"""Shared fixtures: the smallest curves the pipelines are exercised on."""

from __future__ import annotations

import random

import pytest

from nilhecke.bundles.window import Moduli
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import get_field


PRECISION = 12


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture(params=[2, 3], ids=["F2", "F3"])
def field(request: pytest.FixtureRequest) -> FiniteField:
    return get_field(request.param)


@pytest.fixture
def p1_q2() -> ProjectiveLine:
    return ProjectiveLine(2)


@pytest.fixture
def p1_q3() -> ProjectiveLine:
    return ProjectiveLine(3)


@pytest.fixture
def elliptic() -> EllipticCurve:
    """``y^2 = x^3 + x`` over F_3: four rational points, sixteen over F_9."""
    return EllipticCurve(3, 1, 0)


@pytest.fixture
def p1_moduli(p1_q3: ProjectiveLine) -> Moduli:
    return Moduli(p1_q3, prec=PRECISION)


@pytest.fixture
def p1_q2_moduli(p1_q2: ProjectiveLine) -> Moduli:
    return Moduli(p1_q2, prec=PRECISION)


@pytest.fixture
def elliptic_moduli(elliptic: EllipticCurve) -> Moduli:
    return Moduli(elliptic, prec=PRECISION)
