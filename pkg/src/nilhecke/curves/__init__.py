"""Curve backends for the reduced curve: the projective line and elliptic curves."""

from __future__ import annotations

from pathlib import Path

from nilhecke.config.settings import CurveConfig
from nilhecke.config.settings import load_curve_config
from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.adeles import GlobalSection
from nilhecke.curves.adeles import LocalLattice
from nilhecke.curves.base import Curve
from nilhecke.curves.base import CurveFunction
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.curves.base import RRSpace
from nilhecke.curves.cohomology import AdelicClass
from nilhecke.curves.cohomology import line_bundle_cohomology
from nilhecke.curves.cohomology import reduce_adelic_class
from nilhecke.curves.cohomology import serre_pairing
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine


def load_curve(config: CurveConfig) -> Curve:
    """Build the backend named by a curve specification."""
    if config.type == "p1":
        return ProjectiveLine(config.q)
    return EllipticCurve(config.q, config.a, config.b)


def load_curve_file(path: str | Path) -> Curve:
    return load_curve(load_curve_config(path))


__all__ = [
    "AdelicClass",
    "AdelicQuotient",
    "Curve",
    "CurveFunction",
    "DivisorBar",
    "EllipticCurve",
    "GlobalSection",
    "LocalLattice",
    "PicLabel",
    "Place",
    "ProjectiveLine",
    "RRSpace",
    "line_bundle_cohomology",
    "load_curve",
    "load_curve_file",
    "reduce_adelic_class",
    "serre_pairing",
]
