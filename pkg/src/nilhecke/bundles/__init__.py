"""Rank-2 bundles on C: adelic matrices, Pic(C), Hom spaces and bundle windows."""

from __future__ import annotations

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.adelic import BundleCohomology
from nilhecke.bundles.frames import Frame
from nilhecke.bundles.frames import FrameData
from nilhecke.bundles.hom import HomSpace
from nilhecke.bundles.hom import is_isomorphic
from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_label
from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.pic import pic_c
from nilhecke.bundles.window import BundleClass
from nilhecke.bundles.window import MassCheck
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec


__all__ = [
    "AdelicMatrix",
    "BundleClass",
    "BundleCohomology",
    "DetLabel",
    "Frame",
    "FrameData",
    "HomSpace",
    "MassCheck",
    "Moduli",
    "Window",
    "WindowSpec",
    "det_label",
    "is_isomorphic",
    "parse_det_label",
    "pic_c",
]
