"""Constant terms along the Borel, cuspidal kernels and their cross-checks."""

from __future__ import annotations

from nilhecke.constant_term.compatibility import CompatibilityReport
from nilhecke.constant_term.compatibility import verify_compatibility
from nilhecke.constant_term.engine import ConstantTermEngine
from nilhecke.constant_term.engine import UnipotentQuotient
from nilhecke.constant_term.geometric import GeometricReport
from nilhecke.constant_term.geometric import QuasiLineBundle
from nilhecke.constant_term.geometric import geometric_crosscheck
from nilhecke.constant_term.kernel import CuspidalReport
from nilhecke.constant_term.kernel import cuspidal_kernel
from nilhecke.constant_term.kernel import hecke_stable
from nilhecke.constant_term.kernel import vanishing_violations
from nilhecke.constant_term.strata import TorusPoint
from nilhecke.constant_term.strata import effective_divisors
from nilhecke.constant_term.strata import stratum_points


__all__ = [
    "CompatibilityReport",
    "ConstantTermEngine",
    "CuspidalReport",
    "GeometricReport",
    "QuasiLineBundle",
    "TorusPoint",
    "UnipotentQuotient",
    "cuspidal_kernel",
    "effective_divisors",
    "geometric_crosscheck",
    "hecke_stable",
    "stratum_points",
    "vanishing_violations",
    "verify_compatibility",
]
