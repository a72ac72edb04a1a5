"""Local Hecke algebra of GL_2 over F_q[[t]][eps]/(eps^2)."""

from __future__ import annotations

from nilhecke.local.algebra import HeckeElement
from nilhecke.local.algebra import convolve
from nilhecke.local.algebra import verify_theta_invariance
from nilhecke.local.commutation import LocalCommuteReport
from nilhecke.local.commutation import verify_local_commutation
from nilhecke.local.cosets import DoubleCoset
from nilhecke.local.cosets import OrbitMemo
from nilhecke.local.cosets import double_coset
from nilhecke.local.cosets import left_coset_reps
from nilhecke.local.cosets import orbit_memo
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.local.lattices import LatticeWindow
from nilhecke.local.witness import WitnessCertificate
from nilhecke.local.witness import noncommutation_witness


__all__ = [
    "DoubleCoset",
    "HeckeElement",
    "LatticeWindow",
    "LocalCommuteReport",
    "OrbitMemo",
    "SimpleDivisorLocal",
    "WitnessCertificate",
    "convolve",
    "double_coset",
    "left_coset_reps",
    "noncommutation_witness",
    "orbit_memo",
    "verify_local_commutation",
    "verify_theta_invariance",
]
