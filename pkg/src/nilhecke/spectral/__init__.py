"""Orbit projectors, the decomposition of cuspidal kernels and Hitchin eigenbases."""

from __future__ import annotations

from nilhecke.spectral.decomposition import DecompositionReport
from nilhecke.spectral.decomposition import decompose_kernel
from nilhecke.spectral.fourier import FourierProjector
from nilhecke.spectral.fourier import OrbitKey
from nilhecke.spectral.fourier import galois_buckets
from nilhecke.spectral.fourier import orbit_project
from nilhecke.spectral.hitchin import SpectralFiberData
from nilhecke.spectral.hitchin import hitchin_fiber
from nilhecke.spectral.nilpotent import NilpotentReport
from nilhecke.spectral.nilpotent import dim_nilpotent_cuspidal
from nilhecke.spectral.nilpotent import nilpotent_formula
from nilhecke.spectral.theorem_f import TheoremFReport
from nilhecke.spectral.theorem_f import verify_theorem_F


__all__ = [
    "DecompositionReport",
    "FourierProjector",
    "NilpotentReport",
    "OrbitKey",
    "SpectralFiberData",
    "TheoremFReport",
    "decompose_kernel",
    "dim_nilpotent_cuspidal",
    "galois_buckets",
    "hitchin_fiber",
    "nilpotent_formula",
    "orbit_project",
    "verify_theorem_F",
]
