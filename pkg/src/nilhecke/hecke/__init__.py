"""Global Hecke operators on bundle windows."""

from __future__ import annotations

from nilhecke.hecke.commutation import GlobalCommuteReport
from nilhecke.hecke.commutation import IdentityReport
from nilhecke.hecke.commutation import coset_count
from nilhecke.hecke.commutation import verify_duality
from nilhecke.hecke.commutation import verify_global_commutation
from nilhecke.hecke.commutation import verify_square_commutation
from nilhecke.hecke.commutation import verify_tensor_identity
from nilhecke.hecke.commutation import verify_twist_commutation
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.modular import ModularReport
from nilhecke.hecke.modular import verify_modular_route
from nilhecke.hecke.operators import HeckeMatrix
from nilhecke.hecke.operators import hecke_matrix
from nilhecke.hecke.operators import hecke_matrix_prime
from nilhecke.hecke.operators import tensor_twist


__all__ = [
    "GlobalCommuteReport",
    "HeckeMatrix",
    "IdentityReport",
    "ModularReport",
    "SimpleDivisor",
    "coset_count",
    "hecke_matrix",
    "hecke_matrix_prime",
    "tensor_twist",
    "verify_duality",
    "verify_global_commutation",
    "verify_modular_route",
    "verify_square_commutation",
    "verify_tensor_identity",
    "verify_twist_commutation",
]
