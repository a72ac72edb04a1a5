"""nilhecke: Hecke operators and cuspidal functions over nilpotent extensions of curves.

Exact computations with rank-2 bundles on ``C = C-bar x Spec F_q[eps]`` for the
projective line and elliptic curves over small prime fields.
"""

__version__ = "0.3.0"
__description__ = "Exact Hecke operators, constant terms and cuspidal kernels over nilpotent curves"

# Public API exports
from nilhecke.core.api import run_pipeline


__all__ = [
    "__description__",
    "__version__",
    "run_pipeline",
]
