"""2x2 matrices over the local rings and the eps-level Iwasawa decomposition."""

from __future__ import annotations

from nilhecke.matrices.iwasawa import IwasawaDatum
from nilhecke.matrices.iwasawa import iwasawa_decompose
from nilhecke.matrices.iwasawa import stratum_matrix
from nilhecke.matrices.mat2 import Mat2
from nilhecke.matrices.mat2 import format_mat2
from nilhecke.matrices.mat2 import parse_mat2


__all__ = [
    "IwasawaDatum",
    "Mat2",
    "format_mat2",
    "iwasawa_decompose",
    "parse_mat2",
    "stratum_matrix",
]
