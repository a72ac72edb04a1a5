"""Exact rings: finite fields, dual numbers, Laurent series, cyclotomic scalars."""

from __future__ import annotations

from nilhecke.rings.cyclotomic import CycScalar
from nilhecke.rings.cyclotomic import CyclotomicField
from nilhecke.rings.cyclotomic import get_cyclotomic
from nilhecke.rings.cyclotomic import psi_eval
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.dual import dual_invert
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import FqElem
from nilhecke.rings.field import get_field
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.laurent import format_laurent
from nilhecke.rings.laurent import laurent_valuation
from nilhecke.rings.laurent import parse_laurent


__all__ = [
    "CycScalar",
    "CyclotomicField",
    "DualScalar",
    "FiniteField",
    "FqElem",
    "LaurentElement",
    "LaurentSeries",
    "dual_invert",
    "format_laurent",
    "get_cyclotomic",
    "get_field",
    "laurent_valuation",
    "parse_laurent",
    "psi_eval",
]
