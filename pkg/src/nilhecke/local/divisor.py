"""Local equations of simple divisors and their Hecke elements."""

from __future__ import annotations

from dataclasses import dataclass

from nilhecke.errors import PrecisionExhausted
from nilhecke.local.algebra import HeckeElement
from nilhecke.local.cosets import DoubleCoset
from nilhecke.local.cosets import OrbitMemo
from nilhecke.local.cosets import double_coset
from nilhecke.local.cosets import orbit_memo
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import get_field
from nilhecke.rings.field import is_prime
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import format_laurent
from nilhecke.rings.laurent import laurent_valuation
from nilhecke.rings.laurent import parse_laurent


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p^m``.

    Raises:
        ValueError: If q is not a prime power.
    """
    for p in range(2, q + 1):
        if q % p == 0:
            m, rest = 0, q
            while rest % p == 0:
                rest //= p
                m += 1
            if rest == 1 and is_prime(p):
                return p, m
            break
    msg = f"{q} is not a prime power"
    raise ValueError(msg)


def local_field(q: int, residue_degree: int = 1) -> FiniteField:
    """Residue field F_{q^d} of a closed point of degree d."""
    p, m = prime_power(q)
    return get_field(p, m * residue_degree)


@dataclass(frozen=True)
class SimpleDivisorLocal:
    """A local equation ``f_c`` whose reduction is a uniformizer."""

    f_c: LaurentElement
    residue_degree: int = 1

    def __post_init__(self) -> None:
        try:
            v = laurent_valuation(self.f_c)
        except PrecisionExhausted as e:
            msg = f"local equation {format_laurent(self.f_c)} vanishes"
            raise ValueError(msg) from e
        if v.eps_torsion or v.value != 1:
            msg = f"reduction of {format_laurent(self.f_c)} is not a uniformizer"
            raise ValueError(msg)
        if not self.f_c.is_integral():
            msg = f"local equation {format_laurent(self.f_c)} is not integral"
            raise ValueError(msg)

    @classmethod
    def parse(
        cls, text: str, q: int, prec: int, residue_degree: int = 1
    ) -> SimpleDivisorLocal:
        field = local_field(q, residue_degree)
        return cls(parse_laurent(text, field, prec), residue_degree)

    @property
    def field(self) -> FiniteField:
        return self.f_c.field

    @property
    def precision(self) -> int:
        return self.f_c.precision

    def g_c(self) -> Mat2:
        """``diag(f_c^-1, 1)``."""
        one = LaurentElement.one(self.field, self.precision)
        return Mat2.diag(self.f_c.inverse(), one)

    def g_c_inverse(self) -> Mat2:
        return Mat2.diag(self.f_c, LaurentElement.one(self.field, self.precision))

    def power_inverse(self, k: int) -> Mat2:
        """``diag(f_c^k, 1)``."""
        one = LaurentElement.one(self.field, self.precision)
        x = one
        for _ in range(k):
            x = x * self.f_c
        return Mat2.diag(x, one)

    def double_coset(self, memo: OrbitMemo | None = orbit_memo) -> DoubleCoset:
        return double_coset(self.g_c(), memo=memo)

    def hecke_element(self, memo: OrbitMemo | None = orbit_memo) -> HeckeElement:
        """Normalised characteristic measure ``h_c`` of ``G(O) g_c G(O)``."""
        return HeckeElement.characteristic(self.double_coset(memo))

    def text(self) -> str:
        return format_laurent(self.f_c)
