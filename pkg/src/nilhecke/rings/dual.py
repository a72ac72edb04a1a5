"""Dual numbers D = F_q[eps]/(eps^2)."""

from __future__ import annotations

from dataclasses import dataclass

from nilhecke.errors import NotAUnit
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import FqElem


@dataclass(frozen=True)
class DualScalar:
    """The element ``a0 + eps * a1`` of F_q[eps]/(eps^2).

    Attributes:
        field: Coefficient field.
        a0: Reduction modulo eps, as an element code.
        a1: Coefficient of eps, as an element code.
    """

    field: FiniteField
    a0: int
    a1: int = 0

    @classmethod
    def of(cls, field: FiniteField, a0: int, a1: int = 0) -> DualScalar:
        return cls(field, a0 % field.q, a1 % field.q)

    @classmethod
    def from_elems(cls, a0: FqElem, a1: FqElem) -> DualScalar:
        return cls(a0.field, a0.value, a1.value)

    def __add__(self, other: DualScalar) -> DualScalar:
        f = self.field
        return DualScalar(f, f.add(self.a0, other.a0), f.add(self.a1, other.a1))

    def __sub__(self, other: DualScalar) -> DualScalar:
        f = self.field
        return DualScalar(f, f.sub(self.a0, other.a0), f.sub(self.a1, other.a1))

    def __neg__(self) -> DualScalar:
        f = self.field
        return DualScalar(f, f.neg(self.a0), f.neg(self.a1))

    def __mul__(self, other: DualScalar) -> DualScalar:
        f = self.field
        return DualScalar(
            f,
            f.mul(self.a0, other.a0),
            f.add(f.mul(self.a0, other.a1), f.mul(self.a1, other.a0)),
        )

    def is_unit(self) -> bool:
        return self.a0 != 0

    def is_zero(self) -> bool:
        return self.a0 == 0 and self.a1 == 0

    def reduction(self) -> FqElem:
        return FqElem(self.field, self.a0)

    def __repr__(self) -> str:
        return format_dual(self)


def dual_invert(x: DualScalar) -> DualScalar:
    """Inverse of a unit of D: (a0 + eps a1)^-1 = a0^-1 - eps a1 a0^-2.

    Raises:
        NotAUnit: If the reduction a0 vanishes.
    """
    if x.a0 == 0:
        msg = f"{x!r} is not a unit of the dual numbers"
        raise NotAUnit(msg)
    f = x.field
    inv0 = f.inv(x.a0)
    return DualScalar(f, inv0, f.neg(f.mul(x.a1, f.mul(inv0, inv0))))


def dual_elements(field: FiniteField) -> list[DualScalar]:
    """All q^2 elements of D in code order."""
    return [DualScalar(field, a, b) for a in field.elements() for b in field.elements()]


def format_dual(x: DualScalar) -> str:
    """Text form ``a0 + a1*eps`` with zero parts omitted."""
    parts = []
    if x.a0:
        parts.append(str(x.a0))
    if x.a1:
        parts.append("eps" if x.a1 == 1 else f"{x.a1}*eps")
    return " + ".join(parts) if parts else "0"
