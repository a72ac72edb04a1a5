"""Finite-support adelic matrices over C = C-bar x Spec D and their cohomology.

A matrix ``g = (g_p)`` in GL_2(A) that is the identity away from finitely
many places describes the bundle with local lattices ``V_p = g_p O_p^2``.
Left multiplication by GL_2(F) and right multiplication by GL_2(O) do not
change the isomorphism class.
"""

from __future__ import annotations

from functools import cached_property
from typing import Mapping
from typing import NamedTuple

from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.adeles import GlobalSection
from nilhecke.curves.adeles import LocalLattice
from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import Place
from nilhecke.errors import NotInvertible
from nilhecke.matrices.mat2 import Mat2
from nilhecke.matrices.mat2 import format_mat2
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries


Idele = Mapping[Place, LaurentElement]


class BundleCohomology(NamedTuple):
    """``H^0`` and ``H^1`` of a bundle, as F_q-dimensions plus a basis of H^0."""

    h0: int
    h1: int
    basis: list[GlobalSection]

    @property
    def euler(self) -> int:
        return self.h0 - self.h1


class AdelicMatrix:
    """An element of GL_2(A) that is the identity off a finite support.

    Args:
        curve: Backend of the reduced curve.
        local: Components at the support places.
        prec: Precision used for identity components and new entries.
    """

    def __init__(self, curve: Curve, local: Mapping[Place, Mat2], prec: int) -> None:
        self.curve = curve
        self.prec = prec
        one = Mat2.identity(curve.field, prec)
        self.local = {
            p: m for p, m in sorted(local.items()) if not m.agrees(one, min(m.precision, prec))
        }

    # constructors

    @classmethod
    def identity(cls, curve: Curve, prec: int) -> AdelicMatrix:
        return cls(curve, {}, prec)

    @classmethod
    def diagonal(cls, curve: Curve, first: Idele, second: Idele, prec: int) -> AdelicMatrix:
        """``diag(a_1, a_2)`` for ideles given by their non-unit components."""
        one = LaurentElement.one(curve.field, prec)
        places = sorted(set(first) | set(second))
        return cls(
            curve,
            {p: Mat2.diag(first.get(p, one), second.get(p, one)) for p in places},
            prec,
        )

    @classmethod
    def scalar(cls, curve: Curve, idele: Idele, prec: int) -> AdelicMatrix:
        return cls.diagonal(curve, idele, idele, prec)

    # access

    def at(self, place: Place) -> Mat2:
        hit = self.local.get(place)
        if hit is None:
            return Mat2.identity(self.curve.field, self.prec)
        return hit

    @property
    def support(self) -> list[Place]:
        return list(self.local)

    def items(self) -> list[tuple[Place, Mat2]]:
        return list(self.local.items())

    # algebra

    def __mul__(self, other: AdelicMatrix) -> AdelicMatrix:
        places = sorted(set(self.local) | set(other.local))
        prec = min(self.prec, other.prec)
        return AdelicMatrix(self.curve, {p: self.at(p) * other.at(p) for p in places}, prec)

    def right(self, place: Place, x: Mat2) -> AdelicMatrix:
        """``g`` with its component at ``place`` replaced by ``g_p x``."""
        local = dict(self.local)
        local[place] = self.at(place) * x
        return AdelicMatrix(self.curve, local, self.prec)

    def left(self, place: Place, x: Mat2) -> AdelicMatrix:
        local = dict(self.local)
        local[place] = x * self.at(place)
        return AdelicMatrix(self.curve, local, self.prec)

    def scaled(self, idele: Idele) -> AdelicMatrix:
        """Tensor with the line bundle of an idele: ``g * a``."""
        return self * AdelicMatrix.scalar(self.curve, idele, self.prec)

    def inverse(self) -> AdelicMatrix:
        return AdelicMatrix(self.curve, {p: m.inverse() for p, m in self.local.items()}, self.prec)

    def dual(self) -> AdelicMatrix:
        """The dual bundle, ``theta(g)^-1`` componentwise."""
        return AdelicMatrix(
            self.curve, {p: m.theta().inverse() for p, m in self.local.items()}, self.prec
        )

    def reduction(self) -> AdelicMatrix:
        return AdelicMatrix(self.curve, {p: m.reduction() for p, m in self.local.items()}, self.prec)

    def is_reduced(self) -> bool:
        return all(e.eps.is_zero() for m in self.local.values() for e in m.entries())

    def eps_data(self) -> dict[Place, Mat2]:
        """``Y_p = (g_p)_eps (g-bar_p)^-1``, so that ``g = (1 + eps Y) g-bar``.

        Raises:
            NotInvertible: If a reduced component is singular.
        """
        out = {}
        for p, m in self.local.items():
            if all(e.eps.is_zero() for e in m.entries()):
                continue
            try:
                out[p] = m.eps_part() * m.reduction().inverse()
            except NotInvertible as e:
                msg = f"reduction of the component at {p.label()} is singular"
                raise NotInvertible(msg) from e
        return out

    # determinant

    def det_divisor(self) -> DivisorBar:
        """Divisor of ``det V-bar``: ``-sum_p v(det g-bar_p) p``."""
        return DivisorBar({p: -m.det().red.valuation() for p, m in self.local.items()})

    def det_eps(self) -> dict[Place, LaurentSeries]:
        """``delta_p`` with ``det g_p = det g-bar_p (1 + eps delta_p)``."""
        out = {}
        for p, m in self.local.items():
            d = m.det()
            if d.eps.is_zero():
                continue
            out[p] = d.eps * d.red.inverse()
        return out

    def det_tau(self) -> int:
        """Coordinate of ``det V`` in ``H^1(O)``: ``sum_p Res_p(delta_p omega_0)``."""
        f = self.curve.field
        total = 0
        for p, delta in self.det_eps().items():
            w = self.curve.omega_expansion(p, max(2, -delta.order() + 2))
            total = f.add(total, self.curve.residue(delta * w))
        return total

    # cohomology

    def lattices(self) -> dict[Place, LocalLattice]:
        return {p: LocalLattice.from_matrix(m) for p, m in self.local.items()}

    def quotient(self, levels: int = 2) -> AdelicQuotient:
        """The finite model of ``H^0`` and ``H^1``; ``levels=1`` for the reduction."""
        g = self if levels == 2 else self.reduction()
        return AdelicQuotient(self.curve, 2, g.lattices(), levels=levels)

    @cached_property
    def cohomology(self) -> BundleCohomology:
        space = self.quotient(2)
        return BundleCohomology(space.h0_dim, space.h1_dim, space.h0_basis())

    def degree(self) -> int:
        """Degree of the reduction."""
        return self.det_divisor().degree()

    def truncate(self, prec: int) -> AdelicMatrix:
        return AdelicMatrix(
            self.curve, {p: m.truncate(prec) for p, m in self.local.items()}, min(prec, self.prec)
        )

    def __repr__(self) -> str:
        parts = ", ".join(f"{p.label()}: {format_mat2(m)}" for p, m in self.local.items())
        return f"AdelicMatrix({{{parts}}})"


def h0(g: AdelicMatrix) -> tuple[int, list[GlobalSection]]:
    """F_q-dimension and a basis of the global sections of the bundle of g."""
    coh = g.cohomology
    return coh.h0, coh.basis


def euler_characteristic_expected(g: AdelicMatrix) -> int:
    """``2 (deg V-bar + 2 (1 - genus))``, the F_q-Euler characteristic on C."""
    return 2 * (g.degree() + 2 * (1 - g.curve.genus))


def monomial_idele(curve: Curve, divisor: DivisorBar, prec: int) -> dict[Place, LaurentElement]:
    """The idele ``(t_p^-m_p)`` whose lattice is that of ``O(divisor)``."""
    return {p: LaurentElement.monomial(curve.field, 1, -m, prec) for p, m in divisor.items()}
