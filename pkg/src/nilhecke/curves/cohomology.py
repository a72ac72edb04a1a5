"""Cohomology of line bundles on the reduced curve: H^1 classes and Serre duality."""

from __future__ import annotations

from typing import Mapping
from typing import NamedTuple

import numpy as np

from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.adeles import LocalLattice
from nilhecke.curves.base import Curve
from nilhecke.curves.base import CurveFunction
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import Place
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.linalg import rank_mod_p


class AdelicClass(NamedTuple):
    """An adele of the reduced curve, read as a class in ``H^1(O(twist))``.

    Attributes:
        parts: Local components at finitely many places; every other
            component is zero.
        twist: Divisor E of the line bundle ``O(E)``.
    """

    parts: Mapping[Place, LaurentSeries]
    twist: DivisorBar = DivisorBar()

    @classmethod
    def monomial(
        cls, curve: Curve, place: Place, k: int, twist: DivisorBar | None = None, c: int = 1
    ) -> AdelicClass:
        prec = max(k + 1, 1)
        return cls({place: LaurentSeries.monomial(curve.field, c, k, prec)}, twist or DivisorBar())

    def __add__(self, other: AdelicClass) -> AdelicClass:
        parts = dict(self.parts)
        for p, s in other.parts.items():
            parts[p] = parts[p] + s if p in parts else s
        return AdelicClass(parts, self.twist)


def line_bundle_lattices(curve: Curve, divisor: DivisorBar, prec: int) -> dict[Place, LocalLattice]:
    return {p: LocalLattice.line(curve.field, m, prec) for p, m in divisor.items()}


def line_bundle_quotient(
    curve: Curve, divisor: DivisorBar, floor: Mapping[Place, int] | None = None
) -> AdelicQuotient:
    """``H^0`` and ``H^1`` of ``O(divisor)`` in the finite model."""
    prec = max([abs(m) for _, m in divisor.items()] + [0]) + 4
    return AdelicQuotient(
        curve, 1, line_bundle_lattices(curve, divisor, prec), levels=1, floor=floor
    )


def line_bundle_cohomology(curve: Curve, divisor: DivisorBar) -> tuple[int, int]:
    """``(h^0, h^1)`` of ``O(divisor)``."""
    space = line_bundle_quotient(curve, divisor)
    return space.h0_dim, space.h1_dim


def _floor_for(x: AdelicClass) -> dict[Place, int]:
    return {p: min(0, s.order()) for p, s in x.parts.items()}


def reduce_adelic_class(
    curve: Curve, x: AdelicClass, space: AdelicQuotient | None = None
) -> np.ndarray:
    """Coordinates of ``x`` in the basis of ``H^1(O(twist))`` fixed by ``space``.

    The map is F_q-linear and its kernel is exactly ``F + lattice``. Pass
    the same ``space`` to compare several classes; the default space is
    the smallest one holding ``x``.
    """
    if space is None:
        space = line_bundle_quotient(curve, x.twist, _floor_for(x))
    vec = space.encode({p: (LaurentElement.reduced(s),) for p, s in x.parts.items()})
    return space.h1_coordinates(vec)


def is_principal_plus_integral(curve: Curve, x: AdelicClass) -> bool:
    """Decide ``x in F + lattice`` by solving for a global function explicitly."""
    space = line_bundle_quotient(curve, x.twist, _floor_for(x))
    vec = space.encode({p: (LaurentElement.reduced(s),) for p, s in x.parts.items()})
    return space.solve_preimage(vec) is not None


def principal_adele(
    curve: Curve, func: CurveFunction, places: list[Place], prec: int, twist: DivisorBar | None = None
) -> AdelicClass:
    """The principal parts of a global function at the given places."""
    parts = {p: curve.expand(func, p, prec) for p in places}
    return AdelicClass(parts, twist or DivisorBar())


def serre_pairing(curve: Curve, x: AdelicClass, phi: CurveFunction) -> int:
    """``sum_p Res_p(phi * x_p * omega_0)`` for phi in ``L(K - twist)``.

    The value only depends on the class of x in ``H^1(O(twist))``.
    """
    f = curve.field
    total = 0
    for p, xp in x.parts.items():
        if xp.is_zero():
            continue
        need = max(0, -xp.order()) + 2
        phip = curve.expand(phi, p, need + abs(curve.canonical_divisor()[p]) + 2)
        wp = curve.omega_expansion(p, need + abs(curve.canonical_divisor()[p]) + 2)
        total = f.add(total, curve.residue(phip * wp * xp))
    return total


def pairing_matrix(curve: Curve, divisor: DivisorBar) -> np.ndarray:
    """Serre pairing between a basis of ``H^1(O(E))`` and ``L(K - E)``.

    Rows follow the monomial representatives of H^1, columns the basis of
    ``L(K - E)``. Serre duality makes it square and invertible.
    """
    space = line_bundle_quotient(curve, divisor)
    dual = curve.rr_basis(curve.canonical_divisor() - divisor)
    out = np.zeros((space.h1_dim, dual.dim), dtype=np.int64)
    for i in range(space.h1_dim):
        place, vec = space.h1_representative(i)
        x = AdelicClass({place: vec[0].red}, divisor)
        for j, phi in enumerate(dual.basis):
            out[i, j] = serre_pairing(curve, x, phi)
    return out


def pairing_is_perfect(curve: Curve, divisor: DivisorBar) -> bool:
    mat = pairing_matrix(curve, divisor)
    n, m = mat.shape
    if n != m:
        return False
    return n == 0 or rank_mod_p(mat, curve.field.p) == n
