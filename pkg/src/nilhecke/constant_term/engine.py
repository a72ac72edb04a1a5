"""Evaluation of the constant terms ``E_D`` and ``E^1`` on a bundle window.

For a torus point t on the stratum of D,

    E_D f(t) = kappa / |H^1(Lambda)| * sum_x f(u_x t g_D),

with ``kappa = q^(2 genus - 2)`` the volume of ``A / F``, x running over
``A / (F + Lambda)`` and ``Lambda = a (eps O + t^n O)`` locally, where
``a = a_1 / a_2``. The quotient is a finite F_q-space. Its classes split
into a reduced part y and an eps-part z; moving along z multiplies g by
``1 + eps z E12`` on the left, which shifts the Serre coordinates of the
eps-class linearly. Each y is therefore classified once and the whole
z-fiber is read off the orbit table in one step.

``E^1`` only averages over z.
"""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from functools import cached_property
from typing import Mapping
from typing import NamedTuple
from typing import Sequence

import numpy as np

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.window import BundleClass
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.constant_term.strata import TorusPoint
from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.adeles import LocalLattice
from nilhecke.curves.adeles import Slot
from nilhecke.curves.base import Curve
from nilhecke.curves.base import Place
from nilhecke.errors import OutOfWindow
from nilhecke.errors import WindowTooSmall
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.linalg import all_vectors
from nilhecke.rings.linalg import rref_mod_p


logger = logging.getLogger(__name__)

Functional = dict[BundleClass, Fraction]


def kappa(curve: Curve) -> Fraction:
    """``|H^1(C, O)| / |H^0(C, O)| = q^(2 genus - 2)``."""
    return Fraction(curve.q) ** (2 * curve.genus - 2)


def unipotent_lattices(
    curve: Curve, shape: Mapping[Place, tuple[int, int]], prec: int
) -> dict[Place, LocalLattice]:
    """``t^v (eps O + t^n O)`` at each place, for ``shape[p] = (v, n)``."""
    f = curve.field
    out = {}
    for p, (v, n) in shape.items():
        eps = LaurentElement.monomial(f, DualScalar.of(f, 0, 1), v, prec)
        red = LaurentElement.monomial(f, 1, v + n, prec)
        out[p] = LocalLattice([(eps,), (red,)], v + n)
    return out


class UnipotentQuotient:
    """``A / (F + Lambda)`` with a basis split into reduced and eps directions.

    Args:
        curve: Reduced curve backend.
        shape: ``(v_p, n_p)``: valuation of ``a-bar`` and multiplicity in D.
        prec: Precision of the local generators.
    """

    def __init__(self, curve: Curve, shape: Mapping[Place, tuple[int, int]], prec: int) -> None:
        self.curve = curve
        self.prec = prec
        self.shape = dict(shape)
        self.space = AdelicQuotient(curve, 1, unipotent_lattices(curve, shape, prec), levels=2)

    @property
    def h0(self) -> int:
        return self.space.h0_dim

    @property
    def h1(self) -> int:
        return self.space.h1_dim

    @cached_property
    def _basis(self) -> tuple[list[Slot], list[Slot]]:
        sp = self.space
        p = self.curve.field.p
        slots = [sp.slot(j) for j in range(sp.dim)]
        eye = np.eye(sp.dim, dtype=np.int64)
        images = sp.h1_coordinates(eye)
        eps_ids = [j for j, s in enumerate(slots) if s.level == 1]
        red_ids = [j for j, s in enumerate(slots) if s.level == 0]
        if not self.h1:
            return [], []
        ech = rref_mod_p(images[eps_ids].T, p, ncols=len(eps_ids))
        z = [eps_ids[i] for i in ech.pivots]
        stacked = np.concatenate([images[z], images[red_ids]], axis=0)
        ech = rref_mod_p(stacked.T, p, ncols=len(stacked))
        y = [red_ids[i - len(z)] for i in ech.pivots if i >= len(z)]
        if len(y) + len(z) != self.h1:
            msg = f"unipotent quotient basis has {len(y) + len(z)} vectors, H^1 has {self.h1}"
            raise WindowTooSmall(msg)
        return [slots[j] for j in y], [slots[j] for j in z]

    @property
    def reduced_slots(self) -> list[Slot]:
        return self._basis[0]

    @property
    def eps_slots(self) -> list[Slot]:
        return self._basis[1]

    def monomial(self, slot: Slot, coef: int) -> LaurentElement:
        f = self.curve.field
        prec = max(self.prec, self.space.hi[slot.place] + 1)
        c = DualScalar.of(f, coef, 0) if slot.level == 0 else DualScalar.of(f, 0, coef)
        return LaurentElement.monomial(f, c, slot.exponent, prec)

    def adele(self, y: Sequence[int]) -> dict[Place, LaurentElement]:
        """The reduced-direction adele with coordinates y."""
        out: dict[Place, LaurentElement] = {}
        for coef, s in zip(y, self.reduced_slots):
            if not coef:
                continue
            term = self.monomial(s, int(coef))
            out[s.place] = out[s.place] + term if s.place in out else term
        return out


class FiberSums(NamedTuple):
    """Class counts of ``u_x t g_D r`` for every reduced direction y, summed over z.

    ``hits[i]`` is None when the bundles over ``y_i`` leave the window.
    """

    label: str
    h0: int
    h1: int
    reduced: int
    eps: int
    hits: list[Counter[BundleClass] | None]

    @property
    def single_term(self) -> bool:
        """The sum over the reduced directions has one term."""
        return self.reduced == 0


class ConstantTermEngine:
    """Constant terms of functions supported on a window of bundles with gap at most ``gap``.

    Args:
        moduli: Classifier.
        gap: Gap of the supporting window.
    """

    def __init__(self, moduli: Moduli, gap: int) -> None:
        self.moduli = moduli
        self.curve = moduli.curve
        self.gap = gap
        self.prec = moduli.prec
        self._spaces: dict[tuple[tuple[Place, int, int], ...], UnipotentQuotient] = {}

    def shape(self, point: TorusPoint) -> dict[Place, tuple[int, int]]:
        f = self.curve.field
        out = {}
        for p in point.places():
            v = point.ratio(f, p, self.prec).order()
            n = point.divisor[p]
            if v or n:
                out[p] = (v, n)
        return out

    def quotient(self, point: TorusPoint) -> UnipotentQuotient:
        shape = self.shape(point)
        key = tuple((p, v, n) for p, (v, n) in sorted(shape.items()))
        hit = self._spaces.get(key)
        if hit is None:
            hit = self._spaces[key] = UnipotentQuotient(self.curve, shape, self.prec)
        return hit

    def fiber(self, point: TorusPoint, right: tuple[Place, Mat2] | None = None) -> FiberSums:
        """Classify ``u_x t g_D r`` for every x in ``A / (F + Lambda)``."""
        curve = self.curve
        p = curve.field.p
        lam = self.quotient(point)
        base = point.matrix(curve, self.prec)
        if right is not None:
            base = base.right(*right)
        zs = all_vectors(p, len(lam.eps_slots))
        hits: list[Counter[BundleClass] | None] = []
        for y in all_vectors(p, len(lam.reduced_slots)):
            x = lam.adele(y)
            u = AdelicMatrix(
                curve, {q: Mat2.elementary(0, 1, e) for q, e in x.items()}, self.prec
            )
            g = u * base if x else base
            try:
                at = self.moduli.locate(g, self.gap)
            except OutOfWindow:
                hits.append(None)
                continue
            if lam.eps_slots and at.data.h:
                dirs = np.array(
                    [
                        self.moduli.direction(
                            at, s.place, Mat2.unit_matrix(0, 1, lam.monomial(s._replace(level=0), 1))
                        )
                        for s in lam.eps_slots
                    ],
                    dtype=np.int64,
                )
                coords = (at.raw + zs @ dirs) % p
            else:
                coords = np.repeat(at.raw[None, :], len(zs), axis=0)
            hits.append(self.moduli.tally(at, coords))
        return FiberSums(
            point.label, lam.h0, lam.h1, len(lam.reduced_slots), len(lam.eps_slots), hits
        )

    # functionals

    def constant_term(
        self, point: TorusPoint, right: tuple[Place, Mat2] | None = None
    ) -> Functional:
        """``E_D`` at t as a linear functional on classes of the window."""
        sums = self.fiber(point, right)
        scale = kappa(self.curve) / Fraction(self.curve.q) ** sums.h1
        out: Counter[BundleClass] = Counter()
        for hit in sums.hits:
            if hit is not None:
                out.update(hit)
        return {cls: scale * m for cls, m in out.items()}

    def strongly_cuspidal_rows(self, point: TorusPoint) -> list[Functional]:
        """``E^1`` at ``u_y t g_D`` for every reduced direction y."""
        sums = self.fiber(point)
        scale = Fraction(1, self.curve.q**sums.eps)
        return [
            {cls: scale * m for cls, m in hit.items()} for hit in sums.hits if hit is not None
        ]


def evaluate(
    functional: Mapping[BundleClass, Fraction], window: Window, f: Sequence[Fraction]
) -> Fraction:
    """Apply a functional to a function on the window; classes outside it carry 0."""
    total = Fraction(0)
    for cls, w in functional.items():
        if cls in window:
            total += w * f[window.position(cls)]
    return total


def as_row(functional: Mapping[BundleClass, Fraction], window: Window) -> list[Fraction]:
    row = [Fraction(0)] * len(window)
    for cls, w in functional.items():
        if cls in window:
            row[window.position(cls)] += w
    return row


def restrict(functional: Mapping[BundleClass, Fraction], window: Window) -> Functional:
    return {cls: w for cls, w in functional.items() if w and cls in window}
