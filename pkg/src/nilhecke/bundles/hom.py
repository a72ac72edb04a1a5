"""Hom spaces between reduced bundles, determinant forms and isomorphism tests.

For reduced bundles with matrices ``s`` and ``g`` the local lattice of
``Hom(V_s, V_g)`` at p is ``g_p M_2(O_p) s_p^-1``. Matrices are flattened
to rank-4 vectors in the order (a, b, c, d).

An element gamma of ``H^0(Hom)`` is an isomorphism iff ``det gamma`` has
exactly the divisor ``sum_p (v(det g_p) - v(det s_p)) p``. When both
determinants lie in one class this is decided at a single place p0 by the
coefficient of ``t^v`` with v the expected valuation there. The
coefficient is a quadratic form in the coordinates of gamma.
"""

from __future__ import annotations

import logging
import random
from functools import cached_property
from typing import Sequence

import numpy as np

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.adeles import GlobalSection
from nilhecke.curves.adeles import LocalLattice
from nilhecke.curves.base import Curve
from nilhecke.curves.base import Place
from nilhecke.errors import WindowTooLarge
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.linalg import all_vectors


logger = logging.getLogger(__name__)

# exhaustive searches stop here
MAX_SEARCH = 1 << 22


def hom_lattice(source: Mat2, target: Mat2, twist: int = 0) -> LocalLattice:
    """``t^twist * target M_2(O) source^-1`` as a rank-4 lattice."""
    f = source.field
    prec = min(source.precision, target.precision)
    one = LaurentElement.one(f, prec)
    sinv = source.inverse()
    gens = []
    for i in (0, 1):
        for j in (0, 1):
            m = target * Mat2.unit_matrix(i, j, one) * sinv
            gens.append(tuple(e.shift(twist) for e in m.entries()))
    hi = -(target.inverse().min_order() + source.min_order()) + twist
    return LocalLattice(gens, hi)


def as_mat2(vec: Sequence[LaurentElement]) -> Mat2:
    return Mat2(*vec)


def det_coefficient(m: Mat2, k: int) -> int:
    return m.det().red.coefficient(k)


def det_quadratic_form(mats: Sequence[Mat2], k: int, p: int) -> np.ndarray:
    """Upper-triangular Q with ``coef_k det(sum x_a m_a) = x Q x^T`` mod p."""
    n = len(mats)
    dets = [det_coefficient(m, k) for m in mats]
    out = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        out[a, a] = dets[a]
        for b in range(a + 1, n):
            out[a, b] = (det_coefficient(mats[a] + mats[b], k) - dets[a] - dets[b]) % p
    return out


class HomSpace:
    """``H^0`` and ``H^1`` of ``Hom(V_source, V_target)`` (``omega=True``: twisted by omega).

    Args:
        curve: Reduced curve backend.
        source: Reduced matrix of the source bundle.
        target: Reduced matrix of the target bundle.
        omega: Tensor with the canonical bundle.
    """

    def __init__(
        self, curve: Curve, source: AdelicMatrix, target: AdelicMatrix, omega: bool = False
    ) -> None:
        self.curve = curve
        self.source = source.reduction()
        self.target = target.reduction()
        self.omega = omega
        canon = curve.canonical_divisor() if omega else None
        places = set(self.source.support) | set(self.target.support)
        if canon is not None:
            places |= set(canon.support())
        lattices = {}
        for p in sorted(places):
            twist = -canon[p] if canon is not None else 0
            lattices[p] = hom_lattice(self.source.at(p), self.target.at(p), twist)
        self.quotient = AdelicQuotient(curve, 4, lattices, levels=1)
        self._expansions: dict[tuple[Place, int], list[Mat2]] = {}

    @property
    def h0_dim(self) -> int:
        return self.quotient.h0_dim

    @property
    def h1_dim(self) -> int:
        return self.quotient.h1_dim

    @cached_property
    def basis(self) -> list[GlobalSection]:
        return self.quotient.h0_basis()

    def basis_at(self, place: Place, prec: int) -> list[Mat2]:
        """Local expansions of the basis sections at a place."""
        key = (place, prec)
        hit = self._expansions.get(key)
        if hit is None:
            hit = [as_mat2(s.expand(place, prec)) for s in self.basis]
            self._expansions[key] = hit
        return hit

    def element_at(self, coeffs: Sequence[int] | np.ndarray, place: Place, prec: int) -> Mat2:
        """Expansion of ``sum_a x_a e_a`` at a place."""
        f = self.curve.field
        acc = Mat2.zero(f, prec)
        for c, m in zip(coeffs, self.basis_at(place, prec)):
            c = int(c) % f.q
            if c:
                acc = acc + m.scale(LaurentElement.monomial(f, c, 0, prec))
        return acc

    def expected_valuation(self, place: Place) -> int:
        """Valuation of ``det gamma`` at ``place`` for an isomorphism gamma."""
        s = self.source.at(place).det().red.valuation()
        g = self.target.at(place).det().red.valuation()
        return g - s

    def working_precision(self, place: Place, k: int) -> int:
        lo = self.quotient.lo.get(place, 0)
        return max(k, 0) - 2 * min(lo, 0) + 6

    def det_form(self, place: Place | None = None) -> np.ndarray:
        """Upper-triangular matrix Q with ``coef(det(sum x_a e_a)) = x Q x^T``."""
        place = place or self.curve.aux_place()
        k = self.expected_valuation(place)
        prec = self.working_precision(place, k)
        return det_quadratic_form(self.basis_at(place, prec), k, self.curve.field.p)

    @cached_property
    def form(self) -> np.ndarray:
        return self.det_form()

    def form_values(self, x: np.ndarray) -> np.ndarray:
        """Values of the determinant form on a stack of coordinate rows."""
        x = np.asarray(x, dtype=np.int64)
        if self.h0_dim == 0:
            return np.zeros(len(x) if x.ndim > 1 else 1, dtype=np.int64)
        x = x.reshape(-1, self.h0_dim)
        return ((x @ self.form) * x).sum(axis=1) % self.curve.field.p

    def find_invertible(
        self, rng: random.Random | None = None, trials: int = 32
    ) -> np.ndarray | None:
        """Coordinates of an isomorphism, or None if there is none.

        A few random trials run first; then every element is scanned.

        Raises:
            WindowTooLarge: If the exhaustive scan exceeds ``MAX_SEARCH``.
        """
        n = self.h0_dim
        if n == 0:
            return None
        q = self.curve.field.q
        rng = rng or random.Random(0)
        guesses = np.array(
            [[rng.randrange(q) for _ in range(n)] for _ in range(trials)], dtype=np.int64
        )
        vals = self.form_values(guesses)
        hit = np.flatnonzero(vals)
        if len(hit):
            return guesses[int(hit[0])]
        if q**n > MAX_SEARCH:
            msg = f"isomorphism search over {q}^{n} elements exceeds the guard"
            raise WindowTooLarge(msg)
        every = all_vectors(q, n)
        vals = self.form_values(every)
        hit = np.flatnonzero(vals)
        if len(hit):
            return every[int(hit[0])]
        return None

    def units(self) -> np.ndarray:
        """Every invertible element, as coordinate rows (for ``Hom(V, V)``)."""
        n = self.h0_dim
        q = self.curve.field.q
        if q**n > MAX_SEARCH:
            msg = f"unit enumeration over {q}^{n} elements exceeds the guard"
            raise WindowTooLarge(msg)
        every = all_vectors(q, n)
        return every[self.form_values(every) != 0]


def is_isomorphic(curve: Curve, g: AdelicMatrix, h: AdelicMatrix) -> bool:
    """Isomorphism of the reductions of g and h."""
    gd, hd = g.reduction(), h.reduction()
    if curve.divisor_class(gd.det_divisor()) != curve.divisor_class(hd.det_divisor()):
        return False
    return HomSpace(curve, gd, hd).find_invertible() is not None


def twisted_h0(curve: Curve, g: AdelicMatrix, m: int) -> int:
    """``h^0(V-bar(-m O))`` with O the auxiliary place."""
    aux = curve.aux_place()
    gd = g.reduction()
    lattices = gd.lattices()
    base = lattices.get(aux) or LocalLattice.standard(curve.field, 2, g.prec)
    lattices[aux] = base.twisted(m)
    return AdelicQuotient(curve, 2, lattices, levels=1).h0_dim


def profile(curve: Curve, g: AdelicMatrix, ms: Sequence[int]) -> tuple[int, ...]:
    """Isomorphism invariant ``(h^0(V-bar(-m O)))_m`` of the reduction."""
    return tuple(twisted_h0(curve, g, m) for m in ms)
