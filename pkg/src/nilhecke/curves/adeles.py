"""H^0 and H^1 of lattices in adelic vector spaces, by finite linear algebra.

A lattice of rank n over C (``levels=2``, coefficients in D = F_q[eps]) or
over the reduced curve (``levels=1``) is given by local lattices at finitely
many places and is standard elsewhere. With ``lo_p`` below every generator
and ``hi_p`` above the lattice, everything happens in

    W = sum_p t^lo_p O_p^n / t^hi_p O_p^n,

which has F_q-coordinates (place, component, level, exponent). Let E be the
divisor ``sum -lo_p p``, made ample enough that ``H^1(O(E)) = 0``. Then

    H^0 = {f in L(E)^n : image of f lies in the lattice},
    H^1 = W / (lattice image + image of L(E)^n).
"""

from __future__ import annotations

import logging
from functools import cached_property
from typing import Mapping
from typing import NamedTuple
from typing import Sequence

import numpy as np

from nilhecke.curves.base import Curve
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import Place
from nilhecke.errors import PrecisionExhausted
from nilhecke.errors import WindowTooSmall
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.linalg import Echelon
from nilhecke.rings.linalg import left_nullspace_mod_p
from nilhecke.rings.linalg import rref_mod_p
from nilhecke.rings.linalg import solve_mod_p
from nilhecke.rings.linalg import stack_rows


logger = logging.getLogger(__name__)

Vector = tuple[LaurentElement, ...]


class LocalLattice(NamedTuple):
    """An O_p-lattice spanned by ``generators``, containing ``t^hi O_p^n``."""

    generators: list[Vector]
    hi: int

    @classmethod
    def standard(cls, field: FiniteField, rank: int, prec: int) -> LocalLattice:
        gens = []
        for i in range(rank):
            gens.append(
                tuple(
                    LaurentElement.one(field, prec) if j == i else LaurentElement.zero(field, prec)
                    for j in range(rank)
                )
            )
        return cls(gens, 0)

    @classmethod
    def from_matrix(cls, g: Mat2) -> LocalLattice:
        """The lattice ``g O^2`` spanned by the columns of g."""
        return cls([(g.a, g.c), (g.b, g.d)], -g.inverse().min_order())

    @classmethod
    def line(cls, field: FiniteField, mult: int, prec: int) -> LocalLattice:
        """``t^-mult O``, the local lattice of O(E) where E has multiplicity mult."""
        return cls([(LaurentElement.monomial(field, 1, -mult, prec),)], -mult)

    def twisted(self, k: int) -> LocalLattice:
        """Multiply by ``t^k``."""
        return LocalLattice(
            [tuple(x.shift(k) for x in v) for v in self.generators], self.hi + k
        )

    def min_order(self, levels: int) -> int:
        orders = [
            x.order() if levels == 2 else x.red.order()
            for v in self.generators
            for x in v
        ]
        return min(orders) if orders else 0

    @property
    def rank(self) -> int:
        return len(self.generators[0]) if self.generators else 0


class Slot(NamedTuple):
    """Meaning of one coordinate of W."""

    place: Place
    comp: int
    level: int
    exponent: int


class AdelicQuotient:
    """Finite model of H^0 and H^1 for one lattice.

    Args:
        curve: Reduced curve backend.
        rank: Rank n of the lattice.
        lattices: Local lattices at the places where they are not standard.
        levels: 2 for coefficients in D, 1 for coefficients in F_q.
        floor: Optional lower bounds ``lo_p`` (extra places allowed), used to
            hold adeles with poles that the lattice itself does not reach.
    """

    def __init__(
        self,
        curve: Curve,
        rank: int,
        lattices: Mapping[Place, LocalLattice],
        levels: int = 2,
        floor: Mapping[Place, int] | None = None,
    ) -> None:
        self.curve = curve
        self.field = curve.field
        self.rank = rank
        self.levels = levels
        self.lattices = dict(lattices)
        floor = dict(floor or {})

        places = sorted(set(self.lattices) | set(floor))
        lo = {}
        for p in places:
            lat = self.lattices.get(p)
            bound = min(0, floor.get(p, 0))
            if lat is not None:
                bound = min(bound, lat.min_order(levels))
            lo[p] = bound
        deg = -sum(lo.values())
        if deg <= 2 * curve.genus - 2:
            aux = curve.aux_place()
            lo[aux] = lo.get(aux, 0) - (2 * curve.genus - 1 - deg)
            if aux not in places:
                places = sorted([*places, aux])
        prec = self._precision_hint()
        for p in places:
            if p not in self.lattices:
                self.lattices[p] = LocalLattice.standard(self.field, rank, prec)
        hi = {p: max(self.lattices[p].hi, lo[p] + 1) for p in places}

        self.places = places
        self.lo = lo
        self.hi = hi
        self.offsets: dict[Place, int] = {}
        off = 0
        for p in places:
            self.offsets[p] = off
            off += rank * levels * (hi[p] - lo[p])
        self.dim = off
        self.divisor = DivisorBar({p: -lo[p] for p in places})
        self.rr = curve.rr_basis(self.divisor)

    def _precision_hint(self) -> int:
        precs = [x.precision for lat in self.lattices.values() for v in lat.generators for x in v]
        return min(precs) if precs else 32

    # coordinates

    def depth(self, p: Place) -> int:
        return self.hi[p] - self.lo[p]

    def index(self, p: Place, comp: int, level: int, exponent: int) -> int:
        return (
            self.offsets[p]
            + (comp * self.levels + level) * self.depth(p)
            + (exponent - self.lo[p])
        )

    def slot(self, j: int) -> Slot:
        for p in reversed(self.places):
            if j >= self.offsets[p]:
                rest = j - self.offsets[p]
                block, k = divmod(rest, self.depth(p))
                comp, level = divmod(block, self.levels)
                return Slot(p, comp, level, self.lo[p] + k)
        msg = f"coordinate {j} outside W"
        raise IndexError(msg)

    def _put(
        self, vec: np.ndarray, p: Place, comp: int, level: int, series: LaurentSeries, shift: int = 0
    ) -> None:
        """Write the window of ``t^shift * series`` into a slot block."""
        lo, hi = self.lo[p], self.hi[p]
        if series.prec + shift < hi:
            msg = f"series known to t^{series.prec + shift}, window at {p.label()} needs t^{hi}"
            raise PrecisionExhausted(msg)
        if series.order() + shift < lo:
            msg = f"term t^{series.order() + shift} below window bottom {lo} at {p.label()}"
            raise WindowTooSmall(msg)
        start = self.index(p, comp, level, lo)
        vec[start : start + hi - lo] = series.window(lo - shift, hi - shift)

    def encode(self, components: Mapping[Place, Vector]) -> np.ndarray:
        """Image in W of an adele given by its components at places of W."""
        vec = np.zeros(self.dim, dtype=np.int64)
        for p, v in components.items():
            if p not in self.offsets:
                if all(x.is_integral() for x in v):
                    continue
                msg = f"adele has poles at {p.label()}, outside the window places"
                raise WindowTooSmall(msg)
            for c, x in enumerate(v):
                self._put(vec, p, c, 0, x.red)
                if self.levels == 2:
                    self._put(vec, p, c, 1, x.eps)
        return vec

    @cached_property
    def lattice_rows(self) -> np.ndarray:
        rows = []
        for p in self.places:
            for v in self.lattices[p].generators:
                for level in range(self.levels):
                    for k in range(self.depth(p)):
                        vec = np.zeros(self.dim, dtype=np.int64)
                        for c, x in enumerate(v):
                            if level == 0:
                                self._put_clipped(vec, p, c, 0, x.red, k)
                                if self.levels == 2:
                                    self._put_clipped(vec, p, c, 1, x.eps, k)
                            else:
                                self._put_clipped(vec, p, c, 1, x.red, k)
                        rows.append(vec)
        return stack_rows(rows, self.dim)

    def _put_clipped(
        self, vec: np.ndarray, p: Place, comp: int, level: int, series: LaurentSeries, shift: int
    ) -> None:
        if series.is_zero() and series.prec + shift >= self.hi[p]:
            return
        self._put(vec, p, comp, level, series, shift)

    @cached_property
    def global_rows(self) -> np.ndarray:
        """Images of ``f * e_c * eps^level`` for f in the basis of L(E)."""
        rows = []
        expansions = [
            {p: self.curve.expand(f, p, self.hi[p]) for p in self.places}
            for f in self.rr.basis
        ]
        for exp in expansions:
            for c in range(self.rank):
                for level in range(self.levels):
                    vec = np.zeros(self.dim, dtype=np.int64)
                    for p in self.places:
                        self._put(vec, p, c, level, exp[p])
                    rows.append(vec)
        return stack_rows(rows, self.dim)

    @cached_property
    def lattice_echelon(self) -> Echelon:
        return rref_mod_p(self.lattice_rows, self.field.p, ncols=self.dim)

    @cached_property
    def total_echelon(self) -> Echelon:
        rows = np.concatenate([self.lattice_rows, self.global_rows], axis=0)
        return rref_mod_p(rows, self.field.p, ncols=self.dim)

    # cohomology

    @property
    def h1_dim(self) -> int:
        return self.dim - self.total_echelon.rank

    @cached_property
    def h1_columns(self) -> list[int]:
        return self.total_echelon.free_columns()

    def h1_coordinates(self, vec: np.ndarray) -> np.ndarray:
        """Coordinates of the class of ``vec`` (one row or a stack) in H^1."""
        red = self.total_echelon.reduce(vec)
        return red[..., self.h1_columns]

    def h1_representative(self, j: int) -> tuple[Place, Vector]:
        """A monomial adele whose class is the j-th basis vector of H^1."""
        s = self.slot(self.h1_columns[j])
        prec = max(self.hi[s.place], s.exponent + 1)
        coef = (1, 0) if s.level == 0 else (0, 1)
        mono = LaurentElement.monomial(
            self.field, DualScalar.of(self.field, *coef), s.exponent, prec
        )
        zero = LaurentElement.zero(self.field, prec)
        vec = tuple(mono if c == s.comp else zero for c in range(self.rank))
        return s.place, vec

    def solve_preimage(self, vec: np.ndarray) -> np.ndarray | None:
        """Combination of lattice and global rows equal to ``vec``, if any."""
        rows = np.concatenate([self.lattice_rows, self.global_rows], axis=0)
        return solve_mod_p(rows, vec, self.field.p)

    @cached_property
    def h0_coefficients(self) -> np.ndarray:
        """Rows of combinations of global rows lying in the lattice."""
        g = self.global_rows
        if g.shape[0] == 0:
            return np.zeros((0, 0), dtype=np.int64)
        reduced = self.lattice_echelon.reduce(g)
        return left_nullspace_mod_p(reduced, self.field.p)

    @property
    def h0_dim(self) -> int:
        return int(self.h0_coefficients.shape[0])

    def h0_basis(self) -> list[GlobalSection]:
        r = self.rr.dim
        return [
            GlobalSection(self, row.reshape(r, self.rank, self.levels))
            for row in self.h0_coefficients
        ]

    def section(self, coeffs: Sequence[int] | np.ndarray) -> GlobalSection:
        """The global section with the given coordinates in ``h0_basis``."""
        c = np.asarray(coeffs, dtype=np.int64)
        if self.h0_dim == 0:
            flat = np.zeros(self.rr.dim * self.rank * self.levels, dtype=np.int64)
        else:
            flat = (c @ self.h0_coefficients) % self.field.p
        return GlobalSection(self, flat.reshape(self.rr.dim, self.rank, self.levels))


class GlobalSection:
    """A global section ``sum_r sum_c sum_e a[r, c, e] f_r eps^e e_c``."""

    def __init__(self, space: AdelicQuotient, coeffs: np.ndarray) -> None:
        self.space = space
        self.coeffs = np.asarray(coeffs, dtype=np.int64) % space.field.p

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def expand(self, place: Place, prec: int) -> Vector:
        """Local expansion, one LaurentElement per component."""
        sp = self.space
        f = sp.field
        out = []
        exps = [sp.curve.expand(func, place, prec) for func in sp.rr.basis]
        for c in range(sp.rank):
            red = LaurentSeries.zero(f, prec)
            eps = LaurentSeries.zero(f, prec)
            for r, e in enumerate(exps):
                a0 = int(self.coeffs[r, c, 0])
                if a0:
                    red = red + e.scale(a0)
                if sp.levels == 2:
                    a1 = int(self.coeffs[r, c, 1])
                    if a1:
                        eps = eps + e.scale(a1)
            out.append(LaurentElement(red, eps))
        return tuple(out)

    def __add__(self, other: GlobalSection) -> GlobalSection:
        return GlobalSection(self.space, self.coeffs + other.coeffs)

    def scale(self, c: int) -> GlobalSection:
        return GlobalSection(self.space, self.coeffs * c)
