"""Double cosets G(O) g G(O) and their left-coset decompositions.

A double coset is explored as the G(O)-orbit of the lattice ``g O^2``:
breadth-first search over a generating set of G(O) acting on the finite
window quotient. Orbit elements are exactly the left cosets ``x G(O)``
contained in the double coset, so the orbit doubles as the list of left
coset representatives.
"""

from __future__ import annotations

import logging
import threading
from collections import deque
from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Mapping

from nilhecke.errors import PrecisionExhausted
from nilhecke.errors import WindowTooLarge
from nilhecke.local.lattices import LatticeWindow
from nilhecke.local.lattices import window_for
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement


logger = logging.getLogger(__name__)

MAX_ORBIT = 200_000


@dataclass(frozen=True, eq=False)
class DoubleCoset:
    """The double coset of ``representative`` inside a fixed window.

    ``lattices`` maps the key of every lattice ``x O^2`` in the orbit to a
    matrix x; ``canonical_key`` is the least of those keys. ``bounds`` is the
    tightest window (lo, hi) of the orbit, independent of the exploring one.
    """

    representative: Mat2
    window: LatticeWindow
    precision: int
    bounds: tuple[int, int]
    lattices: Mapping[bytes, Mat2] = dc_field(repr=False)
    canonical_key: bytes = dc_field(repr=False)

    @property
    def size(self) -> int:
        """Number of left cosets ``x G(O)`` inside the double coset."""
        return len(self.lattices)

    def contains(self, x: Mat2) -> bool:
        """Membership of ``x`` in the double coset, decided in the window."""
        if not self.window.contains_window(x):
            return False
        return self.window.key(x) in self.lattices

    def label(self) -> str:
        lo, hi = self.bounds
        return f"[{lo},{hi})x{self.size}#{self.canonical_key.hex()[-12:]}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DoubleCoset):
            return NotImplemented
        if self.bounds != other.bounds or self.size != other.size:
            return False
        if (self.window.lo, self.window.hi) == (other.window.lo, other.window.hi):
            return self.canonical_key == other.canonical_key
        return self.contains(other.representative)

    def __hash__(self) -> int:
        return hash((self.bounds, self.size))

    def __repr__(self) -> str:
        return f"DoubleCoset({self.label()}, size={self.size})"


def group_generators(field: FiniteField, depth: int, prec: int) -> list[Mat2]:
    """Generators of G(O) acting on a window of the given depth.

    Elementary matrices with entries ``beta t^k`` and ``beta eps t^k`` for
    beta in an F_p-basis, plus diagonal units generating O^*.
    """
    one = LaurentElement.one(field, prec)
    gens: list[Mat2] = []
    for k in range(max(depth, 1)):
        for beta in field.fp_basis():
            for coef in (DualScalar.of(field, beta), DualScalar.of(field, 0, beta)):
                x = LaurentElement.monomial(field, coef, k, prec)
                gens.append(Mat2.elementary(0, 1, x))
                gens.append(Mat2.elementary(1, 0, x))
                if k >= 1 or coef.a0 == 0:
                    gens.append(Mat2.diag(one + x, one))
    if field.q > 2:
        g = LaurentElement.monomial(field, field.generator, 0, prec)
        gens.append(Mat2.diag(g, one))
        gens.append(Mat2.diag(one, g))
    return gens


def explore_orbit(
    x: Mat2, window: LatticeWindow, limit: int = MAX_ORBIT
) -> dict[bytes, Mat2]:
    """Breadth-first G(O)-orbit of the lattice ``x O^2``.

    Raises:
        WindowTooLarge: If the orbit exceeds ``limit`` lattices.
        PrecisionExhausted: If x is not known to the window top.
    """
    prec = x.precision - min(window.lo, 0)
    gens = group_generators(window.field, window.depth, prec)
    seen = {window.key(x): x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for g in gens:
            z = g * y
            key = window.key(z)
            if key in seen:
                continue
            seen[key] = z
            if len(seen) > limit:
                msg = f"orbit exceeds {limit} lattices in window [{window.lo},{window.hi})"
                raise WindowTooLarge(msg)
            queue.append(z)
    return seen


class OrbitMemo:
    """Thread-safe map from lattice keys to the double coset containing them."""

    def __init__(self, enabled: bool = True) -> None:
        self.enabled = enabled
        self._lock = threading.Lock()
        self._table: dict[tuple[int, int, int, int, bytes], DoubleCoset] = {}

    def lookup(self, window: LatticeWindow, key: bytes) -> DoubleCoset | None:
        if not self.enabled:
            return None
        with self._lock:
            return self._table.get(self._slot(window, key))

    def publish(self, coset: DoubleCoset) -> None:
        if not self.enabled:
            return
        with self._lock:
            for key in coset.lattices:
                self._table.setdefault(self._slot(coset.window, key), coset)

    def clear(self) -> None:
        with self._lock:
            self._table.clear()

    def __len__(self) -> int:
        return len(self._table)

    @staticmethod
    def _slot(window: LatticeWindow, key: bytes) -> tuple[int, int, int, int, bytes]:
        return (window.field.p, window.field.m, window.lo, window.hi, key)


orbit_memo = OrbitMemo()


def double_coset(
    g: Mat2, window: LatticeWindow | None = None, memo: OrbitMemo | None = orbit_memo
) -> DoubleCoset:
    """The double coset ``G(O) g G(O)``, explored in ``window``.

    The default window is the smallest one holding ``g O^2``.

    Raises:
        PrecisionExhausted: If g is not known to the window top.
    """
    if window is None:
        window = window_for([g], g.field)
    if g.precision < window.hi:
        msg = f"matrix known to t^{g.precision}, window needs t^{window.hi}"
        raise PrecisionExhausted(msg)
    key = window.key(g)
    if memo is not None:
        hit = memo.lookup(window, key)
        if hit is not None:
            return hit
    lattices = explore_orbit(g, window)
    tight = window_for([g], g.field)
    coset = DoubleCoset(
        representative=g,
        window=window,
        precision=g.precision,
        bounds=(tight.lo, tight.hi),
        lattices=lattices,
        canonical_key=min(lattices),
    )
    logger.debug("explored %r", coset)
    if memo is not None:
        memo.publish(coset)
    return coset


def left_coset_reps(s: DoubleCoset) -> list[Mat2]:
    """Matrices x_i with ``S`` the disjoint union of ``x_i G(O)``.

    Ordered by lattice key, so the list is deterministic.
    """
    return [s.lattices[k] for k in sorted(s.lattices)]
