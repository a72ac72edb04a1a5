"""Lattices ``x O^2`` inside a truncation window, as F_p-subspaces.

Left cosets ``x G(O)`` correspond to lattices ``x O^2``. Every lattice met
in one computation is sandwiched between ``t^hi O^2`` and ``t^lo O^2``; the
quotient ``t^lo O^2 / t^hi O^2`` is a finite F_p-space with coordinates
ordered (component, eps-level, exponent, F_p-digit), and a lattice is
stored as the reduced row echelon form of its image there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from nilhecke.errors import PrecisionExhausted
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.field import FiniteField
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.linalg import Echelon
from nilhecke.rings.linalg import rref_mod_p


@dataclass(frozen=True)
class LatticeWindow:
    """The quotient ``t^lo O^2 / t^hi O^2`` over F_q = F_p^m."""

    field: FiniteField
    lo: int
    hi: int

    @property
    def depth(self) -> int:
        return self.hi - self.lo

    @property
    def dim(self) -> int:
        return 2 * 2 * self.depth * self.field.m

    def _entry_digits(self, x: LaurentElement, low: int) -> np.ndarray:
        """Digits of the (red, eps) coefficients of x on ``t^low .. t^(hi-1)``."""
        f = self.field
        if x.precision < self.hi:
            msg = f"entry known to t^{x.precision}, window needs t^{self.hi}"
            raise PrecisionExhausted(msg)
        if x.order() < self.lo:
            msg = f"entry of order {x.order()} below window bottom {self.lo}"
            raise ValueError(msg)
        red = f.to_fp(x.red.window(low, self.hi))
        eps = f.to_fp(x.eps.window(low, self.hi))
        return np.stack([red, eps])

    def lattice_rows(self, x: Mat2) -> np.ndarray:
        """F_p-spanning rows of the image of ``x O^2``."""
        f = self.field
        depth = self.depth
        low = self.lo - depth
        rows = []
        for col in ((x.a, x.c), (x.b, x.d)):
            for beta in f.fp_basis():
                scaled = [e.scale(beta) for e in col]
                digits = [self._entry_digits(e, low) for e in scaled]
                for level in (0, 1):
                    comps = []
                    for dg in digits:
                        if level == 0:
                            comps.append(dg)
                        else:
                            moved = np.zeros_like(dg)
                            moved[1] = dg[0]
                            comps.append(moved)
                    full = np.stack(comps)
                    for k in range(depth):
                        window = full[:, :, depth - k : 2 * depth - k, :]
                        rows.append(window.reshape(-1))
        return np.array(rows, dtype=np.int64)

    def echelon(self, x: Mat2) -> Echelon:
        return rref_mod_p(self.lattice_rows(x), self.field.p, ncols=self.dim)

    def key(self, x: Mat2) -> bytes:
        """Canonical key of the lattice ``x O^2``."""
        return self.echelon(x).key()

    def contains_window(self, x: Mat2) -> bool:
        """Whether ``t^hi O^2 <= x O^2 <= t^lo O^2``."""
        if x.min_order() < self.lo:
            return False
        return -x.inverse().min_order() <= self.hi


def window_for(mats: Iterable[Mat2], field: FiniteField) -> LatticeWindow:
    """Smallest window containing every lattice ``x O^2`` for the given x."""
    lo, hi = 0, 0
    first = True
    for m in mats:
        m_lo = m.min_order()
        m_hi = -m.inverse().min_order()
        lo, hi = (m_lo, m_hi) if first else (min(lo, m_lo), max(hi, m_hi))
        first = False
    return LatticeWindow(field, lo, max(hi, lo + 1))


def product_window(a: LatticeWindow, b: LatticeWindow) -> LatticeWindow:
    """Window holding every ``x y O^2`` with x O^2 in a and y O^2 in b."""
    return LatticeWindow(a.field, a.lo + b.lo, a.hi + b.hi)
