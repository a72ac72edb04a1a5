"""Simple divisors on C and the local matrices of their Hecke modifications."""

from __future__ import annotations

from dataclasses import dataclass

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_label
from nilhecke.curves.base import Curve
from nilhecke.curves.base import Place
from nilhecke.errors import ConfigError
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.dual import dual_elements
from nilhecke.rings.laurent import LaurentElement


@dataclass(frozen=True)
class SimpleDivisor:
    """A simple divisor ``c`` through a rational place, given by its local equation.

    ``f_c = t + eps a(t)`` in the local parameter t of ``place``.
    """

    place: Place
    local: SimpleDivisorLocal

    @classmethod
    def parse(cls, curve: Curve, text: str, prec: int) -> SimpleDivisor:
        """Read ``"place:f_c"``, e.g. ``"0:t+eps"`` or ``"O:t+eps*t"``.

        Raises:
            ConfigError: On a malformed divisor or an unknown place.
        """
        label, sep, eq = text.partition(":")
        if not sep or not eq.strip():
            msg = f"divisor {text!r} is not of the form 'place:f_c'"
            raise ConfigError(msg)
        place = curve.place(label.strip())
        try:
            local = SimpleDivisorLocal.parse(eq.strip(), curve.q, prec)
        except ValueError as e:
            msg = f"invalid local equation in divisor {text!r}: {e}"
            raise ConfigError(msg) from e
        return cls(place, local)

    @property
    def f_c(self) -> LaurentElement:
        return self.local.f_c

    @property
    def precision(self) -> int:
        return self.local.precision

    def label(self) -> str:
        return f"{self.place.label()}:{self.local.text()}"

    def det_shift(self, curve: Curve) -> DetLabel:
        """Class of ``det g_c``: the point ``c-bar`` with the eps-part of ``f_c^-1``."""
        g = AdelicMatrix(curve, {self.place: self.local.g_c()}, self.precision)
        return det_label(g)

    def det_shift_prime(self, curve: Curve) -> DetLabel:
        """Class of ``det diag(1, f_c)``."""
        g = AdelicMatrix(curve, {self.place: self.local.g_c_inverse()}, self.precision)
        return det_label(g)

    def constants(self) -> list[DualScalar]:
        """Every element of ``D = F_q[eps]``, which is also ``A(c)``."""
        return dual_elements(self.local.field)

    def coset_matrices(self) -> list[Mat2]:
        """``h`` running over ``P^1(A(c))``: ``[[a, 1], [1, 0]]`` and ``[[1, 0], [eps b, 1]]``."""
        f = self.local.field
        prec = self.precision
        out = [Mat2.of(f, prec, a, 1, 1, 0) for a in self.constants()]
        out.extend(Mat2.of(f, prec, 1, 0, DualScalar.of(f, 0, b), 1) for b in range(f.q))
        return out

    def modifications(self) -> list[Mat2]:
        """``h g_c``: the superlattices of colength ``O_c``."""
        g_c = self.local.g_c()
        return [h * g_c for h in self.coset_matrices()]

    def submodifications(self) -> list[Mat2]:
        """``h diag(1, f_c)``: the sublattices of colength ``O_c``."""
        f = self.local.field
        d = Mat2.diag(LaurentElement.one(f, self.precision), self.f_c)
        return [h * d for h in self.coset_matrices()]

    def sublattices(self) -> list[Mat2]:
        """Sublattices ``M`` with ``O^2 / M = O_c`` listed directly.

        ``[[f_c, -u], [0, 1]]`` for u in D and ``[[1, 0], [-w, f_c]]`` for w in
        ``eps F_q``.
        """
        f = self.local.field
        prec = self.precision
        fc = self.f_c
        zero = LaurentElement.zero(f, prec)
        one = LaurentElement.one(f, prec)
        out = []
        for u in self.constants():
            out.append(Mat2(fc, LaurentElement.monomial(f, -u, 0, prec), zero, one))
        for b in range(f.q):
            w = LaurentElement.monomial(f, DualScalar.of(f, 0, -b), 0, prec)
            out.append(Mat2(one, zero, w, fc))
        return out
