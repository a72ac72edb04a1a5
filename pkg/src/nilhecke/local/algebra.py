"""The local Hecke algebra: rational combinations of double cosets.

A term ``w * [S]`` stands for ``w`` times the normalised characteristic
measure of S (total mass 1). Convolution of two such measures puts mass
``#{(i, j) : a_i b_j O^2 in U} / (n_a n_b)`` on each double coset U, where
``a_i`` and ``b_j`` run over left coset representatives.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator
from typing import Mapping

from nilhecke.errors import PrecisionExhausted
from nilhecke.local.cosets import DoubleCoset
from nilhecke.local.cosets import OrbitMemo
from nilhecke.local.cosets import double_coset
from nilhecke.local.cosets import left_coset_reps
from nilhecke.local.cosets import orbit_memo
from nilhecke.local.lattices import LatticeWindow
from nilhecke.local.lattices import product_window
from nilhecke.matrices.mat2 import Mat2


logger = logging.getLogger(__name__)


def truncation_bound(m: int) -> int:
    """Truncation deciding products of matrices with entries of valuation >= -m."""
    return 3 * m + 4


def pole_order(h: HeckeElement) -> int:
    """Largest pole among the representatives of the support."""
    return max((max(0, -s.representative.min_order()) for s in h.terms), default=0)


def check_truncation(h1: HeckeElement, h2: HeckeElement) -> None:
    """Raise PrecisionExhausted if ``h1 * h2`` is undecided at this truncation."""
    m = max(pole_order(h1), pole_order(h2))
    prec = min((s.precision for s in (*h1.terms, *h2.terms)), default=None)
    if prec is not None and prec < truncation_bound(m):
        need = truncation_bound(m)
        msg = f"products with poles of order {m} need truncation >= {need}, got {prec}"
        raise PrecisionExhausted(msg)


@dataclass(frozen=True)
class HeckeElement:
    """Finite map from double cosets to rational weights."""

    terms: Mapping[DoubleCoset, Fraction]

    @classmethod
    def characteristic(cls, s: DoubleCoset) -> HeckeElement:
        return cls({s: Fraction(1)})

    @classmethod
    def unit(cls, g: Mat2) -> HeckeElement:
        """The measure of G(O), built at the field and precision of ``g``."""
        return cls.characteristic(double_coset(Mat2.identity(g.field, g.precision)))

    def total_weight(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def support(self) -> list[DoubleCoset]:
        return sorted(self.terms, key=lambda s: s.canonical_key)

    def items(self) -> Iterator[tuple[DoubleCoset, Fraction]]:
        for s in self.support():
            yield s, self.terms[s]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        mine = {s: w for s, w in self.terms.items() if w}
        theirs = {s: w for s, w in other.terms.items() if w}
        return mine == theirs

    def __hash__(self) -> int:
        return hash(frozenset((s, w) for s, w in self.terms.items() if w))

    def __mul__(self, other: HeckeElement) -> HeckeElement:
        return convolve(self, other)

    def describe(self) -> list[dict[str, object]]:
        """JSON-ready listing of the terms."""
        return [
            {"coset": s.label(), "left_cosets": s.size, "weight": str(w)}
            for s, w in self.items()
        ]


class _Classifier:
    """Assigns lattices of one window to double cosets, exploring lazily."""

    def __init__(self, window: LatticeWindow, memo: OrbitMemo | None) -> None:
        self.window = window
        self.memo = memo
        self.index: dict[bytes, DoubleCoset] = {}

    def classify(self, x: Mat2) -> DoubleCoset:
        key = self.window.key(x)
        hit = self.index.get(key)
        if hit is None:
            hit = double_coset(x, self.window, self.memo)
            for k in hit.lattices:
                self.index[k] = hit
        return hit


def convolve(
    h1: HeckeElement, h2: HeckeElement, memo: OrbitMemo | None = orbit_memo
) -> HeckeElement:
    """Product of two elements of the local Hecke algebra.

    Raises:
        PrecisionExhausted: Below the truncation bound of the factors, or if
            a product is not known to its window top.
    """
    check_truncation(h1, h2)
    out: dict[DoubleCoset, Fraction] = {}
    classifiers: dict[tuple[int, int], _Classifier] = {}
    for sa, wa in h1.items():
        reps_a = left_coset_reps(sa)
        for sb, wb in h2.items():
            reps_b = left_coset_reps(sb)
            window = product_window(sa.window, sb.window)
            clf = classifiers.setdefault(
                (window.lo, window.hi), _Classifier(window, memo)
            )
            counts: dict[DoubleCoset, int] = {}
            for a in reps_a:
                for b in reps_b:
                    u = clf.classify(a * b)
                    counts[u] = counts.get(u, 0) + 1
            scale = wa * wb / (len(reps_a) * len(reps_b))
            for u, n in counts.items():
                out[u] = out.get(u, Fraction(0)) + scale * n
            logger.debug("%s * %s -> %d cosets", sa.label(), sb.label(), len(counts))
    return HeckeElement(out)


def verify_theta_invariance(s: DoubleCoset) -> bool:
    """Whether the transpose maps the double coset to itself."""
    return s.window.key(s.representative.theta()) in s.lattices
