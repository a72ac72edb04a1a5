"""The modular description of ``T'_c`` and its groupoid weights.

``T'_c f(V') = sum f(V)`` over subsheaves ``V subset V'`` with quotient
``O_c``. Locally these are the sublattices ``g M`` for the ``q^2 + q``
modules M listed by :meth:`SimpleDivisor.sublattices`.

Counting injections ``V -> V'`` with cokernel ``O_c`` two ways gives

    T'_c[V', V] |Aut V| = T_c[V, V'] |Aut V'|,

the pushforward weight ``|Aut(target)| / |Aut(source)|`` of the Hecke
correspondence.
"""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from typing import Any
from typing import NamedTuple

from nilhecke.bundles.window import BundleClass
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.errors import OutOfWindow
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.operators import COLUMN_MARGIN
from nilhecke.hecke.operators import HeckeMatrix
from nilhecke.hecke.operators import hecke_matrix
from nilhecke.hecke.operators import hecke_matrix_prime


logger = logging.getLogger(__name__)


class ModularReport(NamedTuple):
    """Agreement of the sublattice count with the coset route, and of the groupoid weights."""

    divisor: str
    classes: list[str]
    routes_agree: bool
    weights_agree: bool
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return self.routes_agree and self.weights_agree

    def to_dict(self) -> dict[str, Any]:
        return self._asdict() | {"ok": self.ok}


def subsheaf_counts(
    moduli: Moduli, c: SimpleDivisor, cls: BundleClass, gap: int
) -> Counter[BundleClass]:
    """Number of subsheaves of V' isomorphic to each V, by explicit sublattices."""
    g = moduli.representative(cls)
    out: Counter[BundleClass] = Counter()
    for m in c.sublattices():
        out[moduli.canonicalize(g.right(c.place, m), gap)] += 1
    return out


def verify_modular_route(
    moduli: Moduli, c: SimpleDivisor, rows: Window, limit: int = 5
) -> ModularReport:
    """Compare both routes for ``T'_c`` and the weight identity on small classes.

    Args:
        moduli: Classifier.
        c: The simple divisor.
        rows: Window of the bundles ``V'``.
        limit: Number of interior classes checked.
    """
    tp = hecke_matrix_prime(moduli, c, rows)
    gap = rows.spec.gap + COLUMN_MARGIN
    chosen = tp.interior_rows()[:limit]
    back: HeckeMatrix = hecke_matrix(moduli, c, tp.cols)
    routes, weights = True, True
    bad: list[str] = []
    for i in chosen:
        v_prime = rows[i]
        try:
            counts = subsheaf_counts(moduli, c, v_prime, gap)
        except OutOfWindow:
            routes = False
            bad.append(f"route {v_prime.label()}: sublattice outside the window")
            continue
        if counts != tp.targets[i]:
            routes = False
            bad.append(f"route {v_prime.label()}")
        aut_prime = moduli.aut_order(v_prime)
        for v, m in counts.items():
            j = tp.cols.position(v)
            if not back.interior[j]:
                continue
            up = back.targets[j][v_prime]
            lhs = Fraction(m * moduli.aut_order(v))
            rhs = Fraction(up * aut_prime)
            if lhs != rhs:
                weights = False
                bad.append(f"weight {v_prime.label()} <- {v.label()}: {lhs} != {rhs}")
    logger.info("modular route %s on %d classes: %d mismatches", c.label(), len(chosen), len(bad))
    return ModularReport(
        c.label(), [rows[i].label() for i in chosen], routes, weights, bad
    )
