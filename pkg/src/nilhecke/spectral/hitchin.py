"""Hitchin fibers over a constant non-square on an elliptic curve.

For a constant non-square alpha the spectral curve ``x^2 = alpha`` is the
base change of E to ``F_{q^2}``, viewed over ``F_q``. The fiber is a torsor
under ``Pic(C_alpha) / pi^* Pic(E)``, taken here as ``Z/2 x E(F_{q^2}) / E(F_q)``
of order ``2 |E(F_{q^2})| / |E(F_q)|``. Cosets are named by their least
point. Characters are computed by brute force and take values in
``Q(zeta_N)``, N the exponent of the group.
"""

from __future__ import annotations

import itertools
import logging
from functools import reduce
from typing import Any
from typing import NamedTuple

from nilhecke.curves.base import Curve
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.errors import AlphaIsSquare
from nilhecke.errors import CharacteristicTwo
from nilhecke.errors import DimensionMismatch
from nilhecke.errors import UnsupportedGenus
from nilhecke.rings.cyclotomic import CycScalar
from nilhecke.rings.cyclotomic import get_cyclotomic
from nilhecke.rings.cyclotomic import lcm
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import get_field


logger = logging.getLogger(__name__)

# affine point over F_{q^2} as field codes; None is the origin
Point = tuple[int, int] | None

# (parity, least point of the coset)
FiberElement = tuple[int, Point]


def point_key(pt: Point) -> tuple[int, int]:
    return (-1, -1) if pt is None else pt


class QuadraticBaseChange:
    """An elliptic curve over ``F_q`` read over ``F_{q^2}``, with its q-Frobenius."""

    def __init__(self, curve: EllipticCurve) -> None:
        self.curve = curve
        self.field: FiniteField = get_field(curve.q, 2)
        f = self.field
        self.a = f.from_int(curve.a)
        self.b = f.from_int(curve.b)

    def rhs(self, x: int) -> int:
        f = self.field
        return f.add(f.add(f.pow(x, 3), f.mul(self.a, x)), self.b)

    def points(self) -> list[Point]:
        f = self.field
        roots: dict[int, list[int]] = {}
        for y in f.elements():
            roots.setdefault(f.mul(y, y), []).append(y)
        out: list[Point] = [None]
        for x in f.elements():
            out.extend((x, y) for y in sorted(roots.get(self.rhs(x), [])))
        return out

    def neg(self, pt: Point) -> Point:
        if pt is None:
            return None
        return (pt[0], self.field.neg(pt[1]))

    def add(self, p1: Point, p2: Point) -> Point:
        f = self.field
        if p1 is None:
            return p2
        if p2 is None:
            return p1
        (x1, y1), (x2, y2) = p1, p2
        if x1 == x2 and f.add(y1, y2) == 0:
            return None
        if p1 == p2:
            num = f.add(f.mul(f.from_int(3), f.mul(x1, x1)), self.a)
            m = f.div(num, f.add(y1, y1))
        else:
            m = f.div(f.sub(y2, y1), f.sub(x2, x1))
        x3 = f.sub(f.sub(f.mul(m, m), x1), x2)
        y3 = f.sub(f.mul(m, f.sub(x1, x3)), y1)
        return (x3, y3)

    def frobenius(self, pt: Point) -> Point:
        if pt is None:
            return None
        q = self.curve.q
        return (self.field.pow(pt[0], q), self.field.pow(pt[1], q))

    def rational_points(self) -> list[Point]:
        """``E(F_q)`` inside ``E(F_{q^2})``: the Frobenius-fixed points."""
        return [pt for pt in self.points() if self.frobenius(pt) == pt]


class CosetGroup:
    """``E(F_{q^2}) / E(F_q)`` with every coset named by its least point."""

    def __init__(self, ext: QuadraticBaseChange) -> None:
        self.ext = ext
        self.rational = ext.rational_points()
        self.reps: dict[Point, Point] = {}
        for pt in ext.points():
            if pt in self.reps:
                continue
            coset = [ext.add(pt, r) for r in self.rational]
            least = min(coset, key=point_key)
            for x in coset:
                self.reps[x] = least
        self.cosets = sorted(set(self.reps.values()), key=point_key)

    def add(self, x: Point, y: Point) -> Point:
        return self.reps[self.ext.add(x, y)]


class SpectralFiberData(NamedTuple):
    """The group of a smooth Hitchin fiber and its character table.

    ``characters[i][j]`` is the value of the i-th character on ``elements[j]``.
    """

    alpha: int
    points: int
    rational: int
    cosets: list[Point]
    elements: list[FiberElement]
    exponent: int
    characters: list[list[CycScalar]]

    @property
    def order(self) -> int:
        return len(self.elements)

    def orthogonal(self) -> bool:
        """Rows of the character table are orthogonal with norm ``|G|``."""
        n = self.order
        zero = get_cyclotomic(self.exponent).zero()
        for i, a in enumerate(self.characters):
            for j, b in enumerate(self.characters):
                total = sum((x * y.conj() for x, y in zip(a, b)), zero)
                if total != (n if i == j else 0):
                    return False
        return True

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "points_over_quadratic": self.points,
            "points_over_base": self.rational,
            "cosets": len(self.cosets),
            "group_order": self.order,
            "exponent": self.exponent,
            "orthogonal": self.orthogonal(),
        }


def spectral_group_order(curve: EllipticCurve) -> int:
    """``2 |E(F_{q^2})| / |E(F_q)|``."""
    return 2 * curve.count_points(2) // curve.count_points(1)


def check_alpha(curve: Curve, alpha: int) -> int:
    """Validate a constant spectral parameter.

    Raises:
        CharacteristicTwo: If q is even.
        AlphaIsSquare: If alpha is zero or a square in ``F_q``.
    """
    field = curve.field
    if field.p == 2:
        msg = "spectral curves need odd characteristic"
        raise CharacteristicTwo(msg)
    a = alpha % curve.q
    if not a or field.is_square(a):
        msg = f"alpha = {alpha} is a square in F_{curve.q}; the spectral curve splits"
        raise AlphaIsSquare(msg)
    return a


def _element_order(add: Any, identity: Any, g: Any) -> int:
    n, x = 1, g
    while x != identity:
        x = add(x, g)
        n += 1
    return n


def character_table(
    elements: list[Any], add: Any, identity: Any
) -> tuple[int, list[list[CycScalar]]]:
    """All characters of a finite abelian group given by its elements and law.

    Characters are homomorphisms into ``Z/N``, N the exponent, found by
    assigning images to a generating set and keeping the consistent ones.
    """
    orders = {g: _element_order(add, identity, g) for g in elements}
    n = reduce(lcm, orders.values(), 1)
    gens: list[Any] = []
    span = {identity}
    for g in elements:
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        span = set()
        for x in frontier:
            y = x
            for _ in range(orders[g]):
                span.add(y)
                y = add(y, g)
    words: dict[Any, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(orders[g]) for g in gens)):
        x = identity
        for g, e in zip(gens, exps):
            for _ in range(e):
                x = add(x, g)
        words.setdefault(x, exps)
    field = get_cyclotomic(n)
    table: list[list[CycScalar]] = []
    seen: set[tuple[int, ...]] = set()
    for images in itertools.product(*(range(0, n, n // orders[g]) for g in gens)):
        values = {x: sum(k * e for k, e in zip(images, w)) % n for x, w in words.items()}
        if any(
            values[add(x, y)] != (values[x] + values[y]) % n
            for x in elements
            for y in elements
        ):
            continue
        key = tuple(values[x] for x in elements)
        if key not in seen:
            seen.add(key)
            table.append([field.zeta(k) for k in key])
    return n, table


def hitchin_fiber(curve: Curve, alpha: int) -> SpectralFiberData:
    """The Hitchin fiber group over the constant non-square alpha.

    Raises:
        UnsupportedGenus: Off the elliptic backend.
        CharacteristicTwo: If q is even.
        AlphaIsSquare: If alpha is zero or a square.
        DimensionMismatch: If the group order disagrees with the point counts.
    """
    if not isinstance(curve, EllipticCurve):
        msg = f"Hitchin fibers are modelled at genus 1 only, not genus {curve.genus}"
        raise UnsupportedGenus(msg)
    a = check_alpha(curve, alpha)
    ext = QuadraticBaseChange(curve)
    group = CosetGroup(ext)
    elements: list[FiberElement] = [(s, x) for s in (0, 1) for x in group.cosets]
    expected = spectral_group_order(curve)
    if len(elements) != expected:
        msg = f"fiber group has order {len(elements)}, point counts give {expected}"
        raise DimensionMismatch(msg)

    def add(x: FiberElement, y: FiberElement) -> FiberElement:
        return (x[0] + y[0]) % 2, group.add(x[1], y[1])

    exponent, table = character_table(elements, add, (0, None))
    logger.info(
        "Hitchin fiber over alpha=%d: |E(F_q^2)|=%d, |E(F_q)|=%d, order %d",
        a,
        len(ext.points()),
        len(group.rational),
        len(elements),
    )
    return SpectralFiberData(
        a, len(ext.points()), len(group.rational), group.cosets, elements, exponent, table
    )
