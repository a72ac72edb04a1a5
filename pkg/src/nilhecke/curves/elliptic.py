"""Elliptic curves ``y^2 = x^3 + a x + b`` over a prime field, q odd."""

from __future__ import annotations

import numpy as np

from nilhecke.curves.base import Curve
from nilhecke.curves.base import CurveFunction
from nilhecke.curves.base import DivisorBar
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.curves.base import RRSpace
from nilhecke.errors import CharacteristicTwo
from nilhecke.errors import ConfigError
from nilhecke.rings.field import get_field
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.linalg import left_nullspace_mod_p


ORIGIN = Place("infinity", 0, 0)


class EllipticCurve(Curve):
    """Weierstrass model with origin O at infinity.

    Local parameters: ``x - x0`` at affine points with ``y0 != 0``, ``y`` at
    the 2-torsion points, and ``x/y`` at O. The fixed differential is the
    invariant differential ``dx / (2y)``, so the canonical divisor is 0.
    """

    genus = 1
    kind = "elliptic"

    def __init__(self, q: int, a: int, b: int) -> None:
        super().__init__(q)
        if q == 2:
            msg = "elliptic backend needs odd characteristic"
            raise CharacteristicTwo(msg)
        self.a = a % q
        self.b = b % q
        if (4 * self.a**3 + 27 * self.b**2) % q == 0:
            msg = f"y^2 = x^3 + {a}x + {b} is singular over F_{q}"
            raise ConfigError(msg)
        self._points = self._enumerate_points()

    # points and group law

    def rhs(self, x: int) -> int:
        return (x**3 + self.a * x + self.b) % self.q

    def _enumerate_points(self) -> list[Place]:
        roots: dict[int, list[int]] = {}
        for y in range(self.q):
            roots.setdefault(y * y % self.q, []).append(y)
        pts = [
            Place("affine", x, y)
            for x in range(self.q)
            for y in sorted(roots.get(self.rhs(x), []))
        ]
        return sorted(pts) + [ORIGIN]

    def places(self) -> list[Place]:
        return list(self._points)

    def aux_place(self) -> Place:
        return ORIGIN

    def neg(self, pt: Place) -> Place:
        if pt.is_infinite:
            return pt
        return Place("affine", pt.x, (-(pt.y or 0)) % self.q)

    def add(self, p1: Place, p2: Place) -> Place:
        """Chord-and-tangent addition."""
        q = self.q
        if p1.is_infinite:
            return p2
        if p2.is_infinite:
            return p1
        x1, y1, x2, y2 = p1.x, p1.y or 0, p2.x, p2.y or 0
        if x1 == x2 and (y1 + y2) % q == 0:
            return ORIGIN
        if (x1, y1) == (x2, y2):
            m = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, q) % q
        else:
            m = (y2 - y1) * pow(x2 - x1, -1, q) % q
        x3 = (m * m - x1 - x2) % q
        y3 = (m * (x1 - x3) - y1) % q
        return Place("affine", x3, y3)

    def multiply(self, pt: Place, n: int) -> Place:
        if n < 0:
            return self.multiply(self.neg(pt), -n)
        out, base = ORIGIN, pt
        while n:
            if n & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            n >>= 1
        return out

    def count_points(self, m: int = 1) -> int:
        """``|E(F_{q^m})|``, by counting square values of the cubic."""
        if m == 1:
            return len(self._points)
        f = get_field(self.q, m)
        total = 1
        for x in f.elements():
            v = f.add(f.add(f.mul(f.mul(x, x), x), f.mul(self.a, x)), self.b)
            total += 1 if v == 0 else (2 if f.is_square(v) else 0)
        return total

    # local expansions

    def _local_xy(self, place: Place, prec: int) -> tuple[LaurentSeries, LaurentSeries]:
        f = self.field
        if place.is_infinite:
            return self._expand_origin(prec)
        x0, y0 = place.x, place.y or 0
        if y0:
            x = LaurentSeries.from_coeffs(f, [x0, 1], 0, prec)
            cubic = [self.rhs(x0), (3 * x0 * x0 + self.a) % self.q, 3 * x0 % self.q, 1]
            return x, self._sqrt_series(cubic, y0, prec)
        return self._expand_two_torsion(x0, prec), LaurentSeries.monomial(f, 1, 1, prec)

    def _sqrt_series(self, cubic: list[int], y0: int, prec: int) -> LaurentSeries:
        """Power series y with ``y^2 = cubic(t)`` and ``y(0) = y0``."""
        q = self.q
        ys = [y0]
        inv = pow(2 * y0, -1, q)
        for k in range(1, max(prec, 1)):
            fk = cubic[k] if k < len(cubic) else 0
            acc = sum(ys[i] * ys[k - i] for i in range(1, k))
            ys.append((fk - acc) * inv % q)
        return LaurentSeries.from_coeffs(self.field, ys, 0, prec)

    def _expand_two_torsion(self, x0: int, prec: int) -> LaurentSeries:
        """x as a series in t = y at a point with y = 0."""
        f = self.field
        c1 = (3 * x0 * x0 + self.a) % self.q
        c2 = 3 * x0 % self.q
        inv = pow(c1, -1, self.q)
        t2 = LaurentSeries.monomial(f, 1, 2, prec)
        u = LaurentSeries.zero(f, prec)
        for _ in range(prec + 1):
            u2 = u * u
            u = (t2 - u2.scale(c2) - u2 * u).scale(inv)
        return u + LaurentSeries.constant(f, x0, prec)

    def _expand_origin(self, prec: int) -> tuple[LaurentSeries, LaurentSeries]:
        f = self.field
        work = prec + 12
        z = LaurentSeries.monomial(f, 1, 1, work)
        z3 = z * z * z
        w = z3
        for _ in range(work + 1):
            w2 = w * w
            w = z3 + (z * w2).scale(self.a) + (w2 * w).scale(self.b)
        inv = w.inverse()
        return z * inv, inv

    def omega_expansion(self, place: Place, prec: int) -> LaurentSeries:
        """Expansion of ``dx / (2y)`` in the local parameter."""
        f = self.field
        work = prec + 12
        x, y = self.local_xy(place, work)
        if place.is_infinite:
            out = x.derivative() * (y.scale(2)).inverse()
        elif place.y:
            out = (y.scale(2)).inverse()
        else:
            out = (x * x).scale(3) + LaurentSeries.constant(f, self.a, work)
            out = out.inverse()
        return out.truncate(prec)

    def canonical_divisor(self) -> DivisorBar:
        return DivisorBar()

    # Riemann-Roch

    def _order_of_x_minus(self, u: int, pt: Place) -> int:
        if pt.is_infinite or pt.x != u:
            return 0
        return 1 if pt.y else 2

    def rr_basis(self, divisor: DivisorBar) -> RRSpace:
        """Basis of L(E) as ``g / h``.

        h is the product of ``(x - x_P)^(e_P)`` over affine P with e_P > 0;
        g runs over L(M O) (monomials ``x^i`` and ``x^i y`` by pole order)
        subject to the vanishing conditions ``ord_Q g >= ord_Q h - e_Q``.
        """
        p = self.q
        ks: dict[int, int] = {}
        for pt, m in divisor.items():
            if not pt.is_infinite and m > 0:
                ks[pt.x] = ks.get(pt.x, 0) + m
        big_m = divisor[ORIGIN] + 2 * sum(ks.values())
        if big_m < 0:
            return RRSpace(divisor, [])
        monos = [("x", i) for i in range(big_m // 2 + 1)]
        monos += [("y", i) for i in range((big_m - 3) // 2 + 1) if 2 * i + 3 <= big_m]
        monos.sort(key=lambda m: 2 * m[1] + (3 if m[0] == "y" else 0))

        conditions: list[tuple[Place, int]] = []
        for pt in self.places():
            if pt.is_infinite:
                continue
            need = sum(k * self._order_of_x_minus(u, pt) for u, k in ks.items())
            need -= divisor[pt]
            if need > 0:
                conditions.append((pt, need))

        cols = sum(n for _, n in conditions)
        mat = np.zeros((len(monos), cols), dtype=np.int64)
        for i, (kind, e) in enumerate(monos):
            func = _monomial(kind, e)
            col = 0
            for pt, need in conditions:
                mat[i, col : col + need] = self.expand(func, pt, need).window(0, need)
                col += need
        combos = left_nullspace_mod_p(mat, p)
        poles = tuple(sorted(ks.items()))
        basis = []
        for c in combos:
            a_part = [0] * (big_m // 2 + 1)
            b_part = [0] * (big_m // 2 + 1)
            for coef, (kind, e) in zip(c, monos):
                if coef:
                    (a_part if kind == "x" else b_part)[e] = int(coef) % p
            basis.append(CurveFunction(_trim(a_part), _trim(b_part), poles))
        return RRSpace(divisor, basis)

    # Picard group

    def pic_zero(self) -> list[Place | None]:
        return list(self._points)

    def pic_add(self, a: PicLabel, b: PicLabel) -> PicLabel:
        return PicLabel(a.degree + b.degree, self.add(a.point or ORIGIN, b.point or ORIGIN))

    def line_bundle_divisor(self, label: PicLabel) -> DivisorBar:
        pt = label.point or ORIGIN
        if pt.is_infinite:
            return DivisorBar.point(ORIGIN, label.degree)
        return DivisorBar.point(pt) + DivisorBar.point(ORIGIN, label.degree - 1)

    def divisor_class(self, divisor: DivisorBar) -> PicLabel:
        total = ORIGIN
        for pt, m in divisor.items():
            total = self.add(total, self.multiply(pt, m))
        return PicLabel(divisor.degree(), total)

    def spec(self) -> dict[str, object]:
        return {"type": "elliptic", "q": self.q, "a": self.a, "b": self.b}

    def __repr__(self) -> str:
        return f"EllipticCurve(y^2 = x^3 + {self.a}x + {self.b} over F_{self.q})"


def _monomial(kind: str, e: int) -> CurveFunction:
    xs = tuple([0] * e + [1])
    if kind == "x":
        return CurveFunction(xs)
    return CurveFunction((), xs)


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return tuple(coeffs)
