"""Places, divisors, rational functions and the curve backend interface.

Global computations run over a prime field F_q and use rational places
only; every place then has residue degree 1 and a local parameter t with
completed local ring F_q[[t]]. Prime powers and residue degrees above 1
are handled by the local Hecke algebra alone; curve files asking for them
are rejected with ConfigError.
"""

from __future__ import annotations

import logging
from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from typing import Iterable
from typing import Iterator
from typing import Mapping
from typing import NamedTuple

from nilhecke.errors import ConfigError
from nilhecke.errors import PrecisionExhausted
from nilhecke.rings.field import FiniteField
from nilhecke.rings.field import get_field
from nilhecke.rings.field import is_prime
from nilhecke.rings.laurent import LaurentSeries


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Place:
    """A rational point of the reduced curve.

    Attributes:
        kind: ``"affine"`` or ``"infinity"`` (the point at infinity of P^1,
            or the origin O of an elliptic curve).
        x: x-coordinate of an affine point.
        y: y-coordinate on an elliptic curve; ``None`` on P^1.
    """

    kind: str
    x: int = 0
    y: int | None = None
    residue_degree: int = 1

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    def sort_key(self) -> tuple[int, int, int]:
        if self.is_infinite:
            return (1, 0, 0)
        return (0, self.x, -1 if self.y is None else self.y)

    def __lt__(self, other: Place) -> bool:
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        if self.is_infinite:
            return "inf" if self.y is None else "O"
        if self.y is None:
            return str(self.x)
        return f"{self.x},{self.y}"

    def __repr__(self) -> str:
        return f"Place({self.label()})"


class DivisorBar:
    """A divisor on the reduced curve: finite map from places to integers."""

    __slots__ = ("_mult",)

    def __init__(self, mult: Mapping[Place, int] | None = None) -> None:
        self._mult = {p: m for p, m in (mult or {}).items() if m}

    @classmethod
    def point(cls, place: Place, m: int = 1) -> DivisorBar:
        return cls({place: m})

    def __getitem__(self, place: Place) -> int:
        return self._mult.get(place, 0)

    def items(self) -> list[tuple[Place, int]]:
        return sorted(self._mult.items())

    def support(self) -> list[Place]:
        return sorted(self._mult)

    def degree(self) -> int:
        return sum(m * p.residue_degree for p, m in self._mult.items())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self._mult.values())

    def __add__(self, other: DivisorBar) -> DivisorBar:
        out = dict(self._mult)
        for p, m in other._mult.items():
            out[p] = out.get(p, 0) + m
        return DivisorBar(out)

    def __neg__(self) -> DivisorBar:
        return DivisorBar({p: -m for p, m in self._mult.items()})

    def __sub__(self, other: DivisorBar) -> DivisorBar:
        return self + (-other)

    def __mul__(self, k: int) -> DivisorBar:
        return DivisorBar({p: k * m for p, m in self._mult.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DivisorBar) and self._mult == other._mult

    def __hash__(self) -> int:
        return hash(frozenset(self._mult.items()))

    def __iter__(self) -> Iterator[Place]:
        return iter(self.support())

    def label(self) -> str:
        if not self._mult:
            return "0"
        return " + ".join(f"{m}*[{p.label()}]" for p, m in self.items())

    def __repr__(self) -> str:
        return f"DivisorBar({self.label()})"


@dataclass(frozen=True)
class CurveFunction:
    """The rational function ``(A(x) + B(x) y) / prod (x - u)^k``.

    Polynomials are coefficient tuples, lowest degree first; ``poles`` lists
    ``(u, k)`` pairs. On P^1 the y-part is always zero.
    """

    a: tuple[int, ...]
    b: tuple[int, ...] = ()
    poles: tuple[tuple[int, int], ...] = ()

    @classmethod
    def constant(cls, c: int) -> CurveFunction:
        return cls((c,))

    def label(self) -> str:
        def poly(coeffs: tuple[int, ...]) -> str:
            terms = [
                f"{c}" if i == 0 else (f"{c}*x^{i}" if c != 1 else f"x^{i}")
                for i, c in enumerate(coeffs)
                if c
            ]
            return " + ".join(terms) or "0"

        num = poly(self.a)
        if any(self.b):
            num = f"({num}) + ({poly(self.b)})*y"
        if not self.poles:
            return num
        den = "*".join(f"(x-{u})^{k}" for u, k in self.poles)
        return f"({num})/({den})"


class PicLabel(NamedTuple):
    """A class in Pic of the reduced curve: degree and Pic^0 point.

    ``point`` is ``None`` on P^1; on an elliptic curve the class is that of
    the divisor ``point + (degree - 1) O``.
    """

    degree: int
    point: Place | None = None

    def label(self) -> str:
        if self.point is None:
            return f"O({self.degree})"
        return f"O({self.degree};{self.point.label()})"


class RRSpace(NamedTuple):
    """Riemann-Roch space L(E) = H^0(O(E)) with an explicit basis."""

    divisor: DivisorBar
    basis: list[CurveFunction]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _horner(
    coeffs: tuple[int, ...], x: LaurentSeries, field: FiniteField, prec: int
) -> LaurentSeries:
    acc = LaurentSeries.zero(field, prec)
    for c in reversed(coeffs):
        acc = acc * x + LaurentSeries.constant(field, c, prec)
    return acc


class Curve(ABC):
    """A smooth projective curve over a prime field with rational places."""

    genus: int = 0
    kind: str = ""

    def __init__(self, q: int) -> None:
        if not is_prime(q):
            msg = f"global backends need a prime field, got q={q}"
            raise ConfigError(msg)
        self.q = q
        self.field: FiniteField = get_field(q)
        self._xy_cache: dict[tuple[Place, int], tuple[LaurentSeries, LaurentSeries]] = {}

    # backend data

    @abstractmethod
    def places(self) -> list[Place]:
        """All rational places, sorted."""

    @abstractmethod
    def aux_place(self) -> Place:
        """The place used to make auxiliary divisors ample."""

    @abstractmethod
    def _local_xy(self, place: Place, prec: int) -> tuple[LaurentSeries, LaurentSeries]:
        """Expansions of x and y in the local parameter, to precision prec."""

    @abstractmethod
    def omega_expansion(self, place: Place, prec: int) -> LaurentSeries:
        """The fixed differential omega_0 as ``w(t) dt`` near the place."""

    @abstractmethod
    def canonical_divisor(self) -> DivisorBar:
        """The divisor of omega_0."""

    @abstractmethod
    def rr_basis(self, divisor: DivisorBar) -> RRSpace:
        """Basis of L(E)."""

    @abstractmethod
    def pic_zero(self) -> list[Place | None]:
        """Representatives of Pic^0 (points, or ``None`` on P^1)."""

    @abstractmethod
    def pic_add(self, a: PicLabel, b: PicLabel) -> PicLabel:
        """Group law on Pic."""

    @abstractmethod
    def line_bundle_divisor(self, label: PicLabel) -> DivisorBar:
        """A divisor in the class ``label``."""

    @abstractmethod
    def divisor_class(self, divisor: DivisorBar) -> PicLabel:
        """The class of a divisor."""

    @abstractmethod
    def spec(self) -> dict[str, object]:
        """Curve specification, as in a curve file."""

    # shared machinery

    def place(self, label: str) -> Place:
        """Look up a place by its coordinate string.

        Raises:
            ConfigError: If no rational place has that label.
        """
        for p in self.places():
            if p.label() == label.replace(" ", ""):
                return p
        msg = f"no rational place {label!r} on {self!r}"
        raise ConfigError(msg)

    def pic_neg(self, a: PicLabel) -> PicLabel:
        zero = self.divisor_class(DivisorBar())
        for b in self.pic_enumerate([-a.degree]):
            if self.pic_add(a, b) == zero:
                return b
        msg = f"no inverse found for {a.label()}"
        raise ArithmeticError(msg)

    def pic_enumerate(self, degrees: Iterable[int]) -> list[PicLabel]:
        """Every class of Pic in the given degrees."""
        return [PicLabel(d, pt) for d in degrees for pt in self.pic_zero()]

    def local_xy(self, place: Place, prec: int) -> tuple[LaurentSeries, LaurentSeries]:
        key = (place, prec)
        hit = self._xy_cache.get(key)
        if hit is None:
            hit = self._local_xy(place, prec)
            self._xy_cache[key] = hit
        return hit

    def expand(self, func: CurveFunction, place: Place, prec: int) -> LaurentSeries:
        """Laurent expansion of ``func`` at ``place``, known to ``t^prec``.

        Raises:
            PrecisionExhausted: If no working precision reaches ``prec``.
        """
        extra = 8 + 2 * sum(k for _, k in func.poles) + 2 * (len(func.a) + len(func.b))
        for _ in range(6):
            work = prec + extra
            value = self._evaluate(func, place, work)
            if value.prec >= prec:
                return value.truncate(prec)
            extra *= 2
        msg = f"expansion of {func.label()} at {place.label()} stuck below t^{prec}"
        raise PrecisionExhausted(msg)

    def _evaluate(self, func: CurveFunction, place: Place, work: int) -> LaurentSeries:
        f = self.field
        x, y = self.local_xy(place, work)
        value = _horner(func.a, x, f, work)
        if any(func.b):
            value = value + _horner(func.b, x, f, work) * y
        for u, k in func.poles:
            d = (x - LaurentSeries.constant(f, u, work)).inverse()
            for _ in range(k):
                value = value * d
        return value

    def residue(self, series: LaurentSeries) -> int:
        """Coefficient of ``t^-1``."""
        return series.coefficient(-1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(q={self.q})"
