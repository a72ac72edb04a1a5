"""Orbit projectors on window functions, fiber by fiber.

Over a reduced bundle V-bar the classes of a window are orbits of
``Aut(V-bar)`` on a slice of ``H^1(End V-bar)``, whose coordinates are
Serre pairings against a basis of Higgs fields ``H^0(End V-bar (x) omega)``.
A frequency ``lambda`` is the Higgs field ``phi = sum lambda_j Phi_j`` and
acts through ``psi(lambda . c)``. Frequencies are bucketed by the orbit
invariant of the trace-free part ``phi_0``:

* ``zero``: ``phi_0 = 0``, the functions pulled back from ``Bun(C-bar)``;
* ``nilpotent``: ``phi_0 != 0`` with ``det phi_0 = 0``;
* ``semisimple(d)``: ``d = -det phi_0 != 0``.

Adding a scalar Higgs field only multiplies a character by a constant on
the slice, so the projectors keep every function on its slice. The
projection of ``f`` is ``q^-h sum_{c'} f(c') sum_{lambda in B} psi(lambda . (c - c'))``;
its coefficients are tabulated once per frame and bucket as integer counts
of ``lambda . (c - c')`` in each residue class, so values stay exact in
``Q(zeta_p)``. Buckets stable under ``lambda -> a lambda`` give rational values.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import cached_property
from typing import Collection
from typing import NamedTuple
from typing import Sequence

import numpy as np

from nilhecke.bundles.frames import Frame
from nilhecke.bundles.frames import FrameData
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.errors import CharacteristicTwo
from nilhecke.rings.cyclotomic import CycScalar
from nilhecke.rings.cyclotomic import get_cyclotomic
from nilhecke.rings.field import FiniteField
from nilhecke.rings.linalg import all_vectors
from nilhecke.rings.linalg import exact_rank


logger = logging.getLogger(__name__)

# exponents read beyond the symmetric window when testing phi_0 = 0
EXPANSION_SPAN = 24

# frequencies paired against a block of fiber points at once
CHUNK = 4096


class OrbitKey(NamedTuple):
    """Bucket of a Higgs frequency: ``zero``, ``nilpotent`` or ``semisimple`` with d."""

    kind: str
    d: int = 0

    def label(self) -> str:
        return f"semisimple({self.d})" if self.kind == "semisimple" else self.kind

    def is_split(self, field: FiniteField) -> bool:
        """d is a nonzero square: the orbit meets a split torus."""
        return self.kind == "semisimple" and field.is_square(self.d)

    def sort_key(self) -> tuple[int, int]:
        return ({"zero": 0, "nilpotent": 1}.get(self.kind, 2), self.d)


ZERO = OrbitKey("zero")
NILPOTENT = OrbitKey("nilpotent")


def galois_buckets(field: FiniteField) -> dict[str, list[OrbitKey]]:
    """Unions of buckets stable under ``lambda -> a lambda``: their projectors are rational."""
    units = list(field.units())
    return {
        "zero": [ZERO],
        "nilpotent": [NILPOTENT],
        "split": [OrbitKey("semisimple", d) for d in units if field.is_square(d)],
        "nonsplit": [OrbitKey("semisimple", d) for d in units if not field.is_square(d)],
    }


def square_class(field: FiniteField, d: int) -> list[OrbitKey]:
    """The semisimple buckets ``a^2 d``, the smallest rational union containing d."""
    return sorted(
        {OrbitKey("semisimple", field.mul(field.mul(a, a), d)) for a in field.units()},
        key=OrbitKey.sort_key,
    )


def _higgs_coefficients(data: FrameData) -> tuple[np.ndarray, int]:
    """Coefficients ``[j, entry, k]`` of the Higgs basis at the auxiliary place.

    Exponents run from ``low`` (the deepest pole, at most 0) to at least ``-low``.
    """
    dual = data.dual
    place = data.curve.aux_place()
    mats = dual.basis_at(place, dual.working_precision(place, 0))
    orders = [e.red.order() for m in mats for e in m.entries() if not e.red.is_zero()]
    low = min([0, *orders])
    high = max(-low, low + EXPANSION_SPAN)
    mats = dual.basis_at(place, high + 1)
    coeffs = np.array(
        [[e.red.window(low, high + 1) for e in m.entries()] for m in mats], dtype=np.int64
    )
    return coeffs.reshape(len(mats), 4, high - low + 1), low


class FiberSpectrum:
    """Orbit keys of every frequency of one frame, in coordinate-index order.

    Raises:
        CharacteristicTwo: If p = 2.
    """

    def __init__(self, data: FrameData) -> None:
        p = data.p
        if p == 2:
            msg = "orbit projectors need odd characteristic"
            raise CharacteristicTwo(msg)
        self.data = data
        self.field = data.curve.field
        self.freqs = all_vectors(p, data.h)
        n = len(self.freqs)
        self.zero = np.ones(n, dtype=bool)
        self.d = np.zeros(n, dtype=np.int64)
        if not data.h:
            return
        coeffs, low = _higgs_coefficients(data)
        e = np.einsum("nj,jek->nek", self.freqs, coeffs) % p
        a, b, c, dd = e[:, 0], e[:, 1], e[:, 2], e[:, 3]
        u = (a - dd) % p
        self.zero = ~(u.any(axis=1) | b.any(axis=1) | c.any(axis=1))
        sym = slice(0, -2 * low + 1)
        # constant terms of u^2 / 4 + b c, i.e. -det phi_0
        uu = (u[:, sym] * u[:, sym][:, ::-1]).sum(axis=1)
        bc = (b[:, sym] * c[:, sym][:, ::-1]).sum(axis=1)
        self.d = (uu * pow(4, p - 2, p) + bc) % p

    def key(self, i: int) -> OrbitKey:
        if self.zero[i]:
            return ZERO
        if not self.d[i]:
            return NILPOTENT
        return OrbitKey("semisimple", int(self.d[i]))

    def keys(self) -> set[OrbitKey]:
        out = set()
        if self.zero.any():
            out.add(ZERO)
        nz = ~self.zero
        if (nz & (self.d == 0)).any():
            out.add(NILPOTENT)
        out |= {OrbitKey("semisimple", int(d)) for d in np.unique(self.d[nz]) if d}
        return out

    def mask(self, keys: Collection[OrbitKey]) -> np.ndarray:
        out = np.zeros(len(self.freqs), dtype=bool)
        for k in keys:
            if k.kind == "zero":
                out |= self.zero
            elif k.kind == "nilpotent":
                out |= ~self.zero & (self.d == 0)
            else:
                out |= ~self.zero & (self.d == k.d)
        return out


class FourierProjector:
    """Orbit projectors on the function space of one window.

    Args:
        moduli: Classifier the window came from.
        window: The window; functions are sequences indexed by its positions.

    Raises:
        CharacteristicTwo: If p = 2.
    """

    def __init__(self, moduli: Moduli, window: Window) -> None:
        self.moduli = moduli
        self.window = window
        self.field = moduli.curve.field
        self.p = self.field.p
        if self.p == 2:
            msg = "orbit projectors need odd characteristic"
            raise CharacteristicTwo(msg)
        self.cyclotomic = get_cyclotomic(self.p)
        self.groups: dict[Frame, list[int]] = {}
        for i, cls in enumerate(window):
            self.groups.setdefault(cls.frame, []).append(i)
        self._spectra: dict[Frame, FiberSpectrum] = {}
        self._tables: dict[tuple[Frame, tuple[OrbitKey, ...]], np.ndarray] = {}

    def spectrum(self, frame: Frame) -> FiberSpectrum:
        hit = self._spectra.get(frame)
        if hit is None:
            hit = self._spectra[frame] = FiberSpectrum(self.moduli.frame_data(frame))
        return hit

    @cached_property
    def keys(self) -> list[OrbitKey]:
        """Every bucket met by some frame of the window."""
        out: set[OrbitKey] = set()
        for frame in self.groups:
            out |= self.spectrum(frame).keys()
        return sorted(out, key=OrbitKey.sort_key)

    def _table(self, frame: Frame, keys: tuple[OrbitKey, ...]) -> np.ndarray:
        """``T[t, o, k] = #{(c' in o, lambda in B) : lambda . (c_t - c') = k}``."""
        hit = self._tables.get((frame, keys))
        if hit is not None:
            return hit
        data = self.moduli.frame_data(frame)
        spec = self.spectrum(frame)
        p = self.p
        positions = self.groups[frame]
        n = len(positions)
        out = np.zeros((n, n, p), dtype=np.int64)
        freqs = spec.freqs[spec.mask(keys)]
        if len(freqs):
            canon = [int(data.index(np.array(self.window[i].eps, dtype=np.int64))) for i in positions]
            orbit_of = {c: j for j, c in enumerate(canon)}
            every = all_vectors(p, data.h)
            table = data.orbit_table
            support = np.flatnonzero(np.isin(table, canon))
            owner = np.array([orbit_of[int(table[s])] for s in support], dtype=np.int64)
            points = every[support]
            for t, c in enumerate(canon):
                x = (data.vector(c) - points) % p
                for start in range(0, len(freqs), CHUNK):
                    dots = (x @ freqs[start : start + CHUNK].T) % p
                    for k in range(p):
                        np.add.at(out[t, :, k], owner, (dots == k).sum(axis=1))
        self._tables[(frame, keys)] = out
        return out

    def project(self, f: Sequence[Fraction | int], keys: Collection[OrbitKey]) -> list[CycScalar]:
        """``sum_{key in keys} Pi_key f`` as exact cyclotomic values."""
        ks = tuple(sorted(set(keys), key=OrbitKey.sort_key))
        zero = self.cyclotomic.zero()
        out = [zero] * len(self.window)
        for frame, positions in self.groups.items():
            table = self._table(frame, ks)
            scale = Fraction(1, self.field.q ** self.moduli.frame_data(frame).h)
            vals = [Fraction(f[i]) for i in positions]
            for t, i in enumerate(positions):
                coeffs = [
                    scale * sum((v * int(table[t, o, k]) for o, v in enumerate(vals) if v), Fraction(0))
                    for k in range(self.p)
                ]
                out[i] = self.cyclotomic.element(coeffs)
        return out

    def project_rational(self, f: Sequence[Fraction | int], keys: Collection[OrbitKey]) -> list[Fraction]:
        """Projection onto a rational union of buckets.

        Raises:
            ValueError: If the union is not stable under scaling of frequencies.
        """
        ks = tuple(sorted(set(keys), key=OrbitKey.sort_key))
        out = [Fraction(0)] * len(self.window)
        for frame, positions in self.groups.items():
            table = self._table(frame, ks)
            if not (table[..., 1:] == table[..., 1:2]).all():
                msg = f"buckets {[k.label() for k in ks]} are not stable under scaling"
                raise ValueError(msg)
            real = table[..., 0] - table[..., 1]
            scale = Fraction(1, self.field.q ** self.moduli.frame_data(frame).h)
            vals = [Fraction(f[i]) for i in positions]
            for t, i in enumerate(positions):
                out[i] = scale * sum((v * int(real[t, o]) for o, v in enumerate(vals) if v), Fraction(0))
        return out

    def decompose(self, f: Sequence[Fraction | int]) -> dict[OrbitKey, list[CycScalar]]:
        return {key: self.project(f, [key]) for key in self.keys}

    def is_complete(self, f: Sequence[Fraction | int]) -> bool:
        """The projections of every bucket add up to f."""
        total = [self.cyclotomic.zero()] * len(self.window)
        for parts in self.decompose(f).values():
            total = [a + b for a, b in zip(total, parts)]
        return all(t == Fraction(x) for t, x in zip(total, f))

    def bucket_dimension(self, vectors: Sequence[Sequence[Fraction]], keys: Collection[OrbitKey]) -> int:
        """Dimension of the projection of ``span(vectors)`` onto the buckets."""
        images = [self.project(v, keys) for v in vectors]
        return exact_rank(images)


def orbit_project(projector: FourierProjector, f: Sequence[Fraction | int], key: OrbitKey) -> list[CycScalar]:
    """``Pi_key f`` on the window of the projector."""
    return projector.project(f, [key])
