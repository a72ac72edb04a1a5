"""Canonical forms and windows of rank-2 bundles on C.

A bundle is identified by the frame of its reduction, the least index in
the Aut(V-bar)-orbit of its eps-class, and its determinant class in Pic(C).
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from fractions import Fraction
from typing import Any
from typing import Iterator
from typing import NamedTuple

import numpy as np

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.frames import Frame
from nilhecke.bundles.frames import FrameData
from nilhecke.bundles.frames import end_quotient
from nilhecke.bundles.frames import frames_for
from nilhecke.bundles.frames import profile_range
from nilhecke.bundles.hom import HomSpace
from nilhecke.bundles.hom import det_quadratic_form
from nilhecke.bundles.hom import profile
from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_label
from nilhecke.curves.adeles import GlobalSection
from nilhecke.curves.base import Curve
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.errors import OutOfWindow
from nilhecke.errors import WindowTooLarge
from nilhecke.local.lattices import window_for
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.linalg import all_vectors
from nilhecke.rings.linalg import rref_mod_p


logger = logging.getLogger(__name__)


class WindowSpec(NamedTuple):
    """Bundles with determinant ``det`` whose reduction has gap at most ``gap``."""

    det: DetLabel
    gap: int


class BundleClass(NamedTuple):
    """Canonical form of a rank-2 bundle on C."""

    frame: Frame
    eps: tuple[int, ...]
    det: DetLabel

    @property
    def gap(self) -> int:
        return self.frame.gap

    def is_split(self) -> bool:
        """Split reduction with zero eps-class."""
        return not any(self.frame.ext) and not any(self.eps)

    def reduction_label(self) -> str:
        """``(a,b)`` with a <= b on P^1, the frame label otherwise."""
        if self.frame.sub.point is None:
            a, b = sorted((self.frame.sub.degree, self.frame.quot.degree))
            return f"({a},{b})"
        return self.frame.label()

    def label(self) -> str:
        eps = ",".join(str(e) for e in self.eps)
        return f"{self.reduction_label()}|{eps}|{self.det.label()}"

    def sort_key(self) -> tuple[int, str, tuple[int, ...]]:
        return (-self.frame.split_gap, self.frame.label(), self.eps)

    def as_dict(self) -> dict[str, Any]:
        return {
            "sub": _pic_dict(self.frame.sub),
            "quot": _pic_dict(self.frame.quot),
            "ext": list(self.frame.ext),
            "eps": list(self.eps),
            "det": {"pic": _pic_dict(self.det.pic), "tau": self.det.tau},
        }


def _pic_dict(label: PicLabel) -> dict[str, Any]:
    return {
        "degree": label.degree,
        "point": label.point.label() if label.point is not None else None,
    }


def _pic_from(curve: Curve, data: dict[str, Any]) -> PicLabel:
    point = data.get("point")
    return PicLabel(int(data["degree"]), curve.place(point) if point is not None else None)


def bundle_class_from_dict(curve: Curve, data: dict[str, Any]) -> BundleClass:
    """Inverse of :meth:`BundleClass.as_dict`."""
    frame = Frame(
        _pic_from(curve, data["sub"]),
        _pic_from(curve, data["quot"]),
        tuple(int(e) for e in data["ext"]),
    )
    det = data["det"]
    tau = det.get("tau")
    return BundleClass(
        frame,
        tuple(int(e) for e in data["eps"]),
        DetLabel(_pic_from(curve, det["pic"]), None if tau is None else int(tau)),
    )


class Window:
    """An ordered, duplicate-free list of the bundle classes of a WindowSpec."""

    def __init__(self, spec: WindowSpec, classes: list[BundleClass]) -> None:
        self.spec = spec
        self.classes = classes
        self._pos = {c: i for i, c in enumerate(classes)}

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self) -> Iterator[BundleClass]:
        return iter(self.classes)

    def __getitem__(self, i: int) -> BundleClass:
        return self.classes[i]

    def __contains__(self, cls: object) -> bool:
        return cls in self._pos

    def position(self, cls: BundleClass) -> int:
        """Index of a class.

        Raises:
            OutOfWindow: If the class is not in the window.
        """
        hit = self._pos.get(cls)
        if hit is None:
            msg = f"{cls.label()} is outside the window {self.spec.det.label()}, gap {self.spec.gap}"
            raise OutOfWindow(msg)
        return hit

    def restrict(self, gap: int) -> list[int]:
        """Positions of classes with gap at most ``gap``."""
        return [i for i, c in enumerate(self.classes) if c.gap <= gap]


class FiberPoint(NamedTuple):
    """A bundle located over its frame, before orbit reduction of its eps-class."""

    data: FrameData
    hom: HomSpace
    iso: np.ndarray
    det: DetLabel
    raw: np.ndarray


class MassCheck(NamedTuple):
    """``sum 1/|Aut V|`` over one determinant slice of an eps-fiber, and its prediction."""

    frame: Frame
    orbits: int
    mass: Fraction
    expected: Fraction

    @property
    def ok(self) -> bool:
        return self.mass == self.expected

    def to_dict(self) -> dict[str, Any]:
        return {
            "frame": self.frame.label(),
            "orbits": self.orbits,
            "mass": str(self.mass),
            "expected": str(self.expected),
            "ok": self.ok,
        }


class Moduli:
    """Classifier of rank-2 bundles on C with cached frames and reductions.

    Args:
        curve: Reduced curve backend.
        prec: Local precision of frame matrices and expansions.
        max_classes: Resource guard on the size of one window.
        seed: Seed for the randomized isomorphism search.
    """

    def __init__(
        self, curve: Curve, prec: int = 24, max_classes: int = 20_000, seed: int = 0
    ) -> None:
        self.curve = curve
        self.prec = prec
        self.max_classes = max_classes
        self.rng = random.Random(seed)
        self._data: dict[Frame, FrameData] = {}
        self._frames: dict[tuple[PicLabel, int], list[tuple[FrameData, tuple[int, ...]]]] = {}
        self._matches: dict[tuple[Any, ...], tuple[FrameData, HomSpace, np.ndarray]] = {}

    def frames(self, det: PicLabel, gap: int) -> list[tuple[FrameData, tuple[int, ...]]]:
        key = (det, gap)
        hit = self._frames.get(key)
        if hit is None:
            hit = frames_for(self.curve, det, gap, self.prec, cache=self._data)
            self._frames[key] = hit
        return hit

    def frame_data(self, frame: Frame) -> FrameData:
        hit = self._data.get(frame)
        if hit is None:
            hit = self._data[frame] = FrameData(self.curve, frame, self.prec)
        return hit

    # canonical forms

    def _reduction_key(self, gbar: AdelicMatrix) -> tuple[Any, ...]:
        key = []
        for p, m in gbar.items():
            win = window_for([m], self.curve.field)
            key.append((p, win.lo, win.hi, win.key(m)))
        return tuple(key)

    def _match(
        self, gbar: AdelicMatrix, det: PicLabel, gap: int
    ) -> tuple[FrameData, HomSpace, np.ndarray]:
        key = (det, gap, self._reduction_key(gbar))
        hit = self._matches.get(key)
        if hit is not None:
            return hit
        prof = profile(self.curve, gbar, profile_range(det.degree, gap))
        for data, fprof in self.frames(det, gap):
            if fprof != prof:
                continue
            hom = HomSpace(self.curve, gbar, data.matrix)
            x = hom.find_invertible(self.rng)
            if x is not None:
                hit = (data, hom, x)
                self._matches[key] = hit
                return hit
        msg = f"reduction with determinant {det.label()} has gap above {gap}"
        raise OutOfWindow(msg)

    def locate(self, g: AdelicMatrix, gap: int) -> FiberPoint:
        """Frame, isomorphism and raw eps-coordinates of the bundle of g.

        Raises:
            OutOfWindow: If the reduction has gap above ``gap``.
        """
        gbar = g.reduction()
        det = self.curve.divisor_class(gbar.det_divisor())
        data, hom, x = self._match(gbar, det, gap)
        raw = np.zeros(data.h, dtype=np.int64)
        if data.h:
            z: dict[Place, Mat2] = {}
            for p, y in g.eps_data().items():
                gamma = hom.element_at(x, p, max(self.prec, y.precision))
                z[p] = gamma * y * gamma.inverse()
            if z:
                raw = data.coordinates(z)
        return FiberPoint(data, hom, x, det_label(g), raw)

    def direction(self, point: FiberPoint, place: Place, y: Mat2) -> np.ndarray:
        """Coordinates of ``gamma y gamma^-1``: moving g to ``(1 + eps y) g`` adds them."""
        if not point.data.h:
            return point.raw
        gamma = point.hom.element_at(point.iso, place, max(self.prec, y.precision))
        return point.data.coordinates({place: gamma * y * gamma.inverse()})

    def tally(self, point: FiberPoint, coords: np.ndarray) -> Counter[BundleClass]:
        """Classes of a stack of raw coordinate rows over one fiber point."""
        data = point.data
        if not data.h:
            return Counter({BundleClass(data.frame, (), point.det): len(coords)})
        canon = data.orbit_table[data.index(coords)]
        keys, counts = np.unique(canon, return_counts=True)
        out: Counter[BundleClass] = Counter()
        for k, n in zip(keys, counts):
            eps = tuple(int(e) for e in data.vector(int(k)))
            out[BundleClass(data.frame, eps, point.det)] = int(n)
        return out

    def canonicalize(self, g: AdelicMatrix, gap: int) -> BundleClass:
        """Canonical form of the bundle of g.

        Raises:
            OutOfWindow: If the reduction has gap above ``gap``.
        """
        point = self.locate(g, gap)
        eps = point.data.canonical(point.raw) if point.data.h else point.raw
        return BundleClass(point.data.frame, tuple(int(e) for e in eps), point.det)

    def representative(self, cls: BundleClass) -> AdelicMatrix:
        """``g_p = s_p + eps Z_p s_p`` with s the frame and Z a lift of the eps-class."""
        data = self.frame_data(cls.frame)
        s = data.matrix
        z = data.lift(np.array(cls.eps, dtype=np.int64), self.prec)
        local = {}
        for p in sorted(set(s.support) | set(z)):
            sp = s.at(p)
            local[p] = sp + (z[p] * sp).times_eps() if p in z else sp
        return AdelicMatrix(self.curve, local, self.prec)

    # automorphisms

    def aut_order(self, cls: BundleClass) -> int:
        """``|Aut V|`` counted as the units of the finite ring ``H^0(End V)``.

        A section is a unit iff its reduction is; the reductions form a
        subspace W of ``H^0(End V-bar)``, each hit ``q^(h0 - dim W)`` times.
        """
        q = self.curve.q
        space = end_quotient(self.representative(cls), levels=2)
        sections = space.h0_basis()
        if not sections:
            return 1
        level0 = np.array([s.coeffs[:, :, 0].reshape(-1) for s in sections], dtype=np.int64)
        ech = rref_mod_p(level0, q)
        aux = self.curve.aux_place()
        prec = 2 * max(0, -space.lo.get(aux, 0)) + 4
        mats = []
        for row in ech.rows:
            coeffs = np.zeros((space.rr.dim, 4, 2), dtype=np.int64)
            coeffs[:, :, 0] = row.reshape(space.rr.dim, 4)
            mats.append(Mat2(*GlobalSection(space, coeffs).expand(aux, prec)).reduction())
        form = det_quadratic_form(mats, 0, q)
        every = all_vectors(q, ech.rank)
        units = int((((every @ form) * every).sum(axis=1) % q != 0).sum())
        return q ** (len(sections) - ech.rank) * units

    def aut_order_from_orbit(self, cls: BundleClass) -> int:
        """``q^h0(End V-bar) |Stab(eps)|`` from the orbit table."""
        data = self.frame_data(cls.frame)
        stab = data.stabilizer_order(np.array(cls.eps, dtype=np.int64))
        return self.curve.q**data.end.h0_dim * stab

    # windows

    def enumerate_window(self, spec: WindowSpec) -> Window:
        """Every bundle class of the window, sorted.

        Raises:
            WindowTooLarge: If the window exceeds ``max_classes``.
        """
        classes: list[BundleClass] = []
        tau = int(spec.det.tau or 0)
        for data, _ in self.frames(spec.det.pic, spec.gap):
            for idx in sorted(data.orbits):
                c = data.vector(idx)
                if self.curve.genus and data.slice_value(c) != tau:
                    continue
                classes.append(BundleClass(data.frame, tuple(int(e) for e in c), spec.det))
                if len(classes) > self.max_classes:
                    msg = f"window {spec.det.label()}, gap {spec.gap} exceeds {self.max_classes} classes"
                    raise WindowTooLarge(msg)
        classes.sort(key=BundleClass.sort_key)
        logger.info(
            "window %s gap %d: %d classes over %d reductions",
            spec.det.label(),
            spec.gap,
            len(classes),
            len(self.frames(spec.det.pic, spec.gap)),
        )
        return Window(spec, classes)

    def mass_checks(self, window: Window) -> list[MassCheck]:
        """The mass identity on every reduction of the window."""
        by_frame: dict[Frame, list[BundleClass]] = {}
        for cls in window:
            by_frame.setdefault(cls.frame, []).append(cls)
        out = []
        for frame, members in by_frame.items():
            num, den = self.frame_data(frame).fiber_mass()
            mass = sum((Fraction(1, self.aut_order(c)) for c in members), Fraction(0))
            out.append(MassCheck(frame, len(members), mass, Fraction(num, den)))
        return out
