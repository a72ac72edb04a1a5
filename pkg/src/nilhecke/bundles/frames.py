"""Reduced rank-2 bundles as extension frames, and their eps-fibers.

A frame ``(S, Q, e)`` is the extension of ``O(Q)`` by ``O(S)`` with class
``e`` in ``H^1(O(S - Q))``, realised by the matrix

    g_p = [[t^-S_p, z_p t^-Q_p], [0, t^-Q_p]]

with ``z`` a combination of monomial representatives of ``H^1(O(S - Q))``.
On P^1 every bundle splits. On an elliptic curve the candidates are the
split frames, the non-split self-extensions, and extensions of degree gap
-1 or -2 that cover the stable and the Weil-restricted bundles; isomorphic
candidates are merged.

Bundles on C with a fixed reduction ``V-bar`` form the quotient of
``H^1(End V-bar)`` by conjugation under ``Aut(V-bar)``. Classes are read
through the Serre pairing ``c_j(Z) = sum_p Res_p tr(Phi_j Z_p) omega_0``
against a basis Phi of ``H^0(End V-bar (x) omega)``.
"""

from __future__ import annotations

import logging
from functools import cached_property
from typing import Mapping
from typing import NamedTuple

import numpy as np

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.hom import HomSpace
from nilhecke.bundles.hom import hom_lattice
from nilhecke.bundles.hom import profile
from nilhecke.curves.adeles import AdelicQuotient
from nilhecke.curves.base import Curve
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.curves.cohomology import line_bundle_quotient
from nilhecke.errors import PrecisionExhausted
from nilhecke.errors import WindowTooLarge
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries
from nilhecke.rings.linalg import all_vectors
from nilhecke.rings.linalg import inverse_mod_p


logger = logging.getLogger(__name__)

# largest eps-fiber H^1(End) tabulated exhaustively
MAX_FIBER = 1 << 16


class Frame(NamedTuple):
    """Extension data ``0 -> O(S) -> V-bar -> O(Q) -> 0``."""

    sub: PicLabel
    quot: PicLabel
    ext: tuple[int, ...] = ()

    @property
    def split_gap(self) -> int:
        return self.sub.degree - self.quot.degree

    @property
    def gap(self) -> int:
        """Instability ``deg S - deg Q`` of the destabilising sequence; 0 if semistable."""
        return max(self.split_gap, 0)

    @property
    def degree(self) -> int:
        return self.sub.degree + self.quot.degree

    def label(self) -> str:
        base = f"{self.sub.label()}+{self.quot.label()}"
        if any(self.ext):
            base += "[" + ",".join(str(e) for e in self.ext) + "]"
        return base


def frame_matrix(curve: Curve, frame: Frame, prec: int) -> AdelicMatrix:
    """The reduced adelic matrix of a frame."""
    f = curve.field
    s_div = curve.line_bundle_divisor(frame.sub)
    q_div = curve.line_bundle_divisor(frame.quot)
    z: dict[Place, LaurentSeries] = {}
    if any(frame.ext):
        space = line_bundle_quotient(curve, s_div - q_div)
        for i, e in enumerate(frame.ext):
            if e % curve.q == 0:
                continue
            place, vec = space.h1_representative(i)
            term = vec[0].red.scale(e)
            z[place] = z[place] + term if place in z else term
    places = sorted(set(s_div.support()) | set(q_div.support()) | set(z))
    zero = LaurentElement.zero(f, prec)
    local = {}
    for p in places:
        a = LaurentElement.monomial(f, 1, -s_div[p], prec)
        d = LaurentElement.monomial(f, 1, -q_div[p], prec)
        b = LaurentElement.reduced(z[p].truncate(prec)) * d if p in z else zero
        local[p] = Mat2(a, b, zero, d)
    return AdelicMatrix(curve, local, prec)


def projective_vectors(q: int, n: int) -> list[tuple[int, ...]]:
    """Nonzero vectors of F_q^n with first nonzero coordinate 1."""
    out = []
    for v in all_vectors(q, n):
        nz = np.flatnonzero(v)
        if len(nz) and v[nz[0]] == 1:
            out.append(tuple(int(x) for x in v))
    return out


def candidate_frames(curve: Curve, det: PicLabel, gap: int) -> list[Frame]:
    """Frames covering every reduced bundle with determinant ``det`` and gap at most ``gap``.

    Candidates are ordered by decreasing split gap, so the first member of
    an isomorphism class is the most split description.
    """
    d = det.degree
    out: list[Frame] = []
    for k in range(gap, -1, -1):
        if (d + k) % 2:
            continue
        for sub in curve.pic_enumerate([(d + k) // 2]):
            quot = curve.pic_add(det, curve.pic_neg(sub))
            if k == 0 and curve.genus and _place_key(quot) < _place_key(sub):
                continue
            out.append(Frame(sub, quot))
            if k == 0 and curve.genus and sub == quot:
                out.append(Frame(sub, quot, (1,)))
    if curve.genus == 1:
        k_min = -2 if d % 2 == 0 else -1
        for sub in curve.pic_enumerate([(d + k_min) // 2]):
            quot = curve.pic_add(det, curve.pic_neg(sub))
            h1 = -k_min
            out.extend(Frame(sub, quot, e) for e in projective_vectors(curve.q, h1))
    return out


def _place_key(label: PicLabel) -> tuple[int, int, int]:
    return label.point.sort_key() if label.point is not None else (0, 0, 0)


def profile_range(degree: int, gap: int) -> list[int]:
    """Twists m at which ``h^0(V-bar(-m O))`` separates the frames of a window."""
    return list(range(degree // 2 - 1, (degree + gap) // 2 + 2))


class FrameData:
    """Everything about one reduced bundle needed to classify its eps-fiber.

    Args:
        curve: Reduced curve backend.
        frame: The frame.
        prec: Local precision of the frame matrix.
    """

    def __init__(self, curve: Curve, frame: Frame, prec: int) -> None:
        self.curve = curve
        self.frame = frame
        self.prec = prec
        self.matrix = frame_matrix(curve, frame, prec)
        self.end = HomSpace(curve, self.matrix, self.matrix)
        self.dual = HomSpace(curve, self.matrix, self.matrix, omega=True)
        self.h = self.end.h1_dim
        if self.dual.h0_dim != self.h:
            msg = (
                f"Serre duality broken for {frame.label()}: "
                f"h1(End)={self.h}, h0(End x omega)={self.dual.h0_dim}"
            )
            raise PrecisionExhausted(msg)
        if curve.q**self.h > MAX_FIBER:
            msg = f"eps-fiber of {frame.label()} has {curve.q}^{self.h} points"
            raise WindowTooLarge(msg)

    @property
    def p(self) -> int:
        return self.curve.field.p

    @property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.h - 1, -1, -1, dtype=np.int64)

    def index(self, c: np.ndarray) -> np.ndarray:
        """Base-q index of coordinate rows."""
        return (np.asarray(c, dtype=np.int64) % self.p) @ self.weights

    def vector(self, idx: int) -> np.ndarray:
        out = np.zeros(self.h, dtype=np.int64)
        for j in range(self.h - 1, -1, -1):
            idx, out[j] = divmod(idx, self.p)
        return out

    # Serre pairing

    def _end_hi(self, place: Place) -> int:
        return self.end.quotient.hi.get(place, 0)

    def coordinates(self, adele: Mapping[Place, Mat2]) -> np.ndarray:
        """Coordinates of the class of an adele of ``End V-bar`` in ``H^1``.

        Raises:
            PrecisionExhausted: If a component is not known modulo the lattice.
        """
        f = self.curve.field
        canon = self.curve.canonical_divisor()
        out = np.zeros(self.h, dtype=np.int64)
        if self.h == 0:
            return out
        for p, x in adele.items():
            if all(e.red.is_zero() for e in x.entries()):
                continue
            hi = self._end_hi(p)
            if x.precision < hi:
                msg = f"component at {p.label()} known to t^{x.precision}, lattice needs t^{hi}"
                raise PrecisionExhausted(msg)
            k = abs(canon[p])
            lo = min(self.dual.quotient.lo.get(p, 0), 0)
            need = max(0, -x.min_order()) + 2 * k + 4
            pad = -lo + 2 * k + 4
            xs = [_padded(e.red, max(pad, e.red.prec)) for e in (x.a, x.c, x.b, x.d)]
            w = self.curve.omega_expansion(p, need + k + 4)
            for j, phi in enumerate(self.dual.basis_at(p, need + k + 4)):
                ys = (phi.a.red, phi.b.red, phi.c.red, phi.d.red)
                acc = LaurentSeries.zero(f, need)
                for u, v in zip(ys, xs):
                    acc = acc + u * v
                out[j] = f.add(int(out[j]), self.curve.residue(acc * w))
        return out % self.p

    @cached_property
    def representatives(self) -> list[tuple[Place, Mat2]]:
        """Monomial adeles ``R_i`` whose classes form a basis of ``H^1(End V-bar)``."""
        reps = []
        lo = self.end.quotient.lo
        for i in range(self.h):
            place, vec = self.end.quotient.h1_representative(i)
            prec = self._end_hi(place) - 2 * min(lo.get(place, 0), 0) + 6
            reps.append((place, Mat2(*(_padded_element(x, prec) for x in vec))))
        return reps

    @cached_property
    def pairing(self) -> np.ndarray:
        """Matrix P with rows ``c(R_i)``."""
        rows = [self.coordinates({p: r}) for p, r in self.representatives]
        return np.array(rows, dtype=np.int64).reshape(self.h, self.h)

    @cached_property
    def pairing_inverse(self) -> np.ndarray:
        if self.h == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return inverse_mod_p(self.pairing, self.p)

    def lift(self, c: np.ndarray, prec: int | None = None) -> dict[Place, Mat2]:
        """An adele ``sum_i y_i R_i`` with coordinates c, padded to ``prec``."""
        y = (np.asarray(c, dtype=np.int64) @ self.pairing_inverse) % self.p
        out: dict[Place, Mat2] = {}
        f = self.curve.field
        for coef, (place, r) in zip(y, self.representatives):
            if not coef:
                continue
            if prec is not None:
                r = Mat2(*(_padded_element(x, prec) for x in r.entries()))
            term = r.scale(LaurentElement.monomial(f, int(coef), 0, r.precision))
            out[place] = out[place] + term if place in out else term
        return out

    # determinant slice

    @cached_property
    def trace_functional(self) -> np.ndarray | None:
        """lambda with ``tau(det) = c . lambda``; None when ``H^1(O) = 0``."""
        if self.curve.genus == 0:
            return None
        f = self.curve.field
        taus = []
        for p, r in self.representatives:
            tr = r.trace().red
            w = self.curve.omega_expansion(p, max(2, -tr.order() + 2))
            taus.append(self.curve.residue(_padded(tr, max(tr.prec, 2)) * w) % f.p)
        if self.h == 0:
            return np.zeros(0, dtype=np.int64)
        return (self.pairing_inverse @ np.array(taus, dtype=np.int64)) % self.p

    def slice_value(self, c: np.ndarray) -> int:
        lam = self.trace_functional
        if lam is None:
            return 0
        return int(np.asarray(c, dtype=np.int64) @ lam % self.p)

    # automorphism action

    @cached_property
    def units(self) -> np.ndarray:
        return self.end.units()

    @property
    def aut_order(self) -> int:
        """``|Aut(V-bar)|``."""
        return len(self.units)

    @cached_property
    def conjugation_tensor(self) -> np.ndarray:
        """``T[a, b, i] = c(e_a R_i adj(e_b))`` for the H^0(End) basis e."""
        n = self.end.h0_dim
        out = np.zeros((n, n, self.h, self.h), dtype=np.int64)
        lo_end = self.end.quotient.lo
        for i, (place, r) in enumerate(self.representatives):
            e = r.min_order()
            prec = self._end_hi(place) - e - 2 * min(lo_end.get(place, 0), 0) + 6
            basis = self.end.basis_at(place, prec)
            for a in range(n):
                left = basis[a] * r
                for b in range(n):
                    out[a, b, i] = self.coordinates({place: left * basis[b].adjugate()})
        return out

    @cached_property
    def actions(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct matrices ``A(u)`` of the unit action on coordinates, with multiplicities.

        ``c(u Z u^-1) = c(Z) A(u)`` where ``A(u) = P^-1 sum x_a x_b T_ab / det u``.
        """
        if self.h == 0:
            return np.zeros((1, 0, 0), dtype=np.int64), np.array([self.aut_order])
        p = self.p
        x = self.units
        det_u = self.end.form_values(x)
        inv = np.array([pow(int(v), p - 2, p) for v in det_u], dtype=np.int64)
        m = np.einsum("ua,ub,abij->uij", x, x, self.conjugation_tensor) % p
        m = (m * inv[:, None, None]) % p
        a = np.einsum("ik,ukj->uij", self.pairing_inverse, m) % p
        flat, counts = np.unique(a.reshape(len(a), -1), axis=0, return_counts=True)
        return flat.reshape(-1, self.h, self.h), counts

    @cached_property
    def orbit_table(self) -> np.ndarray:
        """Canonical (least) index of the orbit of every coordinate vector."""
        every = all_vectors(self.p, self.h)
        canon = self.index(every)
        if self.h == 0:
            return canon
        mats, _ = self.actions
        for a in mats:
            canon = np.minimum(canon, self.index((every @ a) % self.p))
        return canon

    @cached_property
    def orbits(self) -> dict[int, int]:
        """Orbit sizes keyed by canonical index."""
        keys, counts = np.unique(self.orbit_table, return_counts=True)
        return {int(k): int(c) for k, c in zip(keys, counts)}

    def canonical(self, c: np.ndarray) -> np.ndarray:
        return self.vector(int(self.orbit_table[int(self.index(c))]))

    def stabilizer_order(self, c: np.ndarray) -> int:
        idx = int(self.orbit_table[int(self.index(c))])
        return self.aut_order // self.orbits[idx]

    def fiber_mass(self) -> tuple[int, int]:
        """``(q^(h - h1(O)), q^h0(End) |Aut V-bar|)``: the mass of one determinant slice."""
        q = self.curve.q
        return q ** (self.h - self.curve.genus), q**self.end.h0_dim * self.aut_order


def _padded(series: LaurentSeries, prec: int) -> LaurentSeries:
    """Series with unknown coefficients below ``prec`` read as zero."""
    if prec <= series.prec:
        return series
    return LaurentSeries(series.field, series.low, series.coeffs, prec)


def _padded_element(x: LaurentElement, prec: int) -> LaurentElement:
    return LaurentElement(_padded(x.red, prec), _padded(x.eps, prec))


def frames_for(
    curve: Curve,
    det: PicLabel,
    gap: int,
    prec: int,
    cache: dict[Frame, FrameData] | None = None,
) -> list[tuple[FrameData, tuple[int, ...]]]:
    """Pairwise non-isomorphic frames with their h^0-profiles.

    Args:
        curve: Reduced curve backend.
        det: Determinant class of the reduction.
        gap: Largest instability gap.
        prec: Local precision of frame matrices.
        cache: Shared FrameData per frame, filled as frames are built.
    """
    cache = {} if cache is None else cache
    ms = profile_range(det.degree, gap)
    kept: list[tuple[FrameData, tuple[int, ...]]] = []
    for frame in candidate_frames(curve, det, gap):
        data = cache.get(frame)
        if data is None:
            data = cache[frame] = FrameData(curve, frame, prec)
        prof = profile(curve, data.matrix, ms)
        twin = next(
            (
                k
                for k, kp in kept
                if kp == prof
                and HomSpace(curve, data.matrix, k.matrix).find_invertible() is not None
            ),
            None,
        )
        if twin is None:
            kept.append((data, prof))
        else:
            logger.debug("frame %s merged into %s", frame.label(), twin.frame.label())
    logger.info("%d reduced frames for %s with gap <= %d", len(kept), det.label(), gap)
    return kept


def end_quotient(g: AdelicMatrix, levels: int = 2) -> AdelicQuotient:
    """The finite model of ``End V`` (``levels=2``) or of ``End V-bar``."""
    m = g if levels == 2 else g.reduction()
    lattices = {p: hom_lattice(x, x) for p, x in m.items()}
    return AdelicQuotient(g.curve, 4, lattices, levels=levels)
