"""Hecke eigenbasis of the strongly cuspidal functions over one alpha.

For every degree-0 determinant slice the alpha-bucket of the cuspidal
kernel is taken on a window wide enough for ``R_c = T_c T'_c`` to be
evaluated on it; ``R_c`` preserves the determinant, so it acts on the
bucket. Its matrix is recovered exactly from the values on the inner
window and the joint eigenspaces are split operator by operator.

Eigenfunctions are normalized to the value 1 at the least class of their
support's label order, which fixes a trivialization of the fiber torsor;
the character functions are rebuilt from the character table over it.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any
from typing import NamedTuple
from typing import Sequence

import sympy as sp

from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_add
from nilhecke.bundles.pic import square_classes
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec
from nilhecke.constant_term.kernel import cuspidal_kernel
from nilhecke.constant_term.strata import divisor_bound_for
from nilhecke.errors import DimensionMismatch
from nilhecke.errors import WindowInsufficient
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.operators import COLUMN_MARGIN
from nilhecke.hecke.operators import HeckeMatrix
from nilhecke.hecke.operators import hecke_matrix
from nilhecke.hecke.operators import hecke_matrix_prime
from nilhecke.rings.cyclotomic import get_cyclotomic
from nilhecke.spectral.decomposition import independent
from nilhecke.spectral.fourier import FourierProjector
from nilhecke.spectral.fourier import square_class
from nilhecke.spectral.hitchin import SpectralFiberData
from nilhecke.spectral.hitchin import hitchin_fiber


logger = logging.getLogger(__name__)


class SliceBucket(NamedTuple):
    """The alpha-bucket of one determinant slice and the operators on it."""

    det: DetLabel
    outer: Window
    inner: Window
    basis: list[list[Fraction]]
    operators: dict[str, sp.Matrix]
    images: dict[str, sp.Matrix]
    known: dict[str, list[int]]


class TheoremFReport(NamedTuple):
    """Eigenbasis certificate over one alpha."""

    alpha: int
    group_order: int
    bucket_dim: int
    slices: list[str]
    base_points: list[str]
    operators: list[str]
    orthogonal: bool
    commute: bool
    diagonalizable: bool
    eigen_ok: bool
    eigenvalues: list[dict[str, str]]

    @property
    def ok(self) -> bool:
        return self.orthogonal and self.commute and self.diagonalizable and self.eigen_ok

    def to_dict(self) -> dict[str, Any]:
        return self._asdict() | {"ok": self.ok}


def compose(outer: HeckeMatrix, inner: HeckeMatrix, f: Sequence[Fraction]) -> list[Fraction | None]:
    """``outer(inner(f))``; None wherever a needed value is unknown.

    ``f`` is indexed by the columns of ``inner``, whose rows are the columns of ``outer``.
    """
    mid = inner.apply(list(f), Fraction(0))
    out: list[Fraction | None] = []
    for i, row in enumerate(outer.targets):
        if not outer.interior[i]:
            out.append(None)
            continue
        acc: Fraction | None = Fraction(0)
        for cls, m in row.items():
            v = mid[inner.rows.position(cls)]
            if v is None:
                acc = None
                break
            acc += m * v
        out.append(acc)
    return out


def _operator_matrix(
    name: str, restricted: sp.Matrix, images: sp.Matrix, det: DetLabel
) -> sp.Matrix:
    """The matrix M with ``images = restricted * M``, checked exactly.

    Raises:
        WindowInsufficient: If the bucket is not determined by the inner
            window or is not preserved.
    """
    if restricted.rank() < restricted.cols:
        msg = f"inner window of {det.label()} does not separate the bucket"
        raise WindowInsufficient(msg)
    gram = restricted.T * restricted
    m = gram.inv() * restricted.T * images
    if restricted * m != images:
        msg = f"{name} leaves the alpha-bucket of {det.label()}"
        raise WindowInsufficient(msg)
    return m


def slice_bucket(
    moduli: Moduli,
    det: DetLabel,
    alpha: int,
    gap: int,
    divisors: list[SimpleDivisor],
    dmax: int | None,
    margin: int,
) -> SliceBucket:
    """Bucket basis on the outer window and the matrices of every ``R_c`` on it."""
    curve = moduli.curve
    outer_gap = gap + 2 * COLUMN_MARGIN
    if dmax is None:
        dmax = divisor_bound_for(curve.genus, outer_gap)
    report = cuspidal_kernel(moduli, WindowSpec(det, outer_gap), dmax, margin)
    outer = report.window
    projector = FourierProjector(moduli, outer)
    keys = square_class(curve.field, alpha)
    basis = independent([projector.project_rational(v, keys) for v in report.basis])
    inner = moduli.enumerate_window(WindowSpec(det, gap))
    operators: dict[str, sp.Matrix] = {}
    images: dict[str, sp.Matrix] = {}
    known: dict[str, list[int]] = {}
    for c in divisors:
        name = f"R[{c.label()}]"
        mid = moduli.enumerate_window(WindowSpec(det_add(curve, det, c.det_shift(curve)), gap + COLUMN_MARGIN))
        tp = hecke_matrix_prime(moduli, c, mid)
        t = hecke_matrix(moduli, c, inner)
        columns = [[v[outer.position(cls)] for cls in tp.cols] for v in basis]
        values = [compose(t, tp, f) for f in columns]
        rows = [i for i in range(len(inner)) if all(v[i] is not None for v in values)]
        known[name] = rows
        positions = [outer.position(inner[i]) for i in rows]
        images[name] = sp.Matrix(len(rows), len(basis), lambda i, j: sp.Rational(values[j][rows[i]]))
        restricted = sp.Matrix(len(rows), len(basis), lambda i, j: sp.Rational(basis[j][positions[i]]))
        operators[name] = (
            _operator_matrix(name, restricted, images[name], det) if basis else sp.zeros(0, 0)
        )
    return SliceBucket(det, outer, inner, basis, operators, images, known)


def base_point(outer: Window, f: list[Any]) -> int:
    """Position of the least label in the support of f."""
    support = [i for i, x in enumerate(f) if x != 0]
    return min(support, key=lambda i: outer[i].label())


def joint_eigenbasis(operators: dict[str, sp.Matrix]) -> tuple[list[sp.Matrix], bool]:
    """Joint eigenvectors of commuting operators; the flag says they span.

    Eigenspaces of the first operator are split by the second and so on;
    any basis of a joint eigenspace of higher dimension is kept.
    """
    mats = list(operators.values())
    n = mats[0].rows
    spaces = [sp.eye(n)]
    complete = True
    for m in mats:
        refined = []
        for w in spaces:
            a, params = w.gauss_jordan_solve(m * w)
            if params:
                complete = False
            for _, mult, vecs in a.eigenvects():
                complete &= len(vecs) == mult
                refined.append(sp.Matrix.hstack(*[w * v for v in vecs]))
        spaces = refined
    vectors = [w[:, j] for w in spaces for j in range(w.cols)]
    return vectors, complete and len(vectors) == n


def certify_parts(buckets: Sequence[SliceBucket], parts: Sequence[sp.Matrix]) -> dict[str, Any] | None:
    """Common eigenvalues of a function given by its parts on several slices."""
    out = {}
    for name in buckets[0].operators:
        lam = None
        for bucket, v in zip(buckets, parts):
            if all(sp.simplify(x) == 0 for x in v):
                continue
            if lam is None:
                lam = _eigenvalue(bucket.operators[name], v)
            rows = bucket.known[name]
            positions = [bucket.outer.position(bucket.inner[i]) for i in rows]
            restricted = sp.Matrix(
                len(rows), len(bucket.basis), lambda i, j: sp.Rational(bucket.basis[j][positions[i]])
            )
            residual = (bucket.images[name] - lam * restricted) * v
            if any(sp.simplify(x) != 0 for x in residual):
                return None
        if lam is None:
            return None
        out[name] = lam
    return out


def _eigenvalue(m: sp.Matrix, v: sp.Matrix) -> Any:
    w = m * v
    k = next(i for i in range(len(v)) if sp.simplify(v[i]) != 0)
    return sp.simplify(w[k] / v[k])


class Eigenfunction(NamedTuple):
    """A joint eigenvector of one slice bucket, normalized at its base point."""

    bucket: int
    vector: sp.Matrix
    base: str


def character_coordinates(fiber: SpectralFiberData) -> list[list[Fraction]] | None:
    """``c[i][j] = |G|^-1 sum_h chi_i(h) conj(chi_j(h))``, or None off the rationals.

    Under the trivialization ``delta_h = |G|^-1 sum_j conj(chi_j(h)) e_j`` of the
    fiber, ``f_chi_i = sum_h chi_i(h) delta_h`` has coordinates ``c[i]`` on
    the eigenbasis ``e``.
    """
    n = fiber.order
    zero = get_cyclotomic(fiber.exponent).zero()
    out = []
    for a in fiber.characters:
        row = []
        for b in fiber.characters:
            value = sum((x * y.conj() for x, y in zip(a, b)), zero).rational_value()
            if value is None:
                return None
            row.append(value / n)
        out.append(row)
    return out


def verify_theorem_F(  # noqa: N802
    moduli: Moduli,
    alpha: int,
    gap: int,
    divisors: list[SimpleDivisor],
    dmax: int | None = None,
    margin: int = 2,
) -> TheoremFReport:
    """Certify the character eigenbasis of the alpha-bucket of the cuspidal kernel.

    The joint eigenvectors of the ``R_c`` on every slice, normalized at
    their base points, fix the trivialization of the fiber torsor; one
    block of ``|G|`` of them is taken per square class member d. Each
    character function ``f_chi`` is then rebuilt from the character table
    over that trivialization and certified against every operator.

    Args:
        moduli: Classifier on the elliptic backend.
        alpha: A non-square constant.
        gap: Gap of the inner window on which eigen-equations are checked.
        divisors: Simple divisors whose operators ``R_c`` are diagonalized.
        dmax: Stratum degree bound for the kernels; defaults to the bound
            needed on the outer window.
        margin: Extra gap of the stratum scan.

    Raises:
        DimensionMismatch: If the bucket dimension differs from the fiber group order.
        WindowInsufficient: If the inner window does not determine the bucket.
        AlphaIsSquare: If alpha is a square.
    """
    if not divisors:
        msg = "at least one simple divisor is needed"
        raise ValueError(msg)
    curve = moduli.curve
    fiber = hitchin_fiber(curve, alpha)
    keys = square_class(curve.field, fiber.alpha)
    buckets = [
        slice_bucket(moduli, det, fiber.alpha, gap, divisors, dmax, margin)
        for det in square_classes(curve, 0)
    ]
    dim = sum(len(b.basis) for b in buckets)
    expected = fiber.order * len(keys)
    if dim != expected:
        msg = f"alpha-bucket has dimension {dim}, the fiber groups have order {expected}"
        raise DimensionMismatch(msg)
    commute = diagonalizable = True
    eigen: list[Eigenfunction] = []
    for k, bucket in enumerate(buckets):
        if not bucket.basis:
            continue
        mats = list(bucket.operators.values())
        commute &= all(a * b == b * a for a in mats for b in mats)
        vectors, ok = joint_eigenbasis(bucket.operators)
        diagonalizable &= ok
        for v in vectors:
            f = [
                sp.simplify(sum((v[j] * sp.Rational(b[i]) for j, b in enumerate(bucket.basis)), sp.Integer(0)))
                for i in range(len(bucket.outer))
            ]
            at = base_point(bucket.outer, f)
            eigen.append(Eigenfunction(k, v / f[at], bucket.outer[at].label()))
    coords = character_coordinates(fiber)
    eigen_ok = coords is not None and len(eigen) == dim
    table: list[dict[str, str]] = []
    n = fiber.order
    for block, d in enumerate(keys if eigen_ok else []):
        chunk = eigen[block * n : (block + 1) * n]
        for i, row in enumerate(coords):
            parts = [sp.zeros(len(b.basis), 1) for b in buckets]
            for c, e in zip(row, chunk):
                if c:
                    parts[e.bucket] += sp.Rational(c.numerator, c.denominator) * e.vector
            used = [j for j, p in enumerate(parts) if any(sp.simplify(x) != 0 for x in p)]
            values = certify_parts([buckets[j] for j in used], [parts[j] for j in used]) if used else None
            if values is None:
                eigen_ok = False
                continue
            table.append(
                {
                    "d": str(d.d),
                    "character": str(i),
                    "slices": ",".join(buckets[j].det.label() for j in used),
                    **{name: str(x) for name, x in values.items()},
                }
            )
    logger.info(
        "alpha=%d: bucket dim %d, %d character eigenfunctions certified",
        fiber.alpha,
        dim,
        len(table),
    )
    return TheoremFReport(
        fiber.alpha,
        fiber.order,
        dim,
        [b.det.label() for b in buckets],
        [e.base for e in eigen],
        [f"R[{c.label()}]" for c in divisors],
        fiber.orthogonal(),
        commute,
        diagonalizable,
        eigen_ok and len(table) == dim,
        table,
    )
