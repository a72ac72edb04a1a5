"""Hecke operators as exact sparse matrices on a bundle window.

``(T_c f)(V) = sum_h f(V h g_c)`` over the ``q(q+1)`` cosets h of
``P^1(A(c))``, with ``g_c = diag(f_c^-1, 1)`` at the point of c. Rows are
the classes of a window with determinant L; columns are classes with
determinant ``L det(g_c)`` in a window whose gap is larger by two. A row
is interior when every modification lands in the column window; other
rows are kept but flagged, so that truncation never loses mass silently.

``T'_c`` uses the sublattices ``V h diag(1, f_c)`` instead.
"""

from __future__ import annotations

import logging
from collections import Counter
from typing import Any
from typing import Callable
from typing import Sequence
from typing import TypeVar

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_add
from nilhecke.bundles.pic import det_label
from nilhecke.bundles.pic import det_neg
from nilhecke.bundles.pic import line_bundle_idele
from nilhecke.bundles.window import BundleClass
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec
from nilhecke.curves.base import Place
from nilhecke.errors import OutOfWindow
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.matrices.mat2 import Mat2


logger = logging.getLogger(__name__)

# extra gap of the column window
COLUMN_MARGIN = 2

S = TypeVar("S")


class HeckeMatrix:
    """Sparse nonnegative integer matrix between two windows.

    Args:
        name: Operator label for reports.
        rows: Source window.
        cols: Target window.
        targets: Per row, the multiset of target classes (complete for interior rows).
        interior: Per row, whether no target left the column window.
    """

    def __init__(
        self,
        name: str,
        rows: Window,
        cols: Window,
        targets: list[Counter[BundleClass]],
        interior: list[bool],
    ) -> None:
        self.name = name
        self.rows = rows
        self.cols = cols
        self.targets = targets
        self.interior = interior

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def interior_rows(self) -> list[int]:
        return [i for i, ok in enumerate(self.interior) if ok]

    def row(self, cls: BundleClass) -> Counter[BundleClass]:
        return self.targets[self.rows.position(cls)]

    def row_sum(self, i: int) -> int:
        return sum(self.targets[i].values())

    def triplets(self) -> list[tuple[int, int, int]]:
        """``(row, col, value)`` entries, sorted."""
        out = []
        for i, row in enumerate(self.targets):
            for cls, m in row.items():
                out.append((i, self.cols.position(cls), m))
        return sorted(out)

    def apply(self, f: Sequence[S], zero: S) -> list[S | None]:
        """``(T f)(V)`` for every row; None on non-interior rows.

        ``f`` is indexed by the column window.
        """
        out: list[S | None] = []
        for i, row in enumerate(self.targets):
            if not self.interior[i]:
                out.append(None)
                continue
            acc = zero
            for cls, m in row.items():
                v = f[self.cols.position(cls)]
                if v:
                    for _ in range(m):
                        acc = acc + v
            out.append(acc)
        return out

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "rows": [c.label() for c in self.rows],
            "cols": [c.label() for c in self.cols],
            "triplets": [list(t) for t in self.triplets()],
            "interior": self.interior,
        }


def _assemble(
    name: str,
    moduli: Moduli,
    rows: Window,
    cols: Window,
    place: Place,
    mats: Sequence[Mat2],
    progress: Callable[[], None] | None = None,
) -> HeckeMatrix:
    targets: list[Counter[BundleClass]] = []
    interior: list[bool] = []
    for cls in rows:
        g = moduli.representative(cls)
        row: Counter[BundleClass] = Counter()
        ok = True
        for m in mats:
            try:
                hit = moduli.canonicalize(g.right(place, m), cols.spec.gap)
            except OutOfWindow:
                ok = False
                continue
            if hit not in cols:
                ok = False
                continue
            row[hit] += 1
        targets.append(row)
        interior.append(ok)
        if progress is not None:
            progress()
    lost = interior.count(False)
    logger.info(
        "%s: %d x %d, %d interior rows, %d rows lose mass",
        name,
        len(rows),
        len(cols),
        len(rows) - lost,
        lost,
    )
    return HeckeMatrix(name, rows, cols, targets, interior)


def column_window(moduli: Moduli, det: DetLabel, gap: int) -> Window:
    return moduli.enumerate_window(WindowSpec(det, gap + COLUMN_MARGIN))


def hecke_matrix(
    moduli: Moduli,
    c: SimpleDivisor,
    rows: Window,
    progress: Callable[[], None] | None = None,
) -> HeckeMatrix:
    """``T_c`` from ``rows`` to the window of determinant ``L det(g_c)``."""
    det = det_add(moduli.curve, rows.spec.det, c.det_shift(moduli.curve))
    cols = column_window(moduli, det, rows.spec.gap)
    return _assemble(
        f"T[{c.label()}]", moduli, rows, cols, c.place, c.modifications(), progress
    )


def hecke_matrix_prime(
    moduli: Moduli,
    c: SimpleDivisor,
    rows: Window,
    progress: Callable[[], None] | None = None,
) -> HeckeMatrix:
    """``T'_c``: the sum over subsheaves ``V subset V'`` with ``V'/V = O_c``."""
    det = det_add(moduli.curve, rows.spec.det, c.det_shift_prime(moduli.curve))
    cols = column_window(moduli, det, rows.spec.gap)
    return _assemble(
        f"T'[{c.label()}]", moduli, rows, cols, c.place, c.submodifications(), progress
    )


def local_operator(
    moduli: Moduli, name: str, place: Place, mats: Sequence[Mat2], rows: Window
) -> HeckeMatrix:
    """The operator ``f -> sum_x f(V x)`` for explicit left coset representatives x."""
    curve = moduli.curve
    x = mats[0]
    shift = AdelicMatrix(curve, {place: x}, moduli.prec)
    det = det_add(curve, rows.spec.det, det_label(shift))
    cols = column_window(moduli, det, rows.spec.gap)
    return _assemble(name, moduli, rows, cols, place, mats)


# duality and twists


def dual_class(moduli: Moduli, cls: BundleClass, gap: int) -> BundleClass:
    """The class of ``V^dual``, whose matrix is ``theta(g)^-1``."""
    return moduli.canonicalize(moduli.representative(cls).dual(), gap)


def twist_class(moduli: Moduli, cls: BundleClass, label: DetLabel, gap: int) -> BundleClass:
    """The class of ``V (x) L``."""
    idele = line_bundle_idele(moduli.curve, label, moduli.prec)
    return moduli.canonicalize(moduli.representative(cls).scaled(idele), gap)


def tensor_twist(moduli: Moduli, window: Window, label: DetLabel) -> tuple[Window, list[int]]:
    """The permutation ``V -> V (x) L`` onto the window of determinant ``det L^2``.

    Returns:
        The target window and, per class, the position of its twist.
    """
    curve = moduli.curve
    det = det_add(curve, window.spec.det, det_add(curve, label, label))
    target = moduli.enumerate_window(WindowSpec(det, window.spec.gap))
    perm = [target.position(twist_class(moduli, c, label, window.spec.gap)) for c in window]
    return target, perm


def dual_window(moduli: Moduli, window: Window) -> tuple[Window, list[int]]:
    """The permutation ``V -> V^dual`` onto the window of determinant ``L^-1``."""
    det = det_neg(moduli.curve, window.spec.det)
    target = moduli.enumerate_window(WindowSpec(det, window.spec.gap))
    perm = [target.position(dual_class(moduli, c, window.spec.gap)) for c in window]
    return target, perm
