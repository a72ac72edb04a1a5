"""Global identities between Hecke operators on interior rows."""

from __future__ import annotations

import logging
from collections import Counter
from typing import Any
from typing import NamedTuple

from nilhecke.bundles.pic import DetLabel
from nilhecke.bundles.pic import det_neg
from nilhecke.bundles.window import BundleClass
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.errors import InteriorEmpty
from nilhecke.errors import OutOfWindow
from nilhecke.hecke.divisor import SimpleDivisor
from nilhecke.hecke.operators import COLUMN_MARGIN
from nilhecke.hecke.operators import HeckeMatrix
from nilhecke.hecke.operators import dual_class
from nilhecke.hecke.operators import hecke_matrix
from nilhecke.hecke.operators import hecke_matrix_prime
from nilhecke.hecke.operators import local_operator
from nilhecke.hecke.operators import twist_class
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.local.cosets import double_coset
from nilhecke.local.cosets import left_coset_reps
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.laurent import LaurentElement


logger = logging.getLogger(__name__)


class GlobalCommuteReport(NamedTuple):
    """Outcome of comparing two composite operators row by row."""

    first: str
    second: str
    rows: int
    interior: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return self.interior > 0 and not self.mismatches

    def to_dict(self) -> dict[str, Any]:
        return {
            "first": self.first,
            "second": self.second,
            "rows": self.rows,
            "interior": self.interior,
            "mismatches": self.mismatches,
            "ok": self.ok,
        }


def compose(a: HeckeMatrix, b: HeckeMatrix) -> tuple[list[Counter[BundleClass]], list[bool]]:
    """Rows of ``A B``; a row is interior iff it and all rows it reaches in B are."""
    targets = []
    interior = []
    for i, row in enumerate(a.targets):
        acc: Counter[BundleClass] = Counter()
        ok = a.interior[i]
        for w, m in row.items():
            if w not in b.rows:
                ok = False
                break
            j = b.rows.position(w)
            if not b.interior[j]:
                ok = False
                break
            for u, n in b.targets[j].items():
                acc[u] += m * n
        targets.append(acc)
        interior.append(ok)
    return targets, interior


def compare_products(
    name_ab: str,
    ab: tuple[list[Counter[BundleClass]], list[bool]],
    name_ba: str,
    ba: tuple[list[Counter[BundleClass]], list[bool]],
    rows: Window,
) -> GlobalCommuteReport:
    """Row-by-row equality on rows interior for both products.

    Raises:
        InteriorEmpty: If no row is interior for both.
    """
    both = [i for i in range(len(rows)) if ab[1][i] and ba[1][i]]
    if not both:
        msg = f"no interior rows for {name_ab} vs {name_ba} on gap {rows.spec.gap}"
        raise InteriorEmpty(msg)
    bad = [rows[i].label() for i in both if ab[0][i] != ba[0][i]]
    report = GlobalCommuteReport(name_ab, name_ba, len(rows), len(both), bad)
    logger.info(
        "%s vs %s: %d interior rows, %d mismatches", name_ab, name_ba, len(both), len(bad)
    )
    return report


def verify_global_commutation(
    moduli: Moduli, c: SimpleDivisor, d: SimpleDivisor, rows: Window
) -> GlobalCommuteReport:
    """``T_c T_d = T_d T_c`` on rows interior for both products."""
    tc = hecke_matrix(moduli, c, rows)
    td = hecke_matrix(moduli, d, rows)
    tc_then = hecke_matrix(moduli, d, tc.cols)
    td_then = hecke_matrix(moduli, c, td.cols)
    return compare_products(
        f"{tc.name}{tc_then.name}",
        compose(tc, tc_then),
        f"{td.name}{td_then.name}",
        compose(td, td_then),
        rows,
    )


def square_operator(moduli: Moduli, c: SimpleDivisor, rows: Window) -> HeckeMatrix:
    """The sum over the double coset of ``diag(f_c^-2, 1)``, a non-simple modification."""
    f = c.local.field
    one = LaurentElement.one(f, c.precision)
    inv = c.f_c.inverse()
    coset = double_coset(Mat2.diag(inv * inv, one))
    reps = left_coset_reps(coset)
    return local_operator(moduli, f"T[{c.place.label()}:f^2]", c.place, reps, rows)


def verify_square_commutation(
    moduli: Moduli, c: SimpleDivisor, d: SimpleDivisor, rows: Window
) -> GlobalCommuteReport:
    """Compare ``T_c`` against the operator of the double coset of ``g_d^2``.

    Nothing forces these to commute; the report records what the window shows.
    """
    tc = hecke_matrix(moduli, c, rows)
    sq = square_operator(moduli, d, rows)
    tc_then = square_operator(moduli, d, tc.cols)
    sq_then = hecke_matrix(moduli, c, sq.cols)
    return compare_products(
        f"{tc.name}{tc_then.name}",
        compose(tc, tc_then),
        f"{sq.name}{sq_then.name}",
        compose(sq, sq_then),
        rows,
    )


class IdentityReport(NamedTuple):
    """Row-wise comparison of one operator identity."""

    name: str
    checked: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.mismatches

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "mismatches": self.mismatches,
            "ok": self.ok,
        }


def _finish(name: str, checked: int, bad: list[str]) -> IdentityReport:
    if not checked:
        msg = f"{name}: no interior rows to compare"
        raise InteriorEmpty(msg)
    logger.info("%s: %d rows, %d mismatches", name, checked, len(bad))
    return IdentityReport(name, checked, bad)


def verify_duality(moduli: Moduli, c: SimpleDivisor, rows: Window) -> IdentityReport:
    """``T_c = D T'_c D`` with ``D f(V) = f(V^dual)``.

    Row V of ``T_c`` must be the dual of row ``V^dual`` of ``T'_c``.
    """
    tc = hecke_matrix(moduli, c, rows)
    gap = rows.spec.gap
    dual_rows = moduli.enumerate_window(
        rows.spec._replace(det=det_neg(moduli.curve, rows.spec.det))
    )
    tp = hecke_matrix_prime(moduli, c, dual_rows)
    checked, bad = 0, []
    for i, cls in enumerate(rows):
        j = dual_rows.position(dual_class(moduli, cls, gap))
        if not (tc.interior[i] and tp.interior[j]):
            continue
        checked += 1
        dualized: Counter[BundleClass] = Counter()
        for w, m in tp.targets[j].items():
            dualized[dual_class(moduli, w, gap + COLUMN_MARGIN)] += m
        if dualized != tc.targets[i]:
            bad.append(cls.label())
    return _finish(f"duality {c.label()}", checked, bad)


def verify_tensor_identity(moduli: Moduli, c: SimpleDivisor, rows: Window) -> IdentityReport:
    """``T'_c f(V) = (T_c f)(V(-c))``, with ``V(-c)`` the twist by the idele ``f_c``."""
    tp = hecke_matrix_prime(moduli, c, rows)
    gap = rows.spec.gap
    shifted = [moduli.representative(cls).scaled({c.place: c.f_c}) for cls in rows]
    twisted_classes = [moduli.canonicalize(g, gap) for g in shifted]
    twisted_rows = moduli.enumerate_window(rows.spec._replace(det=twisted_classes[0].det))
    tc = hecke_matrix(moduli, c, twisted_rows)
    checked, bad = 0, []
    for i, cls in enumerate(rows):
        j = twisted_rows.position(twisted_classes[i])
        if not (tp.interior[i] and tc.interior[j]):
            continue
        checked += 1
        if tp.targets[i] != tc.targets[j]:
            bad.append(cls.label())
    return _finish(f"tensor identity {c.label()}", checked, bad)


def verify_twist_commutation(
    moduli: Moduli, c: SimpleDivisor, rows: Window, label: DetLabel
) -> IdentityReport:
    """``T_c`` commutes with ``f -> f(. (x) L)``: twisting row V twists its targets."""
    tc = hecke_matrix(moduli, c, rows)
    gap = rows.spec.gap
    twisted = [twist_class(moduli, cls, label, gap) for cls in rows]
    target_rows = moduli.enumerate_window(rows.spec._replace(det=twisted[0].det))
    tt = hecke_matrix(moduli, c, target_rows)
    checked, bad = 0, []
    for i, cls in enumerate(rows):
        j = target_rows.position(twisted[i])
        if not (tc.interior[i] and tt.interior[j]):
            continue
        moved: Counter[BundleClass] = Counter()
        try:
            for w, m in tc.targets[i].items():
                moved[twist_class(moduli, w, label, gap + COLUMN_MARGIN)] += m
        except OutOfWindow:
            continue
        checked += 1
        if moved != tt.targets[j]:
            bad.append(cls.label())
    return _finish(f"twist {label.label()} with {c.label()}", checked, bad)


def coset_count(c: SimpleDivisor) -> tuple[int, int]:
    """``(|P^1(A(c))| listed, left cosets found by orbit exploration)``."""
    local: SimpleDivisorLocal = c.local
    return len(c.coset_matrices()), len(left_coset_reps(local.double_coset()))
