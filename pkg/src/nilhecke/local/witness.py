"""A matrix separating the two orders of a non-simple Hecke product.

For a simple divisor c, the matrix ``M = [[f_c, 0], [eps, f_c^2]]`` lies in
``G(O) g_c^-1 G(O) g_c^-2 G(O)`` but not in ``G(O) g_c^-2 G(O) g_c^-1 G(O)``,
so the measures of ``g_c^-1`` and ``g_c^-2`` do not commute.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

from nilhecke.errors import PrecisionExhausted
from nilhecke.local.cosets import DoubleCoset
from nilhecke.local.cosets import double_coset
from nilhecke.local.cosets import left_coset_reps
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.local.lattices import product_window
from nilhecke.matrices.mat2 import Mat2
from nilhecke.matrices.mat2 import format_mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.laurent import LaurentElement


logger = logging.getLogger(__name__)

MIN_PRECISION = 6


class WitnessCertificate(NamedTuple):
    """Evidence for non-commutation."""

    matrix: str
    factors: tuple[str, str, str]
    factorization_ok: bool
    in_forward: bool
    in_reverse: bool
    pairs_checked: int

    @property
    def valid(self) -> bool:
        return self.factorization_ok and self.in_forward and not self.in_reverse


def witness_matrix(sd: SimpleDivisorLocal) -> Mat2:
    f = sd.f_c
    prec = sd.precision
    eps = LaurentElement.monomial(sd.field, DualScalar.of(sd.field, 0, 1), 0, prec)
    zero = LaurentElement.zero(sd.field, prec)
    return Mat2(f, zero, eps, f * f)


def _product_keys(first: DoubleCoset, second: DoubleCoset) -> tuple[set[bytes], int]:
    window = product_window(first.window, second.window)
    keys = set()
    pairs = 0
    for a in left_coset_reps(first):
        for b in left_coset_reps(second):
            keys.add(window.key(a * b))
            pairs += 1
    return keys, pairs


def noncommutation_witness(sd: SimpleDivisorLocal) -> WitnessCertificate:
    """Certify that ``M`` separates the two triple products.

    The forward membership is shown twice: by the explicit factorization
    ``diag(f_c, 1) [[1, 0], [eps, 1]] diag(1, f_c^2)`` and by enumeration.
    The reverse non-membership is shown by exhausting all pairs of left
    coset representatives.

    Raises:
        PrecisionExhausted: Below truncation 6.
    """
    if sd.precision < MIN_PRECISION:
        msg = f"witness needs truncation >= {MIN_PRECISION}, got {sd.precision}"
        raise PrecisionExhausted(msg)
    field, prec = sd.field, sd.precision
    m = witness_matrix(sd)
    one = LaurentElement.one(field, prec)
    eps = LaurentElement.monomial(field, DualScalar.of(field, 0, 1), 0, prec)

    left = sd.g_c_inverse()
    middle = Mat2.elementary(1, 0, eps)
    right = Mat2.diag(one, sd.f_c * sd.f_c)

    s1 = double_coset(sd.power_inverse(1))
    s2 = double_coset(sd.power_inverse(2))
    factorization_ok = (
        (left * middle * right).agrees(m)
        and middle.is_integral_unit()
        and s1.contains(left)
        and s2.contains(right)
    )

    window = product_window(s1.window, s2.window)
    key = window.key(m)
    forward, n_fwd = _product_keys(s1, s2)
    reverse, n_rev = _product_keys(s2, s1)
    cert = WitnessCertificate(
        matrix=format_mat2(m),
        factors=(format_mat2(left), format_mat2(middle), format_mat2(right)),
        factorization_ok=factorization_ok,
        in_forward=key in forward,
        in_reverse=key in reverse,
        pairs_checked=n_fwd + n_rev,
    )
    logger.info(
        "witness for f_c=%s: forward=%s reverse=%s (%d pairs)",
        sd.text(),
        cert.in_forward,
        cert.in_reverse,
        cert.pairs_checked,
    )
    return cert
