"""Commutation of local Hecke elements for simple divisors at one point."""

from __future__ import annotations

import logging
from typing import Any
from typing import NamedTuple

from nilhecke.local.algebra import HeckeElement
from nilhecke.local.algebra import convolve
from nilhecke.local.algebra import verify_theta_invariance
from nilhecke.local.cosets import OrbitMemo
from nilhecke.local.cosets import orbit_memo
from nilhecke.local.divisor import SimpleDivisorLocal
from nilhecke.matrices.mat2 import Mat2
from nilhecke.rings.dual import DualScalar
from nilhecke.rings.laurent import LaurentElement


logger = logging.getLogger(__name__)


class LocalCommuteReport(NamedTuple):
    """Outcome of comparing ``h_c h_d`` with ``h_d h_c``."""

    q: int
    precision: int
    f_c: str
    f_d: str
    cosets: int
    weights: list[dict[str, object]]
    equal: bool
    stable: bool
    theta_invariant: bool
    confined: bool

    @property
    def ok(self) -> bool:
        return self.equal and self.stable and self.theta_invariant and self.confined

    def to_dict(self) -> dict[str, Any]:
        out = self._asdict()
        out["ok"] = self.ok
        return out


def confinement_candidates(c: SimpleDivisorLocal, d: SimpleDivisorLocal) -> list[Mat2]:
    """Inverses of the matrices bounding the support of ``h_c h_d``.

    These are ``diag(1, f_c f_d)`` and ``[[f_c, 0], [x, f_d]]`` (both orders)
    with ``x = eps * a``; any ``x`` in ``eps O`` reduces to a constant modulo
    ``(f_c, f_d)``.
    """
    field, prec = c.field, min(c.precision, d.precision)
    one = LaurentElement.one(field, prec)
    zero = LaurentElement.zero(field, prec)
    mats = [Mat2.diag(one, c.f_c * d.f_c)]
    for a in field.elements():
        x = LaurentElement.monomial(field, DualScalar.of(field, 0, a), 0, prec)
        mats.append(Mat2(c.f_c, zero, x, d.f_c))
        mats.append(Mat2(d.f_c, zero, x, c.f_c))
    return [m.inverse() for m in mats]


def support_confined(
    c: SimpleDivisorLocal, d: SimpleDivisorLocal, product: HeckeElement
) -> bool:
    """Whether every coset in the support meets one of the bounding classes."""
    cands = confinement_candidates(c, d)
    return all(any(u.contains(x) for x in cands) for u in product.terms)


def commute_pair(
    c: SimpleDivisorLocal, d: SimpleDivisorLocal, memo: OrbitMemo | None = orbit_memo
) -> tuple[HeckeElement, HeckeElement]:
    hc, hd = c.hecke_element(memo), d.hecke_element(memo)
    return convolve(hc, hd, memo), convolve(hd, hc, memo)


def verify_local_commutation(
    q: int, prec: int, fc: str, fd: str, residue_degree: int = 1
) -> LocalCommuteReport:
    """Compare ``h_c h_d`` and ``h_d h_c`` at truncation ``prec`` and ``prec + 1``."""
    c = SimpleDivisorLocal.parse(fc, q, prec, residue_degree)
    d = SimpleDivisorLocal.parse(fd, q, prec, residue_degree)
    cd, dc = commute_pair(c, d)

    c1 = SimpleDivisorLocal.parse(fc, q, prec + 1, residue_degree)
    d1 = SimpleDivisorLocal.parse(fd, q, prec + 1, residue_degree)
    # fresh memo so the re-run recomputes every orbit
    cd1, dc1 = commute_pair(c1, d1, OrbitMemo())

    report = LocalCommuteReport(
        q=q,
        precision=prec,
        f_c=c.text(),
        f_d=d.text(),
        cosets=len(cd.terms),
        weights=cd.describe(),
        equal=cd == dc,
        stable=cd1 == cd and dc1 == dc,
        theta_invariant=all(verify_theta_invariance(u) for u in cd.terms),
        confined=support_confined(c, d, cd),
    )
    logger.info(
        "local commutation f_c=%s f_d=%s: %d cosets, equal=%s stable=%s",
        report.f_c,
        report.f_d,
        report.cosets,
        report.equal,
        report.stable,
    )
    return report


def is_associative(a: HeckeElement, b: HeckeElement, c: HeckeElement) -> bool:
    return convolve(convolve(a, b), c) == convolve(a, convolve(b, c))
