"""Line bundles on C: Pic(C) as an extension of Pic(C-bar) by H^1(O).

A line bundle on C is an idele ``a-bar (1 + eps beta)``. Its label is the
class of ``a-bar`` in Pic(C-bar) together with the coordinate
``tau = sum_p Res_p(beta_p omega_0)`` of beta in ``H^1(O)``. On P^1 the
second part is absent because ``H^1(O) = 0``.
"""

from __future__ import annotations

from typing import Iterable
from typing import NamedTuple

from nilhecke.bundles.adelic import AdelicMatrix
from nilhecke.bundles.adelic import monomial_idele
from nilhecke.curves.base import Curve
from nilhecke.curves.base import PicLabel
from nilhecke.curves.base import Place
from nilhecke.errors import ConfigError
from nilhecke.rings.laurent import LaurentElement
from nilhecke.rings.laurent import LaurentSeries


class DetLabel(NamedTuple):
    """A class in Pic(C)."""

    pic: PicLabel
    tau: int | None = None

    @property
    def degree(self) -> int:
        return self.pic.degree

    def label(self) -> str:
        if self.pic.point is None:
            return str(self.pic.degree)
        return f"{self.pic.degree};{self.pic.point.label()};{self.tau or 0}"


def pic_c(curve: Curve, degrees: Iterable[int]) -> list[DetLabel]:
    """Every class of Pic(C) in the given degrees.

    On an elliptic curve each degree contributes ``|E(F_q)| * q`` classes.
    """
    labels = curve.pic_enumerate(degrees)
    if curve.genus == 0:
        return [DetLabel(lab) for lab in labels]
    return [DetLabel(lab, tau) for lab in labels for tau in range(curve.q)]


def det_add(curve: Curve, a: DetLabel, b: DetLabel) -> DetLabel:
    pic = curve.pic_add(a.pic, b.pic)
    if curve.genus == 0:
        return DetLabel(pic)
    return DetLabel(pic, (int(a.tau or 0) + int(b.tau or 0)) % curve.q)


def det_neg(curve: Curve, a: DetLabel) -> DetLabel:
    pic = curve.pic_neg(a.pic)
    if curve.genus == 0:
        return DetLabel(pic)
    return DetLabel(pic, (-int(a.tau or 0)) % curve.q)


def det_label(g: AdelicMatrix) -> DetLabel:
    """The class of ``det V`` for the bundle of g."""
    curve = g.curve
    pic = curve.divisor_class(g.det_divisor())
    if curve.genus == 0:
        return DetLabel(pic)
    return DetLabel(pic, g.det_tau())


def parse_det_label(curve: Curve, text: str) -> DetLabel:
    """Read ``"d"``, ``"d;P"`` or ``"d;P;tau"`` with P a place label.

    Raises:
        ConfigError: On malformed labels or unknown places.
    """
    parts = [s.strip() for s in text.split(";")]
    try:
        degree = int(parts[0])
        tau = int(parts[2]) % curve.q if len(parts) > 2 else 0
    except ValueError as e:
        msg = f"malformed determinant label {text!r}"
        raise ConfigError(msg) from e
    if curve.genus == 0:
        if len(parts) > 1:
            msg = f"determinant labels on P^1 are plain degrees, got {text!r}"
            raise ConfigError(msg)
        return DetLabel(PicLabel(degree))
    point = curve.place(parts[1]) if len(parts) > 1 else curve.aux_place()
    pic = curve.divisor_class(curve.line_bundle_divisor(PicLabel(degree, point)))
    return DetLabel(pic, tau)


def tau_series(curve: Curve, tau: int, prec: int) -> dict[Place, LaurentSeries]:
    """An eps-part beta at the auxiliary place with ``Res(beta omega_0) = tau``."""
    if curve.genus == 0 or tau % curve.q == 0:
        return {}
    aux = curve.aux_place()
    w = curve.omega_expansion(aux, 4)
    lead = w.coefficient(0)
    c = curve.field.div(tau % curve.q, lead)
    return {aux: LaurentSeries.monomial(curve.field, c, -1, prec)}


def line_bundle_idele(curve: Curve, label: DetLabel, prec: int) -> dict[Place, LaurentElement]:
    """An idele ``a-bar (1 + eps beta)`` representing the class ``label``."""
    f = curve.field
    idele = monomial_idele(curve, curve.line_bundle_divisor(label.pic), prec)
    for p, beta in tau_series(curve, int(label.tau or 0), prec).items():
        base = idele.get(p, LaurentElement.one(f, prec))
        idele[p] = base * LaurentElement(LaurentSeries.constant(f, 1, prec), beta)
    return idele


def two_torsion_twists(curve: Curve) -> list[DetLabel]:
    """Degree-0 classes L with ``L^2 = O``; twisting by them preserves det."""
    zero = det_label(AdelicMatrix.identity(curve, 8))
    return [lab for lab in pic_c(curve, [0]) if det_add(curve, lab, lab) == zero]


def square_classes(curve: Curve, degree: int) -> list[DetLabel]:
    """Representatives of degree-``degree`` classes modulo ``2 Pic(C)``.

    Every det class of that degree differs from exactly one representative
    by a square. Only even degrees reduce to degree 0.
    """
    labels = pic_c(curve, [degree])
    squares = {det_add(curve, a, a) for a in pic_c(curve, [0])}
    reps: list[DetLabel] = []
    covered: set[DetLabel] = set()
    for lab in labels:
        if lab in covered:
            continue
        reps.append(lab)
        covered |= {det_add(curve, lab, s) for s in squares}
    return reps
