"""Splitting the cuspidal kernel along the orbit buckets.

The kernel is the internal direct sum of its zero and nilpotent parts and
the non-split semisimple part, which is strongly cuspidal; the split
semisimple buckets meet it trivially. The rational projectors are checked
on every indicator function of the window.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any
from typing import NamedTuple

from nilhecke.bundles.window import Moduli
from nilhecke.constant_term.kernel import CuspidalReport
from nilhecke.constant_term.kernel import in_span
from nilhecke.rings.linalg import rational_rank
from nilhecke.rings.linalg import rational_rref
from nilhecke.spectral.fourier import FourierProjector
from nilhecke.spectral.fourier import galois_buckets


logger = logging.getLogger(__name__)


class DecompositionReport(NamedTuple):
    """Bucket dimensions of one cuspidal kernel and the checks on them."""

    det: str
    gap: int
    kernel_dim: int
    buckets: dict[str, int]
    keys: dict[str, int]
    complete: bool
    orthogonal: bool
    stable: bool
    direct_sum: bool
    split_free: bool
    strongly_cuspidal: bool

    @property
    def ok(self) -> bool:
        return all(
            (
                self.complete,
                self.orthogonal,
                self.stable,
                self.direct_sum,
                self.split_free,
                self.strongly_cuspidal,
            )
        )

    def to_dict(self) -> dict[str, Any]:
        return self._asdict() | {"ok": self.ok}


def independent(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    """A basis of the span, in reduced echelon form."""
    return rational_rref(vectors)[0]


def unit_vectors(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]


def projector_identities(
    projector: FourierProjector, groups: dict[str, list[Any]]
) -> tuple[bool, bool, dict[str, list[list[Fraction]]]]:
    """``sum_a P_a = 1`` and ``P_a P_b = delta_ab P_a`` on every indicator.

    Returns:
        ``(complete, orthogonal, images)`` with ``images[a]`` the ``P_a e_i``.
    """
    units = unit_vectors(len(projector.window))
    images = {
        name: [projector.project_rational(e, keys) for e in units]
        for name, keys in groups.items()
    }
    complete = all(
        [sum(col, Fraction(0)) for col in zip(*(images[a][i] for a in groups))] == e
        for i, e in enumerate(units)
    )
    orthogonal = True
    for a, keys in groups.items():
        for b in groups:
            for image in images[b]:
                twice = projector.project_rational(image, keys)
                expected = image if a == b else [Fraction(0)] * len(image)
                orthogonal &= twice == expected
    return complete, orthogonal, images


def decompose_kernel(moduli: Moduli, report: CuspidalReport) -> DecompositionReport:
    """Project the kernel onto every bucket and check the direct sum.

    Raises:
        CharacteristicTwo: If p = 2.
    """
    window = report.window
    projector = FourierProjector(moduli, window)
    groups = galois_buckets(moduli.curve.field)
    complete, orthogonal, images = projector_identities(projector, groups)

    parts = {
        name: independent([projector.project_rational(v, keys) for v in report.basis])
        for name, keys in groups.items()
    }
    dims = {name: len(v) for name, v in parts.items()}
    stable = all(in_span(v, report.basis) for v in parts.values())
    union = [v for name in ("zero", "nilpotent", "nonsplit") for v in parts[name]]
    direct_sum = (
        dims["zero"] + dims["nilpotent"] + dims["nonsplit"] == report.kernel_dim
        and rational_rank(union) == report.kernel_dim
    )
    strongly = in_span(parts["nonsplit"] + images["nonsplit"], report.strongly_cuspidal)
    keys = {key.label(): projector.bucket_dimension(report.basis, [key]) for key in projector.keys}
    out = DecompositionReport(
        window.spec.det.label(),
        window.spec.gap,
        report.kernel_dim,
        dims,
        keys,
        complete,
        orthogonal,
        stable,
        direct_sum,
        dims["split"] == 0,
        strongly,
    )
    logger.info(
        "kernel of %s gap %d: dim %d = %d zero + %d nilpotent + %d non-split",
        out.det,
        out.gap,
        out.kernel_dim,
        dims["zero"],
        dims["nilpotent"],
        dims["nonsplit"],
    )
    return out
