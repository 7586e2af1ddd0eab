"""Quadratic forms on coefficient vectors under the weakened gap condition.

The coefficient-side energy replacing sum |x_k|^2 is

    Q(x) = sum_{k in A1} |x_k|^2
         + sum_{k in A2 leads} [ |x_k + x_{k+1}|^2
                                 + (omega_{k+1} - omega_k)^2 (|x_k|^2 + |x_{k+1}|^2) ]

with the grouping fixed by the direct-inequality chain: both the paired
modulus and the gap-weighted sum sit inside the A2 term.  Q'(x) adds
|x'|^2 for one augmented exponent.  The matrix form is block diagonal:
scalar 1 for A1 indices and the 2x2 block [[1+d^2, 1], [1, 1+d^2]] with
d = omega_{k+1} - omega_k for each A2 pair (eigenvalues d^2 and 2+d^2).
Band-masked indices are excluded from the matrix, which amounts to the
principal submatrix on the active set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructuralError, ValidationError
from .exponents import BandMask, ExponentSequence, GapClassification, classify
from .sums import AugmentedExpSum


def _check_consistency(cls: GapClassification, seq: ExponentSequence) -> None:
    recomputed = classify(seq)
    if (
        recomputed.a1 != cls.a1
        or recomputed.a2_leads != cls.a2_leads
        or recomputed.partners != cls.partners
    ):
        raise ValidationError(
            "classification does not match the sequence",
            details={"expected": recomputed.to_dict(), "given": cls.to_dict()},
        )


def q_form(cls: GapClassification, seq: ExponentSequence, coeffs) -> float:
    """Scalar quadratic form Q on a coefficient vector."""
    _check_consistency(cls, seq)
    x = tuple(complex(c) for c in coeffs)
    if len(x) != len(seq):
        raise StructuralError(
            f"coefficient count {len(x)} does not match sequence length {len(seq)}"
        )
    terms = []
    for k in sorted(cls.a1):
        terms.append(abs(x[k]) ** 2)
    for k in sorted(cls.a2_leads):
        p = cls.partners[k]
        d = seq.omegas[p] - seq.omegas[k]
        terms.append(abs(x[k] + x[p]) ** 2)
        terms.append(d * d * (abs(x[k]) ** 2 + abs(x[p]) ** 2))
    return math.fsum(terms)


def q_prime(aug: AugmentedExpSum, cls: GapClassification, seq: ExponentSequence) -> float:
    """Q'(x) = |x'|^2 + Q(x)."""
    return abs(aug.x_prime) ** 2 + q_form(cls, seq, aug.base.coeffs)


@dataclass(eq=False)
class QMatrix:
    """Dense Hermitian matrix form of Q restricted to the active indices."""

    matrix: np.ndarray
    active: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_rows(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.matrix]


def q_matrix(cls: GapClassification, seq: ExponentSequence, mask: BandMask | None = None) -> QMatrix:
    """Assemble the block matrix of Q over the active (band-admissible) indices.

    A pair with only one active member contributes the diagonal entry
    1 + d^2 (the principal submatrix of the full block).
    """
    _check_consistency(cls, seq)
    if mask is None:
        active = tuple(range(len(seq)))
    else:
        if len(mask.admissible) != len(seq):
            raise StructuralError("band mask length does not match sequence")
        active = mask.active_indices()
    pos = {k: i for i, k in enumerate(active)}
    m = np.zeros((len(active), len(active)), dtype=float)
    for k in cls.a1:
        if k in pos:
            m[pos[k], pos[k]] = 1.0
    for k in cls.a2_leads:
        p = cls.partners[k]
        d = seq.omegas[p] - seq.omegas[k]
        if k in pos and p in pos:
            i, j = pos[k], pos[p]
            m[i, i] = 1.0 + d * d
            m[j, j] = 1.0 + d * d
            m[i, j] = 1.0
            m[j, i] = 1.0
        elif k in pos:
            m[pos[k], pos[k]] = 1.0 + d * d
        elif p in pos:
            m[pos[p], pos[p]] = 1.0 + d * d
    return QMatrix(matrix=m, active=active)
