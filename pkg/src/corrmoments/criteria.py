"""Schmidt-number detection from the correlation matrix.

A state of Schmidt number at most k obeys

    ||T||_tr <= sqrt((d1-1)(d2-1)) + sqrt(d1 d2) (k-1)

(for d1 = d2 = d the right-hand side is k d - 1); exceeding the bound
certifies Schmidt number >= k+1. The generalized variant augments T with the
local Bloch vectors, C = [[1, beta^T], [alpha, T]], scaled by
D_x = diag(x, 1, ..., 1):

    ||D_x C D_y||_tr <= sqrt((d1-1+x^2)(d2-1+y^2)) + sqrt(d1 d2) (k-1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qla
from .bloch import BipartiteState, BlochDecomposition, decompose, gell_mann_basis

# detection requires strict excess; ties within this tolerance are negative
TIE_TOL = 1e-9


@dataclass(frozen=True)
class SchmidtVerdict:
    trace_norm_value: float
    bound: float
    k_tested: int
    detected: bool
    margin: float


def schmidt_bound(d1: int, d2: int, k: int) -> float:
    """Trace-norm bound for states of Schmidt number <= k."""
    if not 1 <= k <= min(d1, d2):
        raise ValueError(f"k must satisfy 1 <= k <= min(d1, d2), got k={k}")
    return float(np.sqrt((d1 - 1) * (d2 - 1)) + np.sqrt(d1 * d2) * (k - 1))


def _verdict(value: float, bound: float, k: int) -> SchmidtVerdict:
    margin = value - bound
    return SchmidtVerdict(value, bound, k, margin > TIE_TOL, margin)


def detect_schmidt(deco: BlochDecomposition, k: int) -> SchmidtVerdict:
    """Test ||T||_tr against the Schmidt-number-k bound."""
    bound = schmidt_bound(deco.d1, deco.d2, k)
    return _verdict(qla.trace_norm(deco.T), bound, k)


def detect_generalized(state: BipartiteState, k: int, x: float, y: float) -> SchmidtVerdict:
    """Augmented-matrix criterion with weights x, y >= 0 on the local parts.

    x = y = 0 reduces to detect_schmidt; large x, y never detect (the bound
    diverges while the matrix stays bounded).
    """
    if x < 0 or y < 0:
        raise ValueError("x and y must be non-negative")
    d1, d2 = state.d1, state.d2
    bound = np.sqrt((d1 - 1 + x * x) * (d2 - 1 + y * y)) + np.sqrt(d1 * d2) * (k - 1)
    if not 1 <= k <= d1:
        raise ValueError(f"k must satisfy 1 <= k <= min(d1, d2), got k={k}")
    deco = decompose(state, gell_mann_basis(d1), gell_mann_basis(d2))
    c = np.zeros((d1 * d1, d2 * d2))
    c[0, 0] = 1.0
    c[0, 1:] = deco.beta
    c[1:, 0] = deco.alpha
    c[1:, 1:] = deco.T
    c[0, :] *= x
    c[:, 0] *= y
    return _verdict(qla.trace_norm(c), float(bound), k)
