"""Orthogonal (Bloch-sphere-averaged) moments and their normalized forms.

Raw moments of a bipartite state, functions of the singular values of T only:

    S2 = Tr(T T^t) / ((d1^2-1)(d2^2-1))
    S4 = 3 [2 Tr((T T^t)^2) + Tr(T T^t)^2] / ((d1^4-1)(d2^4-1))

Normalized so that a pure product state sits at (1, 1):

    R2 = Tr(T T^t) / ((d1-1)(d2-1))
    R4 = [2 Tr((T T^t)^2) + Tr(T T^t)^2] / (3 (d1-1)^2 (d2-1)^2)

which equal (d1+1)(d2+1) S2 and
(d1+1)(d2+1)(d1^2+1)(d2^2+1) / (9(d1-1)(d2-1)) S4 respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochDecomposition


@dataclass(frozen=True)
class MomentPoint:
    s2: float
    s4: float
    r2t: float
    r4t: float
    d1: int
    d2: int


def _dims_from_T(T: np.ndarray) -> tuple[int, int]:
    rows, cols = T.shape
    d1 = int(round(math.sqrt(rows + 1)))
    d2 = int(round(math.sqrt(cols + 1)))
    if d1 * d1 - 1 != rows or d2 * d2 - 1 != cols:
        raise ValueError(f"T shape {T.shape} is not (d1^2-1, d2^2-1)")
    return d1, d2


def s2_from_T(T) -> float:
    T = np.asarray(T, dtype=float)
    d1, d2 = _dims_from_T(T)
    return float(np.sum(T * T)) / ((d1**2 - 1) * (d2**2 - 1))


def s4_from_T(T) -> float:
    T = np.asarray(T, dtype=float)
    d1, d2 = _dims_from_T(T)
    g = T @ T.T
    tr2 = float(np.trace(g))
    tr4 = float(np.sum(g * g))
    return 3.0 * (2.0 * tr4 + tr2 * tr2) / ((d1**4 - 1) * (d2**4 - 1))


def normalized_point(deco: BlochDecomposition) -> MomentPoint:
    """Raw and normalized second/fourth moments of a decomposition."""
    T = deco.T
    d1, d2 = deco.d1, deco.d2
    g = T @ T.T
    tr2 = float(np.trace(g))
    tr4 = float(np.sum(g * g))
    r2t = tr2 / ((d1 - 1) * (d2 - 1))
    r4t = (2.0 * tr4 + tr2 * tr2) / (3.0 * (d1 - 1) ** 2 * (d2 - 1) ** 2)
    return MomentPoint(
        s2=tr2 / ((d1**2 - 1) * (d2**2 - 1)),
        s4=3.0 * (2.0 * tr4 + tr2 * tr2) / ((d1**4 - 1) * (d2**4 - 1)),
        r2t=r2t,
        r4t=r4t,
        d1=d1,
        d2=d2,
    )


def orthogonal_moment_single(purity: float, d: int, t: int) -> float:
    """t-th orthogonal moment of a single qudit of given purity.

    Zero for odd t; for even t equals
    |a|^t Gamma((d^2-1)/2) Gamma((t+1)/2) / (sqrt(pi) Gamma((d^2-1+t)/2))
    with |a|^2 = d * purity - 1 the squared Bloch length. Gamma ratios go
    through lgamma so d = 10, t = 10 stays finite.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if not (1.0 / d - 1e-12 <= purity <= 1.0 + 1e-12):
        raise ValueError(f"purity {purity} outside physical range [1/{d}, 1]")
    if t % 2 == 1:
        return 0.0
    alpha_sq = max(d * purity - 1.0, 0.0)
    n = d * d - 1
    log_ratio = (
        math.lgamma(n / 2.0)
        + math.lgamma((t + 1) / 2.0)
        - 0.5 * math.log(math.pi)
        - math.lgamma((n + t) / 2.0)
    )
    return alpha_sq ** (t / 2.0) * math.exp(log_ratio)
