"""Finite-shot randomized-measurement simulation on isotropic states.

Protocol: draw M Haar pairs (U_A, U_B), measure the rank-4 observable's
eigenbasis locally K times per pair, form the outcome products a_i a_j, and
estimate the t-th powers of the per-setting expectation with U-statistics
over distinct shots (plug-in powers are biased at finite K). Averaging over
settings and applying the product-state normalization gives estimates of
(R2, R4); the criterion statistic is the signed distance of the measured
point below the Schmidt-number-k lower boundary. The rep-ensemble standard
deviation of that statistic scales like 1/sqrt(M), which extrapolates to the
number of settings needed for a 3-sigma violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import BipartiteState, max_entangled_state
from .landscape import detection_onset_x, lower_boundary_k, purity_cap_x
from .observables import ObservableSpectrum, spectrum_rank4

DEFAULT_M_VALUES = (10, 30, 100, 300, 1000)


@dataclass(frozen=True)
class SimulationConfig:
    d: int
    p: float
    M: int
    K: int
    reps: int
    k_target: int
    seed: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if self.K < 4:
            raise ValueError(f"K must be >= 4 (fourth-order U-statistic), got {self.K}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 1 <= self.k_target <= self.d:
            raise ValueError(f"k_target must be in 1..d, got {self.k_target}")


@dataclass(frozen=True)
class SimulationResult:
    d: int
    p: float
    k: int
    M: int
    K: int
    reps: int
    r2_mean: float
    r2_std: float
    r4_mean: float
    r4_std: float
    stat_mean: float
    stat_std: float
    m_star: float
    total_measurements: float


def isotropic_state(d: int, p: float) -> BipartiteState:
    """(1-p) |phi+><phi+| + p/d^2 identity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rho = (1.0 - p) * max_entangled_state(d).rho + p / d**2 * np.eye(d * d)
    return BipartiteState(d, d, rho)


def isotropic_moments(d: int, p: float) -> tuple[float, float]:
    """Exact (R2, R4) of the isotropic state (all singular values 1-p)."""
    r2 = (1.0 - p) ** 2 * (d + 1) / (d - 1)
    return r2, (d * d + 1) / (3.0 * (d * d - 1)) * r2 * r2


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _setting_probabilities(state: BipartiteState, u_a, u_b) -> np.ndarray:
    w = np.kron(u_a, u_b)
    probs = np.einsum("ij,jk,ik->i", w, state.rho, w.conj()).real
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {probs.sum()}, expected 1")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_setting(
    state: BipartiteState,
    spectrum: ObservableSpectrum,
    K: int,
    rng: np.random.Generator,
    unitaries: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """K outcome products a_i a_j from one random local-unitary setting.

    Products are complex when the observable has a complex spectrum. Pass
    `unitaries` to pin the setting (used by tests).
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    d = state.d1
    if spectrum.d != d or state.d2 != d:
        raise ValueError("observable dimension must match both local dimensions")
    if unitaries is None:
        unitaries = (haar_unitary(d, rng), haar_unitary(d, rng))
    probs = _setting_probabilities(state, *unitaries)
    vals = np.outer(spectrum.as_array(), spectrum.as_array()).ravel()
    counts = rng.multinomial(K, probs)
    return np.repeat(vals, counts)


def unbiased_power_means(outcomes: np.ndarray, t: int) -> complex:
    """Unbiased estimate of (mean of the distribution)^t from iid outcomes.

    Elementary symmetric polynomial of degree t over distinct shots divided
    by C(K, t); unbiased for any K >= t, unlike the plug-in (sample mean)^t.
    """
    x = np.asarray(outcomes)
    k = x.size
    if t < 1 or t > 4:
        raise ValueError("t must be in 1..4")
    if k < t:
        raise ValueError(f"need at least {t} outcomes, got {k}")
    p1 = np.sum(x)
    if t == 1:
        return complex(p1 / k)
    p2 = np.sum(x**2)
    e2 = (p1 * p1 - p2) / 2.0
    if t == 2:
        return complex(e2 / math.comb(k, 2))
    p3 = np.sum(x**3)
    e3 = (e2 * p1 - p1 * p2 + p3) / 3.0
    if t == 3:
        return complex(e3 / math.comb(k, 3))
    p4 = np.sum(x**4)
    e4 = (e3 * p1 - e2 * p2 + p1 * p3 - p4) / 4.0
    return complex(e4 / math.comb(k, 4))


def moment_normalizations(d1: int, d2: int) -> tuple[float, float]:
    """Prefactors taking raw unitary moments to the product-state-at-(1,1) scale."""
    n2 = (d1 + 1) * (d2 + 1)
    n4 = (d1 + 1) * (d2 + 1) * (d1**2 + 1) * (d2**2 + 1) / (9.0 * (d1 - 1) * (d2 - 1))
    return n2, n4


def estimate_moments_complex(
    state: BipartiteState,
    spectrum: ObservableSpectrum,
    M: int,
    K: int,
    rng: np.random.Generator,
) -> tuple[complex, complex]:
    """(R2, R4) estimates kept complex (imaginary parts are pure noise)."""
    if K < 4:
        raise ValueError(f"K must be >= 4 for the fourth moment, got {K}")
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    u2_sum = 0.0 + 0.0j
    u4_sum = 0.0 + 0.0j
    for _ in range(M):
        outcomes = sample_setting(state, spectrum, K, rng)
        u2_sum += unbiased_power_means(outcomes, 2)
        u4_sum += unbiased_power_means(outcomes, 4)
    n2, n4 = moment_normalizations(state.d1, state.d2)
    return n2 * u2_sum / M, n4 * u4_sum / M


def estimate_moments(
    state: BipartiteState,
    spectrum: ObservableSpectrum,
    M: int,
    K: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Normalized (R2, R4) estimates, real parts."""
    r2, r4 = estimate_moments_complex(state, spectrum, M, K, rng)
    return r2.real, r4.real


@dataclass(frozen=True)
class CriterionResult:
    """Signed distance below the SN-k lower boundary, plus the R2-only flag.

    statistic > 0 is evidence for Schmidt number >= k+1; r2_only_detect means
    the measured R2 alone already exceeds the largest value any SN-k state
    can reach (purity cap), so no fourth moment is needed.
    """

    statistic: float
    applicable: bool
    r2_only_detect: bool
    onset_x: float
    cap_x: float


def criterion_statistic(r2_hat: float, r4_hat: float, d: int, k: int) -> CriterionResult:
    cap = purity_cap_x(d, d, k)
    onset = detection_onset_x(d, d, k)
    r2_only = r2_hat > cap
    if 0.0 <= r2_hat <= cap:
        stat = lower_boundary_k(r2_hat, d, d, k) - r4_hat
        return CriterionResult(stat, True, r2_only, onset, cap)
    return CriterionResult(math.nan, False, r2_only, onset, cap)


def saturated_statistic(r2_hat: float, r4_hat: float, d: int, k: int) -> float:
    """Criterion statistic with the boundary evaluated at r2 clipped into domain.

    Shot noise can push the measured R2 past the purity cap (where the
    boundary function is undefined) even though such a rep is conclusive
    evidence by itself; saturating the boundary there keeps every repetition
    a finite number, which the 1/sqrt(M) dispersion fit needs. Inside the
    domain this equals criterion_statistic.
    """
    cap = purity_cap_x(d, d, k)
    return lower_boundary_k(min(max(r2_hat, 0.0), cap), d, d, k) - r4_hat


def detection_window(d: int, k: int) -> tuple[float, float]:
    """Isotropic noise range (p_min, p_max) where the two-moment test is needed.

    Below p_min the measured R2 alone refutes SN <= k; above p_max the
    isotropic point sits on the SN-k lower boundary and nothing is detected.
    """
    p_max = 1.0 - (k * d - 1.0) / (d * d - 1.0)
    p_min = 1.0 - math.sqrt(purity_cap_x(d, d, k) * (d - 1.0) / (d + 1.0))
    return max(p_min, 0.0), p_max


@dataclass(frozen=True)
class BudgetStudy:
    rows: tuple[SimulationResult, ...]
    p_min: float
    p_max: float
    m_star: float
    total_measurements: float
    window_empty: bool


def _rep_statistics(d, p, k, m, shots, reps, seed, stream_key):
    state = isotropic_state(d, p)
    spectrum = spectrum_rank4(d)
    r2s, r4s, stats = [], [], []
    for rep in range(reps):
        rng = np.random.default_rng([seed, *stream_key, rep])
        r2, r4 = estimate_moments(state, spectrum, m, shots, rng)
        r2s.append(r2)
        r4s.append(r4)
        stats.append(saturated_statistic(r2, r4, d, k))
    return np.array(r2s), np.array(r4s), np.array(stats)


def run_single(cfg: SimulationConfig, grid_index: int = 0) -> SimulationResult:
    """One protocol configuration; dispersion across its reps."""
    r2s, r4s, stats = _rep_statistics(
        cfg.d, cfg.p, cfg.k_target, cfg.M, cfg.K, cfg.reps, cfg.seed, (grid_index, 0)
    )
    return SimulationResult(
        d=cfg.d,
        p=cfg.p,
        k=cfg.k_target,
        M=cfg.M,
        K=cfg.K,
        reps=cfg.reps,
        r2_mean=float(np.mean(r2s)),
        r2_std=float(np.std(r2s)),
        r4_mean=float(np.mean(r4s)),
        r4_std=float(np.std(r4s)),
        stat_mean=float(np.nanmean(stats)) if not np.all(np.isnan(stats)) else math.nan,
        stat_std=float(np.nanstd(stats)) if not np.all(np.isnan(stats)) else math.nan,
        m_star=math.nan,
        total_measurements=math.nan,
    )


def run_budget_study(
    d: int,
    p: float,
    k_target: int,
    m_values: tuple[int, ...] = DEFAULT_M_VALUES,
    shots: int = 100,
    reps: int = 100,
    seed: int = 0,
    grid_index: int = 0,
) -> BudgetStudy:
    """Fit stat_std = c/sqrt(M) over the M grid and extrapolate to 3 sigma.

    m_star is the smallest M with stat_mean / (c/sqrt(M)) >= 3, taking
    stat_mean from the largest-M ensemble; the total measurement budget is
    m_star * K. An empty window (stat_mean <= 0) reports infinite budget.
    """
    rows = []
    per_m = []
    for mi, m in enumerate(sorted(m_values)):
        r2s, r4s, stats = _rep_statistics(d, p, k_target, m, shots, reps, seed, (grid_index, mi))
        per_m.append((m, stats))
        rows.append(
            SimulationResult(
                d=d,
                p=p,
                k=k_target,
                M=m,
                K=shots,
                reps=reps,
                r2_mean=float(np.mean(r2s)),
                r2_std=float(np.std(r2s)),
                r4_mean=float(np.mean(r4s)),
                r4_std=float(np.std(r4s)),
                stat_mean=float(np.nanmean(stats)) if not np.all(np.isnan(stats)) else math.nan,
                stat_std=float(np.nanstd(stats)) if not np.all(np.isnan(stats)) else math.nan,
                m_star=math.nan,
                total_measurements=math.nan,
            )
        )
    # constrained log-log fit of the 1/sqrt(M) dispersion model
    logs = [
        math.log(row.stat_std) + 0.5 * math.log(row.M)
        for row in rows
        if row.stat_std > 0 and not math.isnan(row.stat_std)
    ]
    stat_mean = rows[-1].stat_mean
    if logs and not math.isnan(stat_mean) and stat_mean > 0:
        c = math.exp(sum(logs) / len(logs))
        m_star = float(math.ceil((3.0 * c / stat_mean) ** 2))
        total = m_star * shots
        window_empty = False
    else:
        m_star = math.inf
        total = math.inf
        window_empty = True
    rows = [
        SimulationResult(
            **{
                **row.__dict__,
                "m_star": m_star,
                "total_measurements": total,
            }
        )
        for row in rows
    ]
    p_min, p_max = detection_window(d, k_target)
    return BudgetStudy(tuple(rows), p_min, p_max, m_star, total, window_empty)
