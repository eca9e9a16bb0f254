"""Geometry of bipartite correlation matrices and randomized-measurement moments."""

from .bloch import (
    BipartiteState,
    BlochDecomposition,
    CorrelationSpectrum,
    OperatorBasis,
    correlation_spectrum,
    decompose,
    gell_mann_basis,
    max_entangled_state,
    pure_state,
    reconstruct,
    state_from_json,
    state_to_json,
)
from .constructions import (
    EquiangularSet,
    KinkCoverage,
    MubFamily,
    corollary1_family,
    kink_coverage,
    mub_prime,
    mub_trace_constraints,
    pad_sic,
    qubit_trio,
    sic_fiducial_set,
    theorem2_state,
    theorem3_state,
)
from .criteria import SchmidtVerdict, detect_generalized, detect_schmidt, schmidt_bound
from .landscape import (
    BoundaryCurves,
    classify,
    emit_curves,
    f_lb,
    f_ub,
    g_lb,
    lower_boundary_k,
    region_upper_k,
)
from .moments import MomentPoint, normalized_point, orthogonal_moment_single, s2_from_T, s4_from_T
from .observables import (
    GluingTable,
    ObservableSpectrum,
    a_coeff,
    gluing_counts,
    power_trace,
    spectrum_full,
    spectrum_rank4,
)
from .simulate import (
    SimulationConfig,
    SimulationResult,
    criterion_statistic,
    estimate_moments,
    haar_unitary,
    isotropic_state,
    run_budget_study,
    sample_setting,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
