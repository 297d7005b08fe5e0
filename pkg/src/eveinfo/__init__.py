"""Eavesdropper information bounds for BB84-family QKD under coherent attacks."""

from eveinfo.bellcore import (
    BELL_LABELS,
    Basis,
    BellDiagonal,
    BellLabel,
    basis_states,
    bell_diagonal_entropy,
    bell_state,
    joint_outcome_distribution,
    parallel_probability,
)
from eveinfo.bounds import (
    CompositionCounts,
    NoCompositionInWindow,
    asymptotic_log_omega_per_bit,
    i_ab,
    i_eve_bb84,
    i_eve_six_state,
    log_omega_exact,
    maximizer_bb84,
    maximizer_six_state,
)
from eveinfo.schemes import (
    BasisEnsemble,
    DetectionProfile,
    Scheme,
    average_parallel_probability,
    composition_error_rate,
    detection_profile,
    expected_error_rate,
    sift_probability,
)
from eveinfo.sim import (
    DegenerateSample,
    SimConfig,
    SimResult,
    equivalence_trial,
    npab_basis_sequence,
    run_protocol,
)

__version__ = "0.1.0"
