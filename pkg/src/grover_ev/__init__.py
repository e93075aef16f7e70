"""Grover search simulator and planner for expectation-value quantum computers."""

from .constants import EQUIV_ATOL, EXACT_ATOL, MAX_QUBITS, NORM_ATOL
from .core import (
    MarkedSet,
    OracleLedger,
    StateVector,
    apply_diffusion,
    apply_grover,
    apply_oracle,
    closed_form_state,
    grover_angle,
    new_uniform,
    qubit_values,
)
from .filtering import (
    FilterState,
    SearchFailure,
    SearchResult,
    apply_correlation,
    averaged_ev,
    eval_g,
    extract_location,
    g_schedule_cost,
)
from .measurement import (
    CorrelationInfo,
    EnsembleModel,
    RunRecord,
    decide_sign,
    exact_ev,
    measure_all,
    sampled_ev,
    sign_error_rate,
)
from .planner import (
    TruncationPlan,
    attenuation,
    m_standard,
    m_truncated,
    m_truncated_estimate,
    make_plan,
)

__all__ = [
    "EQUIV_ATOL",
    "EXACT_ATOL",
    "MAX_QUBITS",
    "NORM_ATOL",
    "MarkedSet",
    "OracleLedger",
    "StateVector",
    "apply_diffusion",
    "apply_grover",
    "apply_oracle",
    "closed_form_state",
    "grover_angle",
    "new_uniform",
    "qubit_values",
    "FilterState",
    "SearchFailure",
    "SearchResult",
    "apply_correlation",
    "averaged_ev",
    "eval_g",
    "extract_location",
    "g_schedule_cost",
    "CorrelationInfo",
    "EnsembleModel",
    "RunRecord",
    "decide_sign",
    "exact_ev",
    "measure_all",
    "sampled_ev",
    "sign_error_rate",
    "TruncationPlan",
    "attenuation",
    "m_standard",
    "m_truncated",
    "m_truncated_estimate",
    "make_plan",
]

__version__ = "0.1.0"
