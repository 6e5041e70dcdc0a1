"""Joint record states of quantum measurement event pairs.

Build the density matrix carried by a pair of measurement records, witness
whether the two events were causally ordered or independent, predict one
record from the other, and check Bell-type bounds on families of settings.
"""

import os as _os

# BLAS thread pools read their environment at import time, so this bridge
# must run before numpy loads anywhere in the process.
_threads = _os.environ.get("EVENTSTATE_NUM_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)
del _os, _threads

from .policy import DEFAULT_POLICY, NumericPolicy, NumericsError, ScenarioError
from .quantum_core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    MeasurementModel,
    bloch_ket,
    bloch_pair,
    dephase,
    partial_trace,
    relative_entropy_of_coherence,
    shannon_entropy,
    tensor_product,
    trace_distance,
    validate_density,
    von_neumann_entropy,
)
from .timing import (
    BranchingSchedule,
    JointTimeDistribution,
    TimeGrid,
    TimingProfile,
    branching_amplitudes,
    continuum_limit_check,
    delta_conditional,
    delta_profile,
    exponential_conditional,
    exponential_grid,
    exponential_profile,
    joint_time_distribution,
    survival_probability,
)
from .event_states import (
    ConditionalDecomposition,
    EventScenario,
    EventState,
    EventTiming,
    build_event_state,
    build_sl_fuzzy,
    build_sl_instant,
    build_timed_state,
    build_tl_fuzzy,
    build_tl_instant,
    conditional_decomposition,
    outcome_probabilities,
    reconstruct_from_decomposition,
    timer_distribution,
    trace_out_timers,
)
from .witnesses import (
    ChebyshevCheck,
    WitnessReport,
    chebyshev_check,
    coherence_witness,
    conditional_mean_arrival,
    record_coherence,
    time_correlation,
    time_witness,
)
from .inference import (
    BasisSearchResult,
    CorrelationReport,
    DeterminismReport,
    HelstromResult,
    PredictionReport,
    SearchPolicy,
    classical_correlation,
    determinism_check,
    find_deterministic_basis,
    helstrom_pure,
    helstrom_success,
    predict_future_outcome,
)
from .bell import TSIRELSON_BOUND, ChshReport, chsh_scenarios, chsh_value, event_correlator
from .scenario import ScenarioFile, load_scenario, scenario_from_json
from .serialize import (
    basis_from_json,
    basis_to_json,
    canonical_dumps,
    chsh_report_to_json,
    load_state,
    operator_from_json,
    operator_to_json,
    profile_from_json,
    profile_to_json,
    save_state,
    state_from_json,
    state_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY",
    "NumericPolicy",
    "NumericsError",
    "ScenarioError",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "MeasurementModel",
    "bloch_ket",
    "bloch_pair",
    "dephase",
    "partial_trace",
    "relative_entropy_of_coherence",
    "shannon_entropy",
    "tensor_product",
    "trace_distance",
    "validate_density",
    "von_neumann_entropy",
    "BranchingSchedule",
    "JointTimeDistribution",
    "TimeGrid",
    "TimingProfile",
    "branching_amplitudes",
    "continuum_limit_check",
    "delta_conditional",
    "delta_profile",
    "exponential_conditional",
    "exponential_grid",
    "exponential_profile",
    "joint_time_distribution",
    "survival_probability",
    "ConditionalDecomposition",
    "EventScenario",
    "EventState",
    "EventTiming",
    "build_event_state",
    "build_sl_fuzzy",
    "build_sl_instant",
    "build_timed_state",
    "build_tl_fuzzy",
    "build_tl_instant",
    "conditional_decomposition",
    "outcome_probabilities",
    "reconstruct_from_decomposition",
    "timer_distribution",
    "trace_out_timers",
    "ChebyshevCheck",
    "WitnessReport",
    "chebyshev_check",
    "coherence_witness",
    "conditional_mean_arrival",
    "record_coherence",
    "time_correlation",
    "time_witness",
    "BasisSearchResult",
    "CorrelationReport",
    "DeterminismReport",
    "HelstromResult",
    "PredictionReport",
    "SearchPolicy",
    "classical_correlation",
    "determinism_check",
    "find_deterministic_basis",
    "helstrom_pure",
    "helstrom_success",
    "predict_future_outcome",
    "TSIRELSON_BOUND",
    "ChshReport",
    "chsh_scenarios",
    "chsh_value",
    "event_correlator",
    "ScenarioFile",
    "load_scenario",
    "scenario_from_json",
    "basis_from_json",
    "basis_to_json",
    "canonical_dumps",
    "chsh_report_to_json",
    "load_state",
    "operator_from_json",
    "operator_to_json",
    "profile_from_json",
    "profile_to_json",
    "save_state",
    "state_from_json",
    "state_to_json",
    "__version__",
]
