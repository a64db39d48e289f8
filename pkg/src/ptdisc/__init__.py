"""Discrimination of three pure qubit states by non-Hermitian PT-symmetric
evolution: closed-form pipeline construction, a counter-based trial
simulator, seeded verification suites, and an HTTP/CLI surface.
"""

from .algebra import (
    BlochState,
    apply,
    bloch_from_state,
    bloch_vector,
    compose,
    fidelity,
    hermitian_inner,
    normalized,
    state_from_bloch,
    states_equal,
)
from .errors import DomainError, InfeasibleError
from .protocol import (
    DEFAULT_ALPHA_M,
    AngleReport,
    DiscriminationPlan,
    Ensemble,
    EvolutionParams,
    FeasibleAlphaRange,
    PreparationParams,
    StageStates,
    TwoStatePlan,
    build_plan,
    decide,
    decide_pair,
    evolution_time,
    feasible_alpha_range,
    kappa_angles,
    measurement_operator,
    order_by_prior,
    pipeline_stages,
    preparation_params,
    projectors,
    stage_two_plan,
)
from .ptcore import (
    PTHamiltonian,
    c_operator,
    canonical_hamiltonian,
    commutes_with_cpt,
    cpt_inner,
    cpt_map,
    evolution_operator,
)
from .simulate import (
    OutcomeDistribution,
    TrialReport,
    expected_measurements,
    outcome_probabilities,
    run_batch,
    run_trial,
)
from .trajectory import render_csv, trajectory_rows
from .verify import CheckResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "AngleReport",
    "BlochState",
    "CheckResult",
    "DEFAULT_ALPHA_M",
    "DiscriminationPlan",
    "DomainError",
    "Ensemble",
    "EvolutionParams",
    "FeasibleAlphaRange",
    "InfeasibleError",
    "OutcomeDistribution",
    "PTHamiltonian",
    "PreparationParams",
    "StageStates",
    "TrialReport",
    "TwoStatePlan",
    "apply",
    "bloch_from_state",
    "bloch_vector",
    "build_plan",
    "c_operator",
    "canonical_hamiltonian",
    "commutes_with_cpt",
    "compose",
    "cpt_inner",
    "cpt_map",
    "decide",
    "decide_pair",
    "evolution_operator",
    "evolution_time",
    "expected_measurements",
    "feasible_alpha_range",
    "fidelity",
    "hermitian_inner",
    "kappa_angles",
    "measurement_operator",
    "normalized",
    "order_by_prior",
    "outcome_probabilities",
    "pipeline_stages",
    "preparation_params",
    "projectors",
    "render_csv",
    "run_batch",
    "run_suite",
    "run_trial",
    "stage_two_plan",
    "state_from_bloch",
    "states_equal",
    "trajectory_rows",
]
