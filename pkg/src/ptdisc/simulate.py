"""Monte Carlo engine for the discrimination protocol.

Outcome probabilities follow the Born rule written with the CPT product,

    p_m = cpt_inner(v, P_m v, alpha_m) / cpt_inner(v, v, alpha_m),

which degenerates to the Hermitian Born rule at alpha_m = 0 and reproduces
the closed-form confusion weights exactly (p_plus on the final third state
equals cos^2(kappa_13)).

Randomness is counter-based: trial i consumes exactly the i-th block of four
uniforms from a Philox stream keyed by the seed (state selection, stage-1
outcome, stage-2 outcome, spare).  Results are therefore bit-identical for a
given (seed, trials, inputs) no matter how the trials are chunked or ordered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from . import tolerances as tol
from .algebra import as_state
from .errors import DomainError
from .protocol import (
    DEFAULT_ALPHA_M,
    DiscriminationPlan,
    Ensemble,
    TwoStatePlan,
    build_plan,
    pipeline_stages,
    projectors,
    stage_two_plan,
)
from .ptcore import cpt_inner

DRAWS_PER_TRIAL = 4
_CHUNK = 1 << 17


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of the M = +1 / -1 outcomes; non-negative, summing to 1."""

    p_plus: float
    p_minus: float

    def __post_init__(self):
        for name, p in (("p_plus", self.p_plus), ("p_minus", self.p_minus)):
            if not math.isfinite(p) or p < 0.0:
                raise DomainError(f"{name} must be a non-negative probability, got {p}")
        if abs(self.p_plus + self.p_minus - 1.0) > tol.NORM_ATOL:
            raise DomainError(
                f"outcome probabilities must sum to 1, got {self.p_plus + self.p_minus!r}"
            )


@dataclass(frozen=True)
class TrialReport:
    """Batch statistics; the confusion matrix is (true input state -> verdict)."""

    trials: int
    avg_measurements: float
    confusion: tuple[tuple[int, int, int], ...]
    error_rate: float
    seed: int
    max_measurements: int

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("a report needs at least one trial")
        if not 1.0 <= self.avg_measurements <= 2.0:
            raise DomainError(
                f"avg_measurements must lie in [1, 2], got {self.avg_measurements}"
            )
        if sum(sum(row) for row in self.confusion) != self.trials:
            raise DomainError("confusion counts must total the trial count")
        if self.max_measurements not in (1, 2):
            raise DomainError("measurement counts are always 1 or 2")


def outcome_probabilities(final_state, alpha_m) -> OutcomeDistribution:
    """Born-rule probabilities of M = +-1 under the CPT product at alpha_m."""
    v = as_state(final_state)
    p1, p2 = projectors()
    den = cpt_inner(v, v, alpha_m).real
    if not den > 0.0:
        raise DomainError("state has no positive CPT norm (zero vector?)")
    pp = cpt_inner(v, p1 @ v, alpha_m).real / den
    pm = cpt_inner(v, p2 @ v, alpha_m).real / den
    # The exact values are non-negative; only float dust below zero is clipped.
    return OutcomeDistribution(max(0.0, pp), max(0.0, pm))


def _stage_probability_tables(
    plan: DiscriminationPlan, pair_plan: TwoStatePlan
) -> tuple[np.ndarray, np.ndarray]:
    """Per plan-state probabilities: stage-1 p_plus and stage-2 p(first).

    Stage two is a projective measurement on exactly orthogonal states, so
    its Born rule is evaluated at alpha = 0; the stage-1 row uses the plan's
    measurement alpha.
    """
    p1_plus = np.empty(3)
    p2_first = np.empty(3)
    for i, b in enumerate(plan.ensemble.states):
        final1 = pipeline_stages(plan, b).final
        p1_plus[i] = outcome_probabilities(final1, plan.alpha_m).p_plus
        final2 = pipeline_stages(pair_plan, b).final
        p2_first[i] = outcome_probabilities(final2, 0.0).p_plus
    return p1_plus, p2_first


def _pair_plan_for(plan: DiscriminationPlan) -> TwoStatePlan:
    p2, p3 = plan.ensemble.priors[1], plan.ensemble.priors[2]
    total = p2 + p3
    pair_priors = (p2 / total, p3 / total) if total > 0.0 else (0.5, 0.5)
    return stage_two_plan(plan.ensemble.states[1], plan.ensemble.states[2], pair_priors)


def run_trial(plan: DiscriminationPlan, stage2, true_state_index: int, rng_stream):
    """One protocol run; returns (verdict, measurement_count), plan-indexed.

    ``stage2`` is a TwoStatePlan or a zero-argument factory for one, built
    lazily only when the first measurement returns -1.  ``rng_stream`` is a
    numpy Generator from which at most two uniforms are drawn.
    """
    if true_state_index not in (1, 2, 3):
        raise DomainError(f"true_state_index must be 1, 2 or 3, got {true_state_index}")
    b = plan.ensemble.states[true_state_index - 1]
    final1 = pipeline_stages(plan, b).final
    p_plus = outcome_probabilities(final1, plan.alpha_m).p_plus
    if rng_stream.random() < p_plus:
        return 1, 1
    pair_plan = stage2() if callable(stage2) else stage2
    final2 = pipeline_stages(pair_plan, b).final
    p_first = outcome_probabilities(final2, 0.0).p_plus
    verdict = 2 if rng_stream.random() < p_first else 3
    return verdict, 2


def run_batch(
    e: Ensemble,
    alpha_m=DEFAULT_ALPHA_M,
    trials: int = 100_000,
    seed: int = 0,
    alpha_h="auto",
) -> TrialReport:
    """Simulate ``trials`` protocol runs; deterministic in (seed, trials, inputs).

    True states are drawn from the input priors; each trial owns one Philox
    counter block, so chunking below never changes the outcome.
    """
    trials = int(trials)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    seed = int(seed)
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")

    plan = build_plan(e, alpha_h=alpha_h, alpha_m=alpha_m)
    pair_plan = _pair_plan_for(plan)
    p1_plus, p2_first = _stage_probability_tables(plan, pair_plan)

    # Selection runs over input-indexed priors; probability lookups need the
    # plan position of each input state.
    cum = np.cumsum(e.priors)
    plan_pos = np.empty(3, dtype=np.intp)
    for pos, input_index in enumerate(plan.state_order):
        plan_pos[input_index - 1] = pos
    # verdict_input[plan position] = 1-based input index
    verdict_input = np.array(plan.state_order, dtype=np.intp)

    confusion = np.zeros((3, 3), dtype=np.int64)
    n_second_stage = 0
    for start in range(0, trials, _CHUNK):
        m = min(_CHUNK, trials - start)
        u = Generator(Philox(key=seed, counter=start)).random((m, DRAWS_PER_TRIAL))
        true_in = np.searchsorted(cum, u[:, 0], side="right")
        np.clip(true_in, 0, 2, out=true_in)
        t = plan_pos[true_in]
        one_shot = u[:, 1] < p1_plus[t]
        verdict_plan = np.where(
            one_shot, 0, np.where(u[:, 2] < p2_first[t], 1, 2)
        )
        v_in = verdict_input[verdict_plan] - 1
        np.add.at(confusion, (true_in, v_in), 1)
        n_second_stage += int(np.count_nonzero(~one_shot))

    avg = (trials + n_second_stage) / trials
    errors = trials - int(np.trace(confusion))
    return TrialReport(
        trials=trials,
        avg_measurements=float(avg),
        confusion=tuple(tuple(int(x) for x in row) for row in confusion),
        error_rate=errors / trials,
        seed=seed,
        max_measurements=2 if n_second_stage else 1,
    )


def expected_measurements(p_max) -> float:
    """Ideal-limit average measurement count 2 - p_max for the leading prior."""
    p = float(p_max)
    if not 1.0 / 3.0 <= p <= 1.0:
        raise DomainError(f"the leading prior lies in [1/3, 1], got {p}")
    return 2.0 - p
