import math

import numpy as np
import pytest

from ptdisc import BlochState, Ensemble, build_plan

# A hand-checkable triple used across the suite: theta = (60, 90, 120) degrees,
# phi = (0, 90, 180) degrees, leading prior 1/2.  Its overlap angle is
# sigma = pi/4 and its auto evolution alpha has a comfortable margin.
WORKED_THETAS = (math.pi / 3, math.pi / 2, 2 * math.pi / 3)
WORKED_PHIS = (0.0, math.pi / 2, math.pi)
WORKED_PRIORS = (0.5, 0.25, 0.25)


@pytest.fixture
def worked_ensemble() -> Ensemble:
    states = tuple(BlochState(t, p) for t, p in zip(WORKED_THETAS, WORKED_PHIS))
    return Ensemble(states, WORKED_PRIORS)


@pytest.fixture
def worked_plan(worked_ensemble):
    return build_plan(worked_ensemble)


@pytest.fixture
def worked_document() -> dict:
    return {
        "states": [
            {"theta": t, "phi": p} for t, p in zip(WORKED_THETAS, WORKED_PHIS)
        ],
        "priors": list(WORKED_PRIORS),
    }


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
