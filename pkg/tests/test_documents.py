import json
import math

import numpy as np
import pytest

from ptdisc import build_plan, run_batch
from ptdisc.documents import (
    ensemble_document,
    ensemble_from_document,
    plan_document,
    plan_fingerprint,
    plan_from_document,
    report_document,
)
from ptdisc.verify import random_ensemble


class TestEnsembleDocument:
    def test_round_trip(self, worked_ensemble):
        doc = ensemble_document(worked_ensemble)
        back = ensemble_from_document(doc)
        assert back == worked_ensemble

    def test_document_shape(self, worked_ensemble):
        doc = ensemble_document(worked_ensemble)
        assert set(doc) == {"states", "priors"}
        assert set(doc["states"][0]) == {"theta", "phi"}
        json.dumps(doc)  # must be JSON-serializable as-is


class TestPlanDocument:
    def test_round_trip_preserves_every_field(self, worked_plan):
        back = plan_from_document(plan_document(worked_plan))
        assert back.prep == worked_plan.prep
        assert back.evo == worked_plan.evo
        assert back.angles == worked_plan.angles
        assert back.ensemble == worked_plan.ensemble
        assert back.state_order == worked_plan.state_order
        assert back.alpha_m == worked_plan.alpha_m
        assert back.evolved_norms == worked_plan.evolved_norms
        for name in ("r1", "r2", "r3", "r4", "r5", "r6", "p1", "p2", "measurement"):
            assert np.array_equal(getattr(back, name), getattr(worked_plan, name))

    def test_round_trip_through_json_text(self, worked_plan):
        doc = plan_document(worked_plan)
        doc_again = plan_document(
            plan_from_document(json.loads(json.dumps(doc)))
        )
        assert doc_again == doc

    def test_angles_in_radians_and_complex_as_pairs(self, worked_plan):
        doc = plan_document(worked_plan)
        assert doc["preparation"]["sigma"] == pytest.approx(math.pi / 4, abs=1e-12)
        beta = doc["preparation"]["beta"]
        assert isinstance(beta, list) and len(beta) == 2
        assert doc["gates"]["r6"][0][1] == pytest.approx(
            [0.0, 1 / math.sqrt(2)], abs=1e-15
        )

    def test_lambda_key_spelled_out(self, worked_plan):
        doc = plan_document(worked_plan)
        assert "lambda" in doc["preparation"]
        assert "lam" not in doc["preparation"]

    def test_random_plans_round_trip(self, rng):
        for _ in range(25):
            plan = build_plan(random_ensemble(rng))
            doc = plan_document(plan)
            assert plan_document(plan_from_document(doc)) == doc


class TestPlanFingerprint:
    def test_stable_across_rebuilds(self, worked_ensemble):
        a = plan_fingerprint(build_plan(worked_ensemble))
        b = plan_fingerprint(build_plan(worked_ensemble))
        assert a == b
        assert len(a) == 16

    def test_distinguishes_plans(self, worked_ensemble):
        a = plan_fingerprint(build_plan(worked_ensemble))
        b = plan_fingerprint(build_plan(worked_ensemble, alpha_h=1.2))
        assert a != b

    def test_survives_serialization(self, worked_plan):
        doc = json.loads(json.dumps(plan_document(worked_plan)))
        assert plan_fingerprint(plan_from_document(doc)) == plan_fingerprint(
            worked_plan
        )


class TestReportDocument:
    def test_shape_and_fingerprint(self, worked_ensemble, worked_plan):
        report = run_batch(worked_ensemble, trials=5000, seed=3)
        doc = report_document(report, worked_plan)
        assert set(doc) == {
            "trials",
            "seed",
            "avg_measurements",
            "max_measurements",
            "error_rate",
            "confusion",
            "plan_fingerprint",
        }
        assert doc["trials"] == 5000
        assert doc["plan_fingerprint"] == plan_fingerprint(worked_plan)
        json.dumps(doc)
