"""Glue between the pydantic API models and the core library objects."""
from __future__ import annotations

import math

from ..algebra import BlochState
from ..documents import (
    ensemble_document,
    plan_document,
    report_document,
)
from ..protocol import DEFAULT_ALPHA_M, DiscriminationPlan, Ensemble, build_plan
from ..simulate import run_batch
from ..trajectory import render_csv, rows_as_dicts, trajectory_rows
from ..verify import run_suite
from .schemas import (
    EnsembleModel,
    ExportBlochResponse,
    PlanModel,
    PlanRequest,
    ReportModel,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)


def ensemble_from_model(model: EnsembleModel, degrees: bool = False) -> Ensemble:
    states = tuple(
        BlochState(b.theta, b.phi) for b in (s.radians(degrees) for s in model.states)
    )
    return Ensemble(states, model.priors)


def _plan_inputs(req: PlanRequest) -> tuple[Ensemble, float | str, float]:
    ensemble = ensemble_from_model(req.ensemble, req.degrees)
    alpha_h = req.alpha_h
    if req.degrees and isinstance(alpha_h, float):
        alpha_h = math.radians(alpha_h)
    if req.alpha_m is None:
        alpha_m = DEFAULT_ALPHA_M
    elif req.degrees:
        alpha_m = math.radians(req.alpha_m)
    else:
        alpha_m = req.alpha_m
    return ensemble, alpha_h, alpha_m


def plan_model(plan: DiscriminationPlan) -> PlanModel:
    return PlanModel.model_validate(plan_document(plan))


def handle_plan(req: PlanRequest) -> PlanModel:
    ensemble, alpha_h, alpha_m = _plan_inputs(req)
    return plan_model(build_plan(ensemble, alpha_h=alpha_h, alpha_m=alpha_m))


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    ensemble, alpha_h, alpha_m = _plan_inputs(req)
    plan = build_plan(ensemble, alpha_h=alpha_h, alpha_m=alpha_m)
    report = run_batch(
        ensemble, alpha_m=alpha_m, trials=req.trials, seed=req.seed, alpha_h=alpha_h
    )
    return SimulateResponse(
        plan=plan_model(plan),
        report=ReportModel.model_validate(report_document(report, plan)),
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    checks = run_suite(req.suite, seed=req.seed)
    return VerifyResponse(
        suite=req.suite,
        seed=req.seed,
        passed=all(c.passed for c in checks),
        checks=tuple(
            {
                "name": c.name,
                "max_deviation": c.max_deviation,
                "tolerance": c.tolerance,
                "passed": c.passed,
            }
            for c in checks
        ),
    )


def handle_export_bloch(req: PlanRequest) -> ExportBlochResponse:
    ensemble, alpha_h, alpha_m = _plan_inputs(req)
    plan = build_plan(ensemble, alpha_h=alpha_h, alpha_m=alpha_m)
    rows = trajectory_rows(plan)
    return ExportBlochResponse(rows=tuple(rows_as_dicts(rows)), csv=render_csv(rows))


__all__ = [
    "ensemble_document",
    "ensemble_from_model",
    "handle_export_bloch",
    "handle_plan",
    "handle_simulate",
    "handle_verify",
    "plan_model",
]
