"""Pydantic models for the HTTP API.

Angles travel in radians unless a request sets ``degrees`` true, in which
case the *request's* angle fields are converted on ingestion; responses are
always radians.  Complex amplitudes are serialized as ``[re, im]`` pairs.
"""
from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Pair = tuple[float, float]
Row = tuple[Pair, Pair]
Matrix = tuple[Row, Row]  # 2x2, complex entries as [re, im]


class BlochModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theta: float
    phi: float

    def radians(self, degrees: bool) -> "BlochModel":
        if not degrees:
            return self
        return BlochModel(theta=math.radians(self.theta), phi=math.radians(self.phi))


class EnsembleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    states: tuple[BlochModel, BlochModel, BlochModel]
    priors: tuple[float, float, float]


class PlanRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ensemble: EnsembleModel
    alpha_h: float | Literal["auto"] = "auto"
    alpha_m: float | None = None
    degrees: bool = False


class SimulateRequest(PlanRequest):
    trials: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0)


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str = "all"
    seed: int = Field(default=20260815, ge=0)


class PreparationModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    sigma: float
    lam: float = Field(alias="lambda")
    beta: Pair
    gamma: Pair
    mu: float
    nu: float


class EvolutionModel(BaseModel):
    alpha_h: float
    tau: float
    delta: float
    kappa: Pair
    zeta: Pair
    chi: float
    xi: float
    rho: float


class AnglesModel(BaseModel):
    cos2_kappa12: float
    cos2_kappa13: float
    cos2_kappa23: float


class GatesModel(BaseModel):
    r1: Matrix
    r2: Matrix
    r3: Matrix
    r4: Matrix
    r5: Matrix
    r6: Matrix


class ProjectorsModel(BaseModel):
    p1: Matrix
    p2: Matrix


class PlanModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    state_order: tuple[int, int, int]
    ensemble: EnsembleModel
    alpha_m: float
    preparation: PreparationModel
    evolution: EvolutionModel
    angles: AnglesModel
    gates: GatesModel
    projectors: ProjectorsModel
    measurement: Matrix
    evolved_norms: tuple[float, float, float]


class ReportModel(BaseModel):
    trials: int
    seed: int
    avg_measurements: float
    max_measurements: int
    error_rate: float
    confusion: tuple[
        tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]
    ]
    plan_fingerprint: str


class SimulateResponse(BaseModel):
    plan: PlanModel
    report: ReportModel


class CheckModel(BaseModel):
    name: str
    max_deviation: float
    tolerance: float
    passed: bool


class VerifyResponse(BaseModel):
    suite: str
    seed: int
    passed: bool
    checks: tuple[CheckModel, ...]


class TrajectoryRowModel(BaseModel):
    state_id: int
    stage: str
    x: float
    y: float
    z: float


class ExportBlochResponse(BaseModel):
    rows: tuple[TrajectoryRowModel, ...]
    csv: str


class ErrorBody(BaseModel):
    detail: str
    rhs: float | None = None
