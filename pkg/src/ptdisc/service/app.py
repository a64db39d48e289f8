"""FastAPI application.

Error mapping: invalid domain values (bad angles, degenerate ensembles,
unknown suites) return 422; a feasibility failure of the evolution-time
equation returns 409 with the offending right-hand side attached.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DomainError, InfeasibleError
from .handlers import (
    handle_export_bloch,
    handle_plan,
    handle_simulate,
    handle_verify,
)
from .schemas import (
    ExportBlochResponse,
    PlanModel,
    PlanRequest,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)


def create_app() -> FastAPI:
    api = FastAPI(title="ptdisc", version=__version__)

    @api.exception_handler(DomainError)
    async def _domain_error(_: Request, exc: DomainError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @api.exception_handler(InfeasibleError)
    async def _infeasible(_: Request, exc: InfeasibleError) -> JSONResponse:
        return JSONResponse(
            status_code=409, content={"detail": str(exc), "rhs": exc.rhs}
        )

    @api.get("/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @api.post("/plan", response_model=PlanModel, response_model_by_alias=True)
    async def plan(req: PlanRequest) -> PlanModel:
        return handle_plan(req)

    @api.post(
        "/simulate", response_model=SimulateResponse, response_model_by_alias=True
    )
    async def simulate(req: SimulateRequest) -> SimulateResponse:
        return handle_simulate(req)

    @api.post("/verify", response_model=VerifyResponse)
    async def verify(req: VerifyRequest) -> VerifyResponse:
        return handle_verify(req)

    @api.post("/export-bloch", response_model=ExportBlochResponse)
    async def export_bloch(req: PlanRequest) -> ExportBlochResponse:
        return handle_export_bloch(req)

    return api


app = create_app()
