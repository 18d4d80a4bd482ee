"""FastAPI application exposing the experiment runner.

Endpoints:

- ``GET  /health``            liveness and version
- ``POST /experiments/run``   run an ExperimentRequest, return the report
- ``POST /operators/inspect`` parse an operator, summarize its terms and
                              the block-encoding bookkeeping
- ``GET  /shots/hint``        advisory shot budget for a target value

Core-library errors (bad operator text, size mismatches, invalid
settings) surface as HTTP 400 with the original message.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..experiments import EstimateReport, run_experiment, shot_budget_hint
from ..lcu import ancilla_count
from ..pauli import lcu_normal_form
from .models import (
    ExperimentRequest,
    InspectRequest,
    OperatorInspection,
    ReportModel,
    ShotHint,
    VqeRequest,
    _load_source,
)


def execute_request(request: ExperimentRequest) -> EstimateReport:
    """Validated request -> report; the single execution entry point."""
    return run_experiment(request.to_spec())


def create_app() -> FastAPI:
    app = FastAPI(
        title="qexpect",
        version=__version__,
        description="Expectation-value estimation experiments over HTTP.",
    )

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def _not_found(_request: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/experiments/run", response_model=ReportModel)
    def run(request: ExperimentRequest) -> dict:
        return asdict(execute_request(request))

    @app.post("/operators/inspect", response_model=OperatorInspection)
    def inspect(request: InspectRequest) -> OperatorInspection:
        op = _load_source(request.operator_text, request.operator)
        terms = [
            {"coefficient": t.coefficient, "label": t.label()} for t in op.terms
        ]
        if any(not t.is_identity for t in op.terms):
            form = lcu_normal_form(op, drop_identity=True)
            lam, offset = form.lam, form.identity_offset
            ancillas = ancilla_count(len(form.betas))
        else:
            lam = offset = None
            ancillas = None
        return OperatorInspection(
            n_qubits=op.n_qubits,
            n_terms=len(op.terms),
            identity_coefficient=op.identity_coefficient,
            terms=terms,
            lcu_lambda=lam,
            lcu_ancillas=ancillas,
            lcu_identity_offset=offset,
        )

    @app.get("/shots/hint", response_model=ShotHint)
    def hint(
        value: float = Query(..., ge=-1.0, le=1.0),
        maximum: int = Query(10_000_000, ge=1),
    ) -> ShotHint:
        shots = shot_budget_hint(value, maximum)
        warning = (
            "a zero expectation cannot be resolved at any shot budget"
            if value == 0.0
            else None
        )
        return ShotHint(shots=shots, warning=warning)

    return app


app = create_app()

__all__ = ["app", "create_app", "execute_request", "ExperimentRequest", "VqeRequest"]
