"""HTTP service exposing the verification suites.

One POST endpoint per command, mirroring the CLI subcommands; request and
response bodies are the pydantic models from schemas.  Runs are pure
functions of the request, so the service is stateless and safe to scale.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import ValidationError

from .errors import So3ChainError
from .runners import run_act, run_bethe, run_check, run_scalar, run_solve, run_spectrum
from .schemas import (
    ActRequest,
    ActResponse,
    BetheRequest,
    BetheResponse,
    CheckRequest,
    CheckResponse,
    ScalarRequest,
    ScalarResponse,
    SolveRequest,
    SolveResponse,
    SpectrumRequest,
    SpectrumResponse,
)

app = FastAPI(
    title="so3chain",
    description=(
        "Verification service for so3-invariant inhomogeneous spin chains: "
        "operator identity suites, Bethe vector construction, action "
        "formulas, Bethe equations and on-shell spectra."
    ),
    version="0.1.0",
)


def _guarded(runner, req):
    try:
        return runner(req)
    except (So3ChainError, ValueError, ValidationError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/check", response_model=CheckResponse, response_model_by_alias=True)
def check(req: CheckRequest) -> CheckResponse:
    return _guarded(run_check, req)


@app.post("/bethe", response_model=BetheResponse, response_model_by_alias=True)
def bethe(req: BetheRequest) -> BetheResponse:
    return _guarded(run_bethe, req)


@app.post("/act", response_model=ActResponse, response_model_by_alias=True)
def act(req: ActRequest) -> ActResponse:
    return _guarded(run_act, req)


@app.post("/solve", response_model=SolveResponse, response_model_by_alias=True)
def solve(req: SolveRequest) -> SolveResponse:
    return _guarded(run_solve, req)


@app.post("/spectrum", response_model=SpectrumResponse, response_model_by_alias=True)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    return _guarded(run_spectrum, req)


@app.post("/scalar", response_model=ScalarResponse, response_model_by_alias=True)
def scalar(req: ScalarRequest) -> ScalarResponse:
    return _guarded(run_scalar, req)
