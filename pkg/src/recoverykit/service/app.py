"""FastAPI application exposing the pricing toolkit."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import RecoveryKitError
from . import handlers, schemas

app = FastAPI(
    title="recoverykit",
    version=__version__,
    description=(
        "Pricing, hazard curve calibration and arbitrage scanning for "
        "recovery swaps, digital default swaps and CDS."
    ),
)


@app.exception_handler(RecoveryKitError)
async def _library_error(request: Request, exc: RecoveryKitError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc), "error": type(exc).__name__})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/calibrate", response_model=schemas.HazardCurveOut)
def calibrate(request: schemas.CalibrateRequest) -> schemas.HazardCurveOut:
    return handlers.calibrate(request)


@app.post("/price/recovery-swap", response_model=schemas.PriceRecoverySwapResponse)
def price_recovery_swap(
    request: schemas.PriceRecoverySwapRequest,
) -> schemas.PriceRecoverySwapResponse:
    return handlers.price_recovery_swap(request)


@app.post("/scan", response_model=schemas.ScanResponse)
def scan_quotes(request: schemas.ScanRequest) -> schemas.ScanResponse:
    return handlers.scan_quotes(request)


@app.post("/replicate", response_model=schemas.ReplicateResponse)
def replicate(request: schemas.ReplicateRequest) -> schemas.ReplicateResponse:
    return handlers.replicate(request)


@app.post("/fair-rate", response_model=schemas.FairRateResponse)
def fair_rate(request: schemas.FairRateRequest) -> schemas.FairRateResponse:
    return handlers.fair_rate(request)


@app.post("/fair-dds", response_model=schemas.FairDdsResponse)
def fair_dds(request: schemas.FairDdsRequest) -> schemas.FairDdsResponse:
    return handlers.fair_dds(request)


@app.post("/scenario-rate", response_model=schemas.ScenarioRateResponse)
def scenario_rate(request: schemas.ScenarioRateRequest) -> schemas.ScenarioRateResponse:
    return handlers.scenario_rate(request)
