"""Request/response models for the service and the thin CLI client.

The wire format is all decimals (rates per annum, recoveries as fractions);
percent and basis-point conversions happen only at CSV and CLI boundaries.
The hazard curve payload shape doubles as the on-disk curve JSON schema.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..convexity import DEFAULT_MC_DRAWS, DEFAULT_MC_SEED


class DiscountPillar(BaseModel):
    time_years: float
    discount_factor: float


class HazardSegment(BaseModel):
    end_time_years: float
    hazard_per_annum: float


class HazardCurveOut(BaseModel):
    """Calibrated curve plus the solved equation residual per tenor.

    Residuals may be omitted when the payload is a hand-written curve file
    rather than calibrate output.
    """

    segments: list[HazardSegment]
    residuals: list[float] = []


class CdsQuoteIn(BaseModel):
    tenor_years: float
    cds_spread: float = Field(description="running spread, per annum decimal")
    recovery_swap_rate: float = Field(description="decimal in [0, 1)")


class CalibrateRequest(BaseModel):
    quotes: list[CdsQuoteIn]
    discount: list[DiscountPillar]


class TradeIn(BaseModel):
    direction: Literal["payer", "receiver"]
    swap_rate: float
    maturity_years: float
    notional: float = 1.0


class PriceRecoverySwapRequest(BaseModel):
    discount: list[DiscountPillar]
    hazard: list[HazardSegment]
    trade: TradeIn
    market_recovery_rate: float
    cds_spread: float
    verify_calibration: bool = True
    extrapolate: bool = Field(
        default=False, description="extend the hazard curve flat beyond its last segment"
    )


class PriceRecoverySwapResponse(BaseModel):
    pv: float
    pv_per_unit_notional: float
    risky_annuity_years: float
    par_cds_spread: float


class QuoteRowIn(BaseModel):
    ticker: str
    recovery_swap_rate: float
    cds_spread: float
    dds_spread: Optional[float] = None
    dds_contractual_recovery: float = 0.0


class ScanRequest(BaseModel):
    rows: list[QuoteRowIn]
    gap_threshold: float = 0.01


class ScanRowOut(BaseModel):
    ticker: str
    quoted_recovery: float
    theoretical_dds: float
    implied_recovery: Optional[float] = None
    gap: Optional[float] = None
    arbitrage_flag: bool


class ScanResponse(BaseModel):
    rows: list[ScanRowOut]
    gap_threshold: float
    any_arbitrage: bool


class ReplicateRequest(BaseModel):
    recovery_swap_rate: float
    cds_spread: float
    dds_contractual_recovery: float = 0.0
    grid_step: float = 0.01


class ReplicateResponse(BaseModel):
    cds_hedge: float
    dds_hedge: float
    dds_spread: float
    net_premium: float
    max_abs_default_cash_flow: float
    worst_recovery: float
    replication_holds: bool
    table: str


class MonteCarloOut(BaseModel):
    value: float
    standard_error: float
    draws: int
    seed: int


class FairRateRequest(BaseModel):
    mean: float
    stdev: float
    support_low: float = 0.0
    support_high: float = 0.99
    monte_carlo_draws: int = DEFAULT_MC_DRAWS
    seed: int = DEFAULT_MC_SEED


class FairRateResponse(BaseModel):
    exact: float
    approx_intermediate: float
    approx_final: float
    convexity_premium: float
    monte_carlo: MonteCarloOut


class FairDdsRequest(BaseModel):
    cds_spread: float
    mean: float
    stdev: float
    dds_contractual_recovery: float = 0.0


class FairDdsResponse(BaseModel):
    fair_dds_spread: float
    no_premium_dds_spread: float
    gamma: float


class ScenarioIn(BaseModel):
    weight: float
    recovery: float
    cds_spread: float


class ScenarioRateRequest(BaseModel):
    scenarios: list[ScenarioIn]
    maturity_years: float = 5.0
    intermediate_time_years: Optional[float] = None
    swap_rate: Optional[float] = None
    discount: Optional[list[DiscountPillar]] = None


class ScenarioRateResponse(BaseModel):
    fair_rate: float
    evaluated_rate: float
    residual: float
    intermediate_time_years: float
    maturity_years: float
