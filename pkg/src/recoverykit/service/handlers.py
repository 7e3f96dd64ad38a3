"""Schema-to-schema handlers shared by the FastAPI routes and the CLI client."""

from __future__ import annotations

from .. import calibration, convexity, curves, market_io, pricing, replication
from . import schemas


def _discount_curve(pillars: list[schemas.DiscountPillar]) -> curves.DiscountCurve:
    return curves.DiscountCurve(tuple((p.time_years, p.discount_factor) for p in pillars))


def _hazard_curve(
    segments: list[schemas.HazardSegment], extrapolate: bool = False
) -> curves.HazardCurve:
    return curves.HazardCurve(
        tuple((s.end_time_years, s.hazard_per_annum) for s in segments), extrapolate
    )


def calibrate(request: schemas.CalibrateRequest) -> schemas.HazardCurveOut:
    quotes = sorted(
        (
            calibration.CdsQuote(q.tenor_years, q.cds_spread, q.recovery_swap_rate)
            for q in request.quotes
        ),
        key=lambda q: q.tenor,
    )
    report = calibration.bootstrap_hazard(quotes, _discount_curve(request.discount))
    return schemas.HazardCurveOut(
        segments=[
            schemas.HazardSegment(end_time_years=end, hazard_per_annum=hz)
            for end, hz in report.hazard_curve.segments
        ],
        residuals=list(report.residuals),
    )


def price_recovery_swap(
    request: schemas.PriceRecoverySwapRequest,
) -> schemas.PriceRecoverySwapResponse:
    discount = _discount_curve(request.discount)
    hazard = _hazard_curve(request.hazard, request.extrapolate)
    trade = pricing.RecoverySwapTrade(
        direction=request.trade.direction,
        swap_rate=request.trade.swap_rate,
        maturity=request.trade.maturity_years,
        notional=request.trade.notional,
    )
    pv = pricing.recovery_swap_pv(
        discount,
        hazard,
        trade,
        request.market_recovery_rate,
        request.cds_spread,
        verify_calibration=request.verify_calibration,
    )
    return schemas.PriceRecoverySwapResponse(
        pv=pv,
        pv_per_unit_notional=pv / trade.notional,
        risky_annuity_years=curves.risky_annuity(discount, hazard, trade.maturity),
        par_cds_spread=calibration.par_cds_spread(
            discount, hazard, request.market_recovery_rate, trade.maturity
        ),
    )


def scan_quotes(request: schemas.ScanRequest) -> schemas.ScanResponse:
    rows = [
        market_io.QuoteRow(
            ticker=r.ticker,
            recovery_swap_rate=r.recovery_swap_rate,
            cds_spread=r.cds_spread,
            dds_spread=r.dds_spread,
            dds_contractual_recovery=r.dds_contractual_recovery,
        )
        for r in request.rows
    ]
    report = market_io.scan(rows, request.gap_threshold)
    return schemas.ScanResponse(
        rows=[
            schemas.ScanRowOut(
                ticker=r.ticker,
                quoted_recovery=r.quoted_recovery,
                theoretical_dds=r.theoretical_dds,
                implied_recovery=r.implied_recovery,
                gap=r.gap,
                arbitrage_flag=r.arbitrage_flag,
            )
            for r in report.rows
        ],
        gap_threshold=report.gap_threshold,
        any_arbitrage=report.any_arbitrage,
    )


def replicate(request: schemas.ReplicateRequest) -> schemas.ReplicateResponse:
    report = replication.verify_replication(
        request.recovery_swap_rate,
        request.dds_contractual_recovery,
        request.cds_spread,
        request.grid_step,
    )
    return schemas.ReplicateResponse(
        cds_hedge=report.portfolio.cds_hedge,
        dds_hedge=report.portfolio.dds_hedge,
        dds_spread=report.portfolio.dds_spread,
        net_premium=report.net_premium,
        max_abs_default_cash_flow=report.max_abs_default_cash_flow,
        worst_recovery=report.worst_recovery,
        replication_holds=report.passed,
        table=report.to_table(),
    )


def fair_rate(request: schemas.FairRateRequest) -> schemas.FairRateResponse:
    dist = convexity.RecoveryDistribution(
        mean=request.mean,
        stdev=request.stdev,
        support=(request.support_low, request.support_high),
    )
    approx = convexity.fair_rate_approx(request.mean, request.stdev)
    monte = convexity.monte_carlo_fair_rate(dist, request.monte_carlo_draws, request.seed)
    return schemas.FairRateResponse(
        exact=convexity.fair_rate_exact(dist),
        approx_intermediate=approx.intermediate,
        approx_final=approx.final,
        convexity_premium=convexity.convexity_premium(request.mean, request.stdev),
        monte_carlo=schemas.MonteCarloOut(
            value=monte.value,
            standard_error=monte.standard_error,
            draws=monte.draws,
            seed=monte.seed,
        ),
    )


def fair_dds(request: schemas.FairDdsRequest) -> schemas.FairDdsResponse:
    return schemas.FairDdsResponse(
        fair_dds_spread=convexity.fair_dds_spread(
            request.cds_spread, request.dds_contractual_recovery, request.mean, request.stdev
        ),
        no_premium_dds_spread=pricing.dds_spread_from_cds(
            request.cds_spread, request.mean, request.dds_contractual_recovery
        ),
        gamma=convexity.dds_gamma(request.mean),
    )


def scenario_rate(request: schemas.ScenarioRateRequest) -> schemas.ScenarioRateResponse:
    scenario_set = convexity.ScenarioSet(
        tuple(convexity.Scenario(s.weight, s.recovery, s.cds_spread) for s in request.scenarios)
    )
    fair = convexity.fair_rate_scenarios(scenario_set)
    maturity = request.maturity_years
    intermediate = (
        request.intermediate_time_years
        if request.intermediate_time_years is not None
        else maturity / 2.0
    )
    rate = request.swap_rate if request.swap_rate is not None else fair
    discount = (
        _discount_curve(request.discount)
        if request.discount
        else curves.DiscountCurve.flat(0.0, maturity)
    )
    # Base-case curves for the frozen residual-swap annuity: flat quotes at
    # the scenario-average spread and the scenario fair rate.
    base_spread = sum(s.weight * s.cds_spread for s in scenario_set.scenarios)
    hazard_short = calibration.bootstrap_hazard(
        [calibration.CdsQuote(intermediate, base_spread, fair)], discount
    ).hazard_curve
    hazard_long = calibration.bootstrap_hazard(
        [calibration.CdsQuote(maturity, base_spread, fair)], discount
    ).hazard_curve
    residual = convexity.par_consistency_residual(
        discount, hazard_short, hazard_long, scenario_set, rate, intermediate, maturity
    )
    return schemas.ScenarioRateResponse(
        fair_rate=fair,
        evaluated_rate=rate,
        residual=residual,
        intermediate_time_years=intermediate,
        maturity_years=maturity,
    )
