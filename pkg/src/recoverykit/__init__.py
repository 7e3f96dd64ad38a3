"""Pricing, calibration and arbitrage scanning for the recovery swap / DDS / CDS triangle."""

from .calibration import (
    CalibrationReport,
    CdsQuote,
    bootstrap_hazard,
    par_cds_spread,
    read_quotes_csv,
)
from .convexity import (
    FairRateApprox,
    MonteCarloEstimate,
    RecoveryDistribution,
    Scenario,
    ScenarioSet,
    convexity_premium,
    dds_gamma,
    fair_dds_spread,
    fair_rate_approx,
    fair_rate_exact,
    fair_rate_scenarios,
    fair_rate_sweep,
    monte_carlo_fair_rate,
    par_consistency_residual,
)
from .curves import (
    DiscountCurve,
    HazardCurve,
    TimeGrid,
    annuity_and_protection,
    protection_integral,
    risky_annuity,
)
from .errors import (
    ArbitrageError,
    CalibrationError,
    ConstructionError,
    DomainError,
    InconsistentQuotesError,
    NumericError,
    ParseError,
    RecoveryKitError,
    UndefinedRateError,
)
from .market_io import QuoteRow, ScanReport, ScanRow, parse_quotes, scan, serialize_quotes
from .pricing import (
    DdsTerms,
    RecoverySwapTrade,
    credit_triangle_spread,
    dds_par_spread,
    dds_spread_from_cds,
    implied_recovery,
    recovery_swap_payoff,
    recovery_swap_pv,
)
from .replication import (
    ReplicationPortfolio,
    ReplicationReport,
    default_cash_flow,
    hedge_ratios,
    net_premium,
    verify_replication,
)

__version__ = "0.1.0"
