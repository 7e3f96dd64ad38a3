"""Static replication of a payer recovery swap with digital and conventional CDS.

Selling conventional protection on one unit of notional and buying
(1 - swap_rate) / (1 - contractual_recovery) units of digital protection
cancels the recovery swap's default cash flow for every realized recovery,
because the realized-recovery coefficient (cds_hedge - 1) vanishes. Matching
the running premiums of that riskless package then forces the DDS spread to
its arbitrage-free level; `verify_replication` checks both facts on a grid.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstructionError, DomainError
from .pricing import dds_spread_from_cds

DEFAULT_CASH_FLOW_TOL = 1e-12
NET_PREMIUM_TOL = 1e-15


def hedge_ratios(recovery_swap_rate: float, contractual_recovery: float) -> tuple[float, float]:
    """Notional multiples (CDS sold, DDS bought) that null the default cash flow."""
    if not contractual_recovery < 1.0:
        raise DomainError(f"contractual recovery must be < 1, got {contractual_recovery}")
    if not recovery_swap_rate < 1.0:
        raise DomainError(f"recovery swap rate must be < 1, got {recovery_swap_rate}")
    return 1.0, (1.0 - recovery_swap_rate) / (1.0 - contractual_recovery)


@dataclass(frozen=True)
class ReplicationPortfolio:
    """Payer recovery swap on unit notional, long DDS and short CDS beside it.

    Hedge ratios and spreads are free so mis-hedged or mispriced books can be
    examined; `no_arbitrage` pins them to the cash-flow-nulling ratios and
    the arbitrage-free DDS spread.
    """

    recovery_swap_rate: float
    contractual_recovery: float
    cds_hedge: float
    dds_hedge: float
    cds_spread: float
    dds_spread: float

    def __post_init__(self):
        if not 0.0 <= self.recovery_swap_rate < 1.0:
            raise ConstructionError(f"recovery swap rate must lie in [0, 1), got {self.recovery_swap_rate}")
        if not 0.0 <= self.contractual_recovery < 1.0:
            raise ConstructionError(f"contractual recovery must lie in [0, 1), got {self.contractual_recovery}")
        if self.cds_spread < 0.0 or self.dds_spread < 0.0:
            raise ConstructionError("spreads must be >= 0")

    @classmethod
    def no_arbitrage(
        cls, recovery_swap_rate: float, contractual_recovery: float, cds_spread: float
    ) -> "ReplicationPortfolio":
        cds_hedge, dds_hedge = hedge_ratios(recovery_swap_rate, contractual_recovery)
        return cls(
            recovery_swap_rate=recovery_swap_rate,
            contractual_recovery=contractual_recovery,
            cds_hedge=cds_hedge,
            dds_hedge=dds_hedge,
            cds_spread=cds_spread,
            dds_spread=dds_spread_from_cds(cds_spread, recovery_swap_rate, contractual_recovery),
        )


def default_cash_flow(portfolio: ReplicationPortfolio, realized_recovery: float) -> float:
    """Net package cash flow at the credit event, per unit recovery swap notional."""
    if not 0.0 <= realized_recovery <= 1.0:
        raise DomainError(f"realized recovery must lie in [0, 1], got {realized_recovery}")
    p = portfolio
    constant = p.recovery_swap_rate - p.cds_hedge + p.dds_hedge * (1.0 - p.contractual_recovery)
    return constant + (p.cds_hedge - 1.0) * realized_recovery


def net_premium(portfolio: ReplicationPortfolio) -> float:
    """Running premium income of the package: CDS received minus DDS paid, per annum."""
    return portfolio.cds_hedge * portfolio.cds_spread - portfolio.dds_hedge * portfolio.dds_spread


@dataclass(frozen=True)
class ReplicationReport:
    """Deviations of a no-arbitrage package from perfect replication."""

    portfolio: ReplicationPortfolio
    grid_step: float
    max_abs_default_cash_flow: float
    worst_recovery: float
    net_premium: float

    @property
    def default_leg_ok(self) -> bool:
        return self.max_abs_default_cash_flow <= DEFAULT_CASH_FLOW_TOL

    @property
    def premium_ok(self) -> bool:
        return abs(self.net_premium) <= NET_PREMIUM_TOL

    @property
    def passed(self) -> bool:
        return self.default_leg_ok and self.premium_ok

    def to_table(self) -> str:
        """Plain-text leg table with the payoff coefficients and deviation rows."""
        p = self.portfolio
        payer_default = f"{p.recovery_swap_rate:+.6f} - 1.000000*R"
        dds_default = f"{p.dds_hedge * (1.0 - p.contractual_recovery):+.6f}"
        cds_default = f"{-p.cds_hedge:+.6f} + {p.cds_hedge:.6f}*R"
        net_constant = (
            p.recovery_swap_rate - p.cds_hedge + p.dds_hedge * (1.0 - p.contractual_recovery)
        )
        net_slope = p.cds_hedge - 1.0
        rows = [
            ("Leg", "Notional", "Premium p.a.", "Default cash flow"),
            ("Payer recovery swap", f"{1.0:.6f}", "-", payer_default),
            ("Buy digital CDS", f"{p.dds_hedge:.6f}", f"{-p.dds_hedge * p.dds_spread:+.8f}", dds_default),
            ("Sell conventional CDS", f"{p.cds_hedge:.6f}", f"{p.cds_hedge * p.cds_spread:+.8f}", cds_default),
            ("Net", "", f"{self.net_premium:+.3e}", f"{net_constant:+.3e} + {net_slope:+.3e}*R"),
        ]
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
        lines.append("")
        lines.append(
            f"max |default cash flow| over R in [0, 1] step {self.grid_step:g}: "
            f"{self.max_abs_default_cash_flow:.3e} at R = {self.worst_recovery:.2f} "
            f"(tol {DEFAULT_CASH_FLOW_TOL:g}) {'PASS' if self.default_leg_ok else 'FAIL'}"
        )
        lines.append(
            f"|net premium|: {abs(self.net_premium):.3e} "
            f"(tol {NET_PREMIUM_TOL:g}) {'PASS' if self.premium_ok else 'FAIL'}"
        )
        return "\n".join(lines)


def verify_replication(
    recovery_swap_rate: float,
    contractual_recovery: float,
    cds_spread: float,
    grid_step: float = 0.01,
) -> ReplicationReport:
    """Build the no-arbitrage package and measure its worst-case deviations.

    Failures are reported in the result, not raised; the zero is structural
    (the realized-recovery coefficient is exactly 0) and the grid documents
    it numerically.
    """
    if not 0.0 < grid_step <= 1.0:
        raise DomainError(f"grid step must lie in (0, 1], got {grid_step}")
    portfolio = ReplicationPortfolio.no_arbitrage(
        recovery_swap_rate, contractual_recovery, cds_spread
    )
    steps = round(1.0 / grid_step)
    worst = 0.0
    worst_recovery = 0.0
    for k in range(steps + 1):
        recovery = min(k * grid_step, 1.0)
        flow = abs(default_cash_flow(portfolio, recovery))
        if flow > worst:
            worst, worst_recovery = flow, recovery
    return ReplicationReport(
        portfolio=portfolio,
        grid_step=grid_step,
        max_abs_default_cash_flow=worst,
        worst_recovery=worst_recovery,
        net_premium=net_premium(portfolio),
    )
