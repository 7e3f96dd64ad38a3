"""Consistent pricing across the recovery swap / digital default swap / CDS triangle.

The spread of a DDS with contractual recovery r relates to the CDS spread by

    dds_spread = cds_spread * (1 - r) / (1 - recovery_swap_rate),

which also inverts to an implied recovery from a (CDS, zero-recovery DDS)
quote pair, and degenerates to the credit triangle spread = hazard * (1 -
recovery) for flat curves. Seasoned recovery swaps are marked against the
current market rate through the risky annuity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .calibration import par_cds_spread
from .curves import DiscountCurve, HazardCurve, annuity_and_protection
from .errors import ArbitrageError, CalibrationError, ConstructionError, DomainError

PAR_SPREAD_CHECK_TOL = 1e-6

_DIRECTIONS = ("payer", "receiver")


@dataclass(frozen=True)
class RecoverySwapTrade:
    """Zero-premium swap of realized recovery against a preset rate on default.

    ``direction`` names the side of the *realized* recovery: the payer
    receives swap_rate - realized on default, the receiver the opposite.
    """

    direction: str
    swap_rate: float
    maturity: float
    notional: float = 1.0

    def __post_init__(self):
        if self.direction not in _DIRECTIONS:
            raise ConstructionError(f"direction must be one of {_DIRECTIONS}, got {self.direction!r}")
        if not 0.0 <= self.swap_rate < 1.0:
            raise ConstructionError(f"swap rate must lie in [0, 1), got {self.swap_rate}")
        if not self.maturity > 0.0:
            raise ConstructionError(f"maturity must be positive, got {self.maturity}")
        if not self.notional > 0.0:
            raise ConstructionError(f"notional must be positive, got {self.notional}")


@dataclass(frozen=True)
class DdsTerms:
    """Digital default swap terms: fixed payout 1 - contractual_recovery on default."""

    contractual_recovery: float
    maturity: float

    def __post_init__(self):
        if not 0.0 <= self.contractual_recovery < 1.0:
            raise ConstructionError(
                f"contractual recovery must lie in [0, 1), got {self.contractual_recovery}"
            )
        if not self.maturity > 0.0:
            raise ConstructionError(f"maturity must be positive, got {self.maturity}")


def recovery_swap_payoff(trade: RecoverySwapTrade, realized_recovery: float, defaulted: bool) -> float:
    """Contract payoff at the credit event; zero in every no-default scenario."""
    if not defaulted:
        return 0.0
    if not 0.0 <= realized_recovery <= 1.0:
        raise DomainError(f"realized recovery must lie in [0, 1], got {realized_recovery}")
    payer_amount = trade.notional * (trade.swap_rate - realized_recovery)
    return payer_amount if trade.direction == "payer" else -payer_amount


def dds_spread_from_cds(cds_spread: float, recovery_swap_rate: float, contractual_recovery: float) -> float:
    """Arbitrage-free DDS spread for a given contractual recovery."""
    if not recovery_swap_rate < 1.0:
        raise DomainError(f"recovery swap rate must be < 1, got {recovery_swap_rate}")
    if not contractual_recovery < 1.0:
        raise DomainError(f"contractual recovery must be < 1, got {contractual_recovery}")
    if cds_spread < 0.0:
        raise DomainError(f"CDS spread must be >= 0, got {cds_spread}")
    return cds_spread * (1.0 - contractual_recovery) / (1.0 - recovery_swap_rate)


def dds_par_spread(discount: DiscountCurve, hazard: HazardCurve, terms: DdsTerms) -> float:
    """DDS par spread straight off the curves (continuous premium payments)."""
    annuity, protection = annuity_and_protection(discount, hazard, terms.maturity)
    if annuity == 0.0:
        raise DomainError("par spread is undefined at zero maturity (annuity is 0)")
    return (1.0 - terms.contractual_recovery) * protection / annuity


def implied_recovery(cds_spread: float, zero_recovery_dds_spread: float) -> float:
    """Recovery rate implied by a (CDS, zero-recovery DDS) spread pair.

    A CDS spread above the zero-recovery DDS spread means floating-recovery
    protection is dearer than full-notional protection, which is an
    arbitrage; that raises rather than silently clamping.
    """
    if not zero_recovery_dds_spread > 0.0:
        raise DomainError(
            f"zero-recovery DDS spread must be positive, got {zero_recovery_dds_spread}"
        )
    if cds_spread < 0.0:
        raise DomainError(f"CDS spread must be >= 0, got {cds_spread}")
    if cds_spread > zero_recovery_dds_spread:
        raise ArbitrageError(
            f"CDS spread {cds_spread} exceeds zero-recovery DDS spread "
            f"{zero_recovery_dds_spread}: full-notional protection is cheaper than floating"
        )
    return 1.0 - cds_spread / zero_recovery_dds_spread


def credit_triangle_spread(hazard_rate: float, recovery: float) -> float:
    """Flat-curve spread approximation hazard * (1 - recovery)."""
    if hazard_rate < 0.0:
        raise DomainError(f"hazard rate must be >= 0, got {hazard_rate}")
    if not recovery < 1.0:
        raise DomainError(f"recovery must be < 1, got {recovery}")
    return hazard_rate * (1.0 - recovery)


def recovery_swap_pv(
    discount: DiscountCurve,
    hazard: HazardCurve,
    trade: RecoverySwapTrade,
    market_recovery_rate: float,
    cds_spread: float,
    *,
    verify_calibration: bool = True,
) -> float:
    """Mark-to-market of a seasoned recovery swap against the current market rate.

    Receiver PV per unit notional is

        (market_rate - swap_rate) / (1 - market_rate) * cds_spread * risky_annuity,

    which is only meaningful on a hazard curve calibrated to (cds_spread,
    market_rate) at the trade maturity. With ``verify_calibration`` on
    (default) the curve's par spread is recomputed and a mismatch beyond
    1e-6 raises, since the formula silently misprices on a stale curve.
    """
    if not 0.0 <= market_recovery_rate < 1.0:
        raise DomainError(f"market recovery rate must lie in [0, 1), got {market_recovery_rate}")
    if cds_spread < 0.0:
        raise DomainError(f"CDS spread must be >= 0, got {cds_spread}")
    if verify_calibration:
        par = par_cds_spread(discount, hazard, market_recovery_rate, trade.maturity)
        if abs(par - cds_spread) > PAR_SPREAD_CHECK_TOL:
            raise CalibrationError(
                f"hazard curve reprices the {trade.maturity}y CDS at {par:.10f} "
                f"but {cds_spread:.10f} was quoted; recalibrate or pass verify_calibration=False"
            )
    annuity, _ = annuity_and_protection(discount, hazard, trade.maturity)
    receiver_unit = (
        (market_recovery_rate - trade.swap_rate)
        / (1.0 - market_recovery_rate)
        * cds_spread
        * annuity
    )
    unit = receiver_unit if trade.direction == "receiver" else -receiver_unit
    return trade.notional * unit
