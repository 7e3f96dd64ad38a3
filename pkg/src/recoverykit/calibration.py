"""Sequential bootstrap of the implied hazard curve from CDS and recovery swap quotes.

Each tenor's quote pins one piecewise-constant hazard segment through the
par identity

    spread / (1 - recovery_swap_rate) * risky_annuity(T) = protection_integral(T),

with both sides evaluated on the partially built curve. The residual of this
equation is monotone increasing in the trial hazard, so a bracketed scalar
solve is guaranteed once a sign change exists. No assumption about the
dependence between recovery rates and default events is needed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Sequence

from scipy.optimize import brentq

from ._textio import read_text
from .curves import DiscountCurve, HazardCurve, annuity_and_protection
from .errors import (
    CalibrationError,
    ConstructionError,
    DomainError,
    InconsistentQuotesError,
    ParseError,
)

HAZARD_BRACKET = (1e-12, 10.0)
RESIDUAL_TOL = 1e-12
QUOTE_CSV_HEADER = ("tenor_years", "cds_spread_bp", "recovery_swap_rate_pct")


@dataclass(frozen=True)
class CdsQuote:
    """One tenor's market pair: running CDS spread and recovery swap rate, as decimals."""

    tenor: float
    spread: float
    recovery_swap_rate: float

    def __post_init__(self):
        if not self.tenor > 0.0:
            raise ConstructionError(f"quote tenor must be positive, got {self.tenor}")
        if self.spread < 0.0:
            raise ConstructionError(f"CDS spread must be >= 0, got {self.spread}")
        if not 0.0 <= self.recovery_swap_rate < 1.0:
            raise ConstructionError(
                f"recovery swap rate must lie in [0, 1), got {self.recovery_swap_rate}"
            )


@dataclass(frozen=True)
class CalibrationReport:
    """Bootstrapped curve plus per-tenor solver diagnostics."""

    hazard_curve: HazardCurve
    residuals: tuple[float, ...]
    iterations: tuple[int, ...]

    def __post_init__(self):
        if any(abs(residual) > RESIDUAL_TOL for residual in self.residuals):
            raise CalibrationError(
                f"calibration residual exceeds tolerance {RESIDUAL_TOL}: {self.residuals}"
            )


def bootstrap_hazard(
    quotes: Sequence[CdsQuote],
    discount: DiscountCurve,
    *,
    extrapolate: bool = False,
) -> CalibrationReport:
    """Solve tenor by tenor for the piecewise-constant implied hazard curve.

    Quotes must be sorted by strictly increasing tenor and the discount curve
    must cover the longest one. For flat inputs the solved hazard collapses
    to the credit triangle spread / (1 - recovery).

    Raises InconsistentQuotesError when a quote is too low to be repriced
    given the shorter tenors (including a zero spread after positive
    hazards), and CalibrationError when no hazard inside the bracket
    reprices it.
    """
    if not quotes:
        raise DomainError("at least one quote is required")
    tenors = [quote.tenor for quote in quotes]
    if any(not b > a for a, b in zip(tenors, tenors[1:])):
        raise DomainError(f"quote tenors must be strictly increasing, got {tenors}")
    if tenors[-1] > discount.horizon:
        raise DomainError(
            f"discount curve horizon {discount.horizon} does not cover the {tenors[-1]}y quote"
        )

    low, high = HAZARD_BRACKET
    segments: list[tuple[float, float]] = []
    residuals: list[float] = []
    iterations: list[int] = []
    for quote in quotes:
        target = quote.spread / (1.0 - quote.recovery_swap_rate)

        def residual(hazard: float, _tenor: float = quote.tenor, _target: float = target) -> float:
            trial = HazardCurve(tuple(segments) + ((_tenor, hazard),))
            annuity, protection = annuity_and_protection(discount, trial, _tenor)
            return protection - _target * annuity

        if quote.spread == 0.0:
            at_zero = residual(0.0)
            if abs(at_zero) > RESIDUAL_TOL:
                raise InconsistentQuotesError(
                    f"{quote.tenor}y quote has zero spread but positive shorter-tenor hazards"
                )
            solved, solved_residual, count = 0.0, at_zero, 0
        else:
            at_low = residual(low)
            if at_low > RESIDUAL_TOL:
                raise InconsistentQuotesError(
                    f"{quote.tenor}y spread is too low to reprice given the shorter tenors"
                )
            at_high = residual(high)
            if at_high < -RESIDUAL_TOL:
                raise CalibrationError(
                    f"no hazard in [{low}, {high}] per annum reprices the {quote.tenor}y quote"
                )
            if at_low >= 0.0:
                solved, solved_residual, count = low, at_low, 0
            else:
                solved, info = brentq(residual, low, high, xtol=1e-14, full_output=True, disp=False)
                if not info.converged:
                    raise CalibrationError(f"root search did not converge at tenor {quote.tenor}y")
                solved_residual = residual(solved)
                count = info.iterations
            if abs(solved_residual) > RESIDUAL_TOL:
                raise CalibrationError(
                    f"residual {solved_residual} at tenor {quote.tenor}y exceeds {RESIDUAL_TOL}"
                )
        segments.append((quote.tenor, solved))
        residuals.append(solved_residual)
        iterations.append(count)

    curve = HazardCurve(tuple(segments), extrapolate=extrapolate)
    return CalibrationReport(curve, tuple(residuals), tuple(iterations))


def par_cds_spread(
    discount: DiscountCurve,
    hazard: HazardCurve,
    recovery_swap_rate: float,
    maturity: float,
) -> float:
    """Par running CDS spread implied by the curves and a recovery swap rate."""
    if maturity <= 0.0:
        raise DomainError("par spread is undefined at zero maturity (annuity is 0)")
    if not 0.0 <= recovery_swap_rate < 1.0:
        raise DomainError(f"recovery swap rate must lie in [0, 1), got {recovery_swap_rate}")
    annuity, protection = annuity_and_protection(discount, hazard, maturity)
    return (1.0 - recovery_swap_rate) * protection / annuity


def read_quotes_csv(source: str | bytes | IO) -> list[CdsQuote]:
    """Parse calibration quotes from CSV: ``tenor_years,cds_spread_bp,recovery_swap_rate_pct``.

    Spreads are divided by 10^4 and recoveries by 10^2 at this boundary;
    everything downstream works in decimals.
    """
    rows = list(csv.reader(io.StringIO(read_text(source))))
    if not rows or tuple(cell.strip() for cell in rows[0]) != QUOTE_CSV_HEADER:
        raise ParseError(f"quote CSV must start with header {','.join(QUOTE_CSV_HEADER)}")
    quotes: list[CdsQuote] = []
    problems: list[str] = []
    for number, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            problems.append(f"row {number}: expected 3 fields, got {len(row)}")
            continue
        try:
            tenor = float(row[0])
            spread = float(row[1]) / 10_000.0
            recovery = float(row[2]) / 100.0
        except ValueError:
            problems.append(f"row {number}: non-numeric field")
            continue
        try:
            quotes.append(CdsQuote(tenor, spread, recovery))
        except ConstructionError as exc:
            problems.append(f"row {number}: {exc}")
    if problems:
        raise ParseError("invalid quote CSV", problems)
    return quotes
