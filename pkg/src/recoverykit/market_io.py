"""Quote-file ingestion and the implied-recovery arbitrage scanner.

Quote files carry recoveries in percent and spreads in basis points, the
units dealers print; everything beyond the parse boundary is a decimal. The
scanner compares each name's quoted recovery swap rate with the recovery
implied by its CDS / zero-recovery-DDS spread ratio and flags rows where the
two disagree beyond a threshold or where the quotes admit an arbitrage
outright.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from ._textio import read_text
from .errors import ArbitrageError, ConstructionError, DomainError, ParseError
from .pricing import dds_spread_from_cds, implied_recovery

QUOTE_FILE_HEADER = (
    "ticker",
    "recovery_swap_rate_pct",
    "cds_spread_bp",
    "dds_spread_bp",
    "dds_contractual_recovery_pct",
)
DEFAULT_GAP_THRESHOLD = 0.01


@dataclass(frozen=True)
class QuoteRow:
    """One reference entity's quotes, as decimals; the DDS quote is optional."""

    ticker: str
    recovery_swap_rate: float
    cds_spread: float
    dds_spread: float | None = None
    dds_contractual_recovery: float = 0.0

    def __post_init__(self):
        if not self.ticker:
            raise ConstructionError("ticker must be non-empty")
        if not 0.0 <= self.recovery_swap_rate < 1.0:
            raise ConstructionError(
                f"recovery swap rate must lie in [0, 1), got {self.recovery_swap_rate}"
            )
        if self.cds_spread < 0.0:
            raise ConstructionError(f"CDS spread must be >= 0, got {self.cds_spread}")
        if self.dds_spread is not None and self.dds_spread < 0.0:
            raise ConstructionError(f"DDS spread must be >= 0, got {self.dds_spread}")
        if not 0.0 <= self.dds_contractual_recovery < 1.0:
            raise ConstructionError(
                f"contractual recovery must lie in [0, 1), got {self.dds_contractual_recovery}"
            )


def parse_quotes(source: str | bytes | IO) -> list[QuoteRow]:
    """Parse a quote file, preserving row order.

    Header must be ``ticker,recovery_swap_rate_pct,cds_spread_bp,
    dds_spread_bp,dds_contractual_recovery_pct``; the two DDS columns may be
    blank. Conversion is an exact division by 10^2 and 10^4. Malformed rows,
    duplicate tickers and recoveries at or above 100% are collected and
    reported together with their row numbers.
    """
    rows = list(csv.reader(io.StringIO(read_text(source))))
    if not rows or tuple(cell.strip() for cell in rows[0]) != QUOTE_FILE_HEADER:
        raise ParseError(f"quote file must start with header {','.join(QUOTE_FILE_HEADER)}")
    parsed: list[QuoteRow] = []
    problems: list[str] = []
    seen: set[str] = set()
    for number, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 5:
            problems.append(f"row {number}: expected 5 fields, got {len(row)}")
            continue
        ticker = row[0].strip()
        if not ticker:
            problems.append(f"row {number}: empty ticker")
            continue
        if ticker in seen:
            problems.append(f"row {number}: duplicate ticker {ticker!r}")
            continue
        try:
            recovery = float(row[1]) / 100.0
            cds = float(row[2]) / 10_000.0
            dds = float(row[3]) / 10_000.0 if row[3].strip() else None
            contractual = float(row[4]) / 100.0 if row[4].strip() else 0.0
        except ValueError:
            problems.append(f"row {number}: non-numeric field")
            continue
        try:
            parsed.append(QuoteRow(ticker, recovery, cds, dds, contractual))
        except ConstructionError as exc:
            problems.append(f"row {number}: {exc}")
            continue
        seen.add(ticker)
    if problems:
        raise ParseError("invalid quote file", problems)
    return parsed


def _exact_field(value: float, scale: float) -> str:
    """Shortest decimal text t with float(t) / scale == value, if one exists."""
    scaled = value * scale
    for precision in (6, 10, 12, 17):
        text = f"{scaled:.{precision}g}"
        if float(text) / scale == value:
            return text
    return repr(scaled)


def serialize_quotes(rows: Iterable[QuoteRow]) -> str:
    """Render rows back to quote-file CSV so that parse(serialize(rows)) == rows."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(QUOTE_FILE_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.ticker,
                _exact_field(row.recovery_swap_rate, 100.0),
                _exact_field(row.cds_spread, 10_000.0),
                "" if row.dds_spread is None else _exact_field(row.dds_spread, 10_000.0),
                _exact_field(row.dds_contractual_recovery, 100.0),
            ]
        )
    return out.getvalue()


@dataclass(frozen=True)
class ScanRow:
    """Scanner verdict for one name; implied fields are absent without a DDS quote."""

    ticker: str
    quoted_recovery: float
    theoretical_dds: float
    implied_recovery: float | None
    gap: float | None
    arbitrage_flag: bool


@dataclass(frozen=True)
class ScanReport:
    """Row-ordered scan results; row order matches the input file."""

    rows: tuple[ScanRow, ...]
    gap_threshold: float

    @property
    def any_arbitrage(self) -> bool:
        return any(row.arbitrage_flag for row in self.rows)

    def to_json(self, digits: int | None = None) -> str:
        """JSON payload in decimals; ``digits`` optionally rounds them for display."""
        rounded = (lambda x: x) if digits is None else (
            lambda x: None if x is None else round(x, digits)
        )
        payload = {
            "gap_threshold": rounded(self.gap_threshold),
            "any_arbitrage": self.any_arbitrage,
            "rows": [
                {
                    "ticker": r.ticker,
                    "quoted_recovery": rounded(r.quoted_recovery),
                    "theoretical_dds": rounded(r.theoretical_dds),
                    "implied_recovery": rounded(r.implied_recovery),
                    "gap": rounded(r.gap),
                    "arbitrage_flag": r.arbitrage_flag,
                }
                for r in self.rows
            ],
        }
        return json.dumps(payload, indent=2)

    def to_csv(self, digits: int | None = None) -> str:
        """Machine CSV in market units; ``digits`` rounds the displayed numbers."""
        fmt = (lambda x: f"{x:.10g}") if digits is None else (lambda x: f"{x:.{digits}f}")
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            [
                "ticker",
                "quoted_recovery_pct",
                "implied_recovery_pct",
                "gap_pp",
                "theoretical_dds_bp",
                "arbitrage_flag",
            ]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.ticker,
                    fmt(r.quoted_recovery * 100),
                    "" if r.implied_recovery is None else fmt(r.implied_recovery * 100),
                    "" if r.gap is None else fmt(r.gap * 100),
                    fmt(r.theoretical_dds * 10_000),
                    "true" if r.arbitrage_flag else "false",
                ]
            )
        return out.getvalue()

    def to_table(self, digits: int | None = None) -> str:
        """Aligned human table; ``digits`` widens the default 2-decimal display."""
        places = 2 if digits is None else digits
        header = ("Ticker", "Quoted R (%)", "Implied R (%)", "Gap (pp)", "Theo DDS (bp)", "Flag")
        body = [
            (
                r.ticker,
                f"{r.quoted_recovery * 100:.{places}f}",
                "-" if r.implied_recovery is None else f"{r.implied_recovery * 100:.{places}f}",
                "-" if r.gap is None else f"{r.gap * 100:+.{places}f}",
                f"{r.theoretical_dds * 10_000:.{places}f}",
                "ARB" if r.arbitrage_flag else "ok",
            )
            for r in self.rows
        ]
        table = [header, *body]
        widths = [max(len(line[i]) for line in table) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip() for line in table]
        lines.append(f"gap threshold: {self.gap_threshold * 100:g} pp")
        return "\n".join(lines)


def scan(rows: Sequence[QuoteRow], gap_threshold: float = DEFAULT_GAP_THRESHOLD) -> ScanReport:
    """Check each name's quotes against the no-arbitrage spread relation.

    Rows with a DDS quote get an implied recovery (after converting the
    quote to its zero-contractual-recovery equivalent) and the gap to the
    quoted rate; rows without one report the theoretical DDS spread only.
    The arbitrage flag is raised when the implied recovery's precondition
    fails or |gap| exceeds the threshold; diagnostics stay in the report
    rather than raising.
    """
    if gap_threshold < 0.0:
        raise DomainError(f"gap threshold must be >= 0, got {gap_threshold}")
    results: list[ScanRow] = []
    for row in rows:
        theoretical = dds_spread_from_cds(
            row.cds_spread, row.recovery_swap_rate, row.dds_contractual_recovery
        )
        implied: float | None = None
        gap: float | None = None
        flagged = False
        if row.dds_spread is not None:
            zero_recovery_quote = row.dds_spread / (1.0 - row.dds_contractual_recovery)
            try:
                implied = implied_recovery(row.cds_spread, zero_recovery_quote)
                gap = implied - row.recovery_swap_rate
                flagged = abs(gap) > gap_threshold
            except (ArbitrageError, DomainError):
                implied = None
                gap = None
                flagged = True
        results.append(
            ScanRow(
                ticker=row.ticker,
                quoted_recovery=row.recovery_swap_rate,
                theoretical_dds=theoretical,
                implied_recovery=implied,
                gap=gap,
                arbitrage_flag=flagged,
            )
        )
    return ScanReport(tuple(results), gap_threshold)
