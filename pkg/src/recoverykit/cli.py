"""Command line client for the pricing toolkit.

Flags follow dealer quote conventions: recovery-style quantities (rates,
means, stdevs) in percent and spreads in basis points, converted to decimals
at this boundary. Every subcommand runs in-process by default or against a
running HTTP service with --server; both paths share the same request and
response models, so results are identical.

Exit codes: 0 success, 2 parse or domain errors, 3 when the scanner raises
any arbitrage flag, 64 for unknown subcommands or flags.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx
import pydantic

from . import __version__
from .calibration import read_quotes_csv
from .convexity import DEFAULT_MC_DRAWS, DEFAULT_MC_SEED, ScenarioSet
from .curves import DiscountCurve
from .errors import RecoveryKitError
from .market_io import ScanReport, ScanRow, parse_quotes
from .service import handlers, schemas

OK_EXIT = 0
ERROR_EXIT = 2
ARBITRAGE_EXIT = 3
USAGE_EXIT = 64

_ROUTES = {
    "/calibrate": handlers.calibrate,
    "/price/recovery-swap": handlers.price_recovery_swap,
    "/scan": handlers.scan_quotes,
    "/replicate": handlers.replicate,
    "/fair-rate": handlers.fair_rate,
    "/fair-dds": handlers.fair_dds,
    "/scenario-rate": handlers.scenario_rate,
}


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits 64 on usage errors, as scripts expect."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _remote_client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server, timeout=60.0)


def _invoke(args, path, request, response_model):
    """Run a request locally or POST it to --server; same models either way."""
    server = getattr(args, "server", None)
    if server:
        with _remote_client(server) as client:
            response = client.post(path, json=request.model_dump())
            if response.status_code != 200:
                try:
                    detail = response.json().get("detail", response.text)
                except ValueError:
                    detail = response.text
                raise RecoveryKitError(f"service returned {response.status_code}: {detail}")
            return response_model.model_validate(response.json())
    return _ROUTES[path](request)


def _rounded(value, digits):
    if digits is None:
        return value
    if isinstance(value, float):
        return round(value, digits)
    if isinstance(value, dict):
        return {key: _rounded(item, digits) for key, item in value.items()}
    if isinstance(value, list):
        return [_rounded(item, digits) for item in value]
    return value


def _fmt(value, digits) -> str:
    if value is None:
        return "-"
    if isinstance(value, float) and digits is not None:
        return f"{value:.{digits}f}"
    return repr(value) if isinstance(value, float) else str(value)


def _write_output(path: str, text: str) -> None:
    if path == "-":
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _pillars(curve: DiscountCurve) -> list[schemas.DiscountPillar]:
    return [schemas.DiscountPillar(time_years=t, discount_factor=d) for t, d in curve.pillars]


def _cmd_calibrate(args) -> int:
    quotes = read_quotes_csv(args.quotes)
    discount = DiscountCurve.from_csv(args.discount)
    request = schemas.CalibrateRequest(
        quotes=[
            schemas.CdsQuoteIn(
                tenor_years=q.tenor, cds_spread=q.spread, recovery_swap_rate=q.recovery_swap_rate
            )
            for q in sorted(quotes, key=lambda q: q.tenor)
        ],
        discount=_pillars(discount),
    )
    response = _invoke(args, "/calibrate", request, schemas.HazardCurveOut)
    payload = _rounded(response.model_dump(), args.round_digits)
    if args.format == "json":
        text = json.dumps(payload, indent=2)
    else:
        lines = [f"{'end (y)':>10}  {'hazard (p.a.)':>22}  {'residual':>12}"]
        for segment, residual in zip(payload["segments"], payload["residuals"]):
            lines.append(
                f"{_fmt(segment['end_time_years'], args.round_digits):>10}  "
                f"{_fmt(segment['hazard_per_annum'], args.round_digits):>22}  "
                f"{residual:12.3e}"
            )
        text = "\n".join(lines)
    _write_output(args.output, text)
    return OK_EXIT


def _cmd_price_rs(args) -> int:
    with open(args.curve, "r", encoding="utf-8") as handle:
        curve_payload = json.load(handle)
    hazard = schemas.HazardCurveOut.model_validate(curve_payload)
    discount = DiscountCurve.from_csv(args.discount)
    request = schemas.PriceRecoverySwapRequest(
        discount=_pillars(discount),
        hazard=hazard.segments,
        trade=schemas.TradeIn(
            direction=args.direction,
            swap_rate=args.swap_rate / 100.0,
            maturity_years=args.maturity,
            notional=args.notional,
        ),
        market_recovery_rate=args.market_rate / 100.0,
        cds_spread=args.cds_spread / 10_000.0,
        verify_calibration=not args.no_verify,
        extrapolate=args.extrapolate,
    )
    response = _invoke(args, "/price/recovery-swap", request, schemas.PriceRecoverySwapResponse)
    if args.format == "json":
        print(json.dumps(_rounded(response.model_dump(), args.round_digits), indent=2))
    else:
        digits = args.round_digits
        print(f"pv:                  {_fmt(response.pv, digits)}")
        print(f"pv per unit:         {_fmt(response.pv_per_unit_notional, digits)}")
        print(f"risky annuity (y):   {_fmt(response.risky_annuity_years, digits)}")
        print(f"par CDS spread (bp): {_fmt(response.par_cds_spread * 10_000.0, digits)}")
    return OK_EXIT


def _cmd_scan(args) -> int:
    rows = parse_quotes(args.quotes)
    request = schemas.ScanRequest(
        rows=[
            schemas.QuoteRowIn(
                ticker=r.ticker,
                recovery_swap_rate=r.recovery_swap_rate,
                cds_spread=r.cds_spread,
                dds_spread=r.dds_spread,
                dds_contractual_recovery=r.dds_contractual_recovery,
            )
            for r in rows
        ],
        gap_threshold=args.threshold / 100.0,
    )
    response = _invoke(args, "/scan", request, schemas.ScanResponse)
    report = ScanReport(
        rows=tuple(
            ScanRow(
                ticker=row.ticker,
                quoted_recovery=row.quoted_recovery,
                theoretical_dds=row.theoretical_dds,
                implied_recovery=row.implied_recovery,
                gap=row.gap,
                arbitrage_flag=row.arbitrage_flag,
            )
            for row in response.rows
        ),
        gap_threshold=response.gap_threshold,
    )
    if args.format == "json":
        print(report.to_json(args.round_digits))
    elif args.format == "csv":
        print(report.to_csv(args.round_digits), end="")
    else:
        print(report.to_table(args.round_digits))
    return ARBITRAGE_EXIT if response.any_arbitrage else OK_EXIT


def _cmd_replicate(args) -> int:
    request = schemas.ReplicateRequest(
        recovery_swap_rate=args.swap_rate / 100.0,
        cds_spread=args.cds_spread / 10_000.0,
        dds_contractual_recovery=args.dds_recovery / 100.0,
        grid_step=args.grid_step,
    )
    response = _invoke(args, "/replicate", request, schemas.ReplicateResponse)
    if args.format == "json":
        print(json.dumps(_rounded(response.model_dump(exclude={"table"}), args.round_digits), indent=2))
    else:
        print(response.table)
    return OK_EXIT


def _cmd_fair_rate(args) -> int:
    request = schemas.FairRateRequest(
        mean=args.mean / 100.0,
        stdev=args.stdev / 100.0,
        support_low=args.support_low / 100.0,
        support_high=args.support_high / 100.0,
        monte_carlo_draws=args.mc_draws,
        seed=args.seed,
    )
    response = _invoke(args, "/fair-rate", request, schemas.FairRateResponse)
    payload = _rounded(response.model_dump(), args.round_digits)
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        digits = args.round_digits
        mc = payload["monte_carlo"]
        print(f"exact fair rate:            {_fmt(payload['exact'], digits)}")
        print(f"approximation (harmonic):   {_fmt(payload['approx_intermediate'], digits)}")
        print(f"approximation (expansion):  {_fmt(payload['approx_final'], digits)}")
        print(f"convexity premium:          {_fmt(payload['convexity_premium'], digits)}")
        print(
            f"monte carlo ({mc['draws']} draws, seed {mc['seed']}): "
            f"{_fmt(mc['value'], digits)} +/- {_fmt(mc['standard_error'], digits)} (1 s.e.)"
        )
    return OK_EXIT


def _cmd_fair_dds(args) -> int:
    request = schemas.FairDdsRequest(
        cds_spread=args.cds_spread / 10_000.0,
        mean=args.mean / 100.0,
        stdev=args.stdev / 100.0,
        dds_contractual_recovery=args.dds_recovery / 100.0,
    )
    response = _invoke(args, "/fair-dds", request, schemas.FairDdsResponse)
    if args.format == "json":
        print(json.dumps(_rounded(response.model_dump(), args.round_digits), indent=2))
    else:
        digits = args.round_digits
        print(f"fair DDS spread (bp):       {_fmt(response.fair_dds_spread * 10_000.0, digits)}")
        print(f"no-premium DDS spread (bp): {_fmt(response.no_premium_dds_spread * 10_000.0, digits)}")
        print(f"spread gamma:               {_fmt(response.gamma, digits)}")
    return OK_EXIT


def _cmd_scenario_rate(args) -> int:
    scenario_set = ScenarioSet.from_csv(args.scenarios)
    discount = DiscountCurve.from_csv(args.discount) if args.discount else None
    request = schemas.ScenarioRateRequest(
        scenarios=[
            schemas.ScenarioIn(weight=s.weight, recovery=s.recovery, cds_spread=s.cds_spread)
            for s in scenario_set.scenarios
        ],
        maturity_years=args.maturity,
        intermediate_time_years=args.time,
        swap_rate=None if args.rate is None else args.rate / 100.0,
        discount=None if discount is None else _pillars(discount),
    )
    response = _invoke(args, "/scenario-rate", request, schemas.ScenarioRateResponse)
    payload = _rounded(response.model_dump(), args.round_digits)
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        digits = args.round_digits
        print(f"scenario fair rate:      {_fmt(payload['fair_rate'], digits)}")
        print(f"evaluated at rate:       {_fmt(payload['evaluated_rate'], digits)}")
        print(f"par consistency residual: {payload['residual']:.6e}")
        print(
            f"intermediate time / maturity: {_fmt(payload['intermediate_time_years'], digits)}"
            f" / {_fmt(payload['maturity_years'], digits)} years"
        )
    return OK_EXIT


def build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--server", metavar="URL", help="send the request to a running service instead of in-process"
    )
    shared.add_argument(
        "--round",
        dest="round_digits",
        type=int,
        metavar="N",
        help="round displayed numbers to N decimals (default: full precision)",
    )

    parser = _Parser(prog="recoverykit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    cal = sub.add_parser(
        "calibrate", parents=[shared], help="bootstrap a hazard curve from quote and discount CSVs"
    )
    cal.add_argument("quotes", help="CSV with header tenor_years,cds_spread_bp,recovery_swap_rate_pct")
    cal.add_argument("--discount", required=True, help="CSV with header time_years,discount_factor")
    cal.add_argument("--output", default="-", metavar="FILE", help="hazard curve JSON destination (default stdout)")
    cal.add_argument("--format", choices=("json", "table"), default="json")
    cal.set_defaults(func=_cmd_calibrate)

    price = sub.add_parser(
        "price-rs", parents=[shared], help="mark a seasoned recovery swap on a calibrated curve"
    )
    price.add_argument("--curve", required=True, metavar="FILE", help="hazard curve JSON from calibrate")
    price.add_argument("--discount", required=True, help="CSV with header time_years,discount_factor")
    price.add_argument("--direction", required=True, choices=("payer", "receiver"))
    price.add_argument("--swap-rate", required=True, type=float, metavar="PCT", help="contract rate in percent")
    price.add_argument("--maturity", required=True, type=float, metavar="YEARS")
    price.add_argument("--notional", type=float, default=1.0)
    price.add_argument("--market-rate", required=True, type=float, metavar="PCT", help="current market recovery swap rate in percent")
    price.add_argument("--cds-spread", required=True, type=float, metavar="BP", help="current CDS spread in basis points")
    price.add_argument("--no-verify", action="store_true", help="skip the curve/quote consistency check")
    price.add_argument("--extrapolate", action="store_true", help="extend the hazard curve flat beyond its last segment")
    price.add_argument("--format", choices=("table", "json"), default="table")
    price.set_defaults(func=_cmd_price_rs)

    scan_cmd = sub.add_parser(
        "scan",
        parents=[shared],
        aliases=["implied-recovery"],
        help="implied recovery and arbitrage scan of a quote file (exit 3 on any flag)",
    )
    scan_cmd.add_argument("quotes", help="CSV with header ticker,recovery_swap_rate_pct,cds_spread_bp,dds_spread_bp,dds_contractual_recovery_pct")
    scan_cmd.add_argument("--threshold", type=float, default=1.0, metavar="PP", help="gap flag threshold in percentage points (default 1)")
    scan_cmd.add_argument("--format", choices=("table", "csv", "json"), default="table")
    scan_cmd.set_defaults(func=_cmd_scan)

    repl = sub.add_parser(
        "replicate", parents=[shared], help="build and verify the static replication package"
    )
    repl.add_argument("--swap-rate", required=True, type=float, metavar="PCT")
    repl.add_argument("--dds-recovery", type=float, default=0.0, metavar="PCT", help="DDS contractual recovery in percent (default 0)")
    repl.add_argument("--cds-spread", required=True, type=float, metavar="BP")
    repl.add_argument("--grid-step", type=float, default=0.01, help="realized recovery grid step, decimal (default 0.01)")
    repl.add_argument("--format", choices=("table", "json"), default="table")
    repl.set_defaults(func=_cmd_replicate)

    fair = sub.add_parser(
        "fair-rate", parents=[shared], help="fair recovery swap rate under recovery uncertainty"
    )
    fair.add_argument("--mean", required=True, type=float, metavar="PCT", help="expected recovery in percent")
    fair.add_argument("--stdev", required=True, type=float, metavar="PCT", help="recovery stdev in percent")
    fair.add_argument("--support-low", type=float, default=0.0, metavar="PCT")
    fair.add_argument("--support-high", type=float, default=99.0, metavar="PCT")
    fair.add_argument("--mc-draws", type=int, default=DEFAULT_MC_DRAWS)
    fair.add_argument("--seed", type=int, default=DEFAULT_MC_SEED)
    fair.add_argument("--format", choices=("table", "json"), default="table")
    fair.set_defaults(func=_cmd_fair_rate)

    fdds = sub.add_parser(
        "fair-dds", parents=[shared], help="DDS spread carrying the convexity premium"
    )
    fdds.add_argument("--cds-spread", required=True, type=float, metavar="BP")
    fdds.add_argument("--dds-recovery", type=float, default=0.0, metavar="PCT")
    fdds.add_argument("--mean", required=True, type=float, metavar="PCT")
    fdds.add_argument("--stdev", required=True, type=float, metavar="PCT")
    fdds.add_argument("--format", choices=("table", "json"), default="table")
    fdds.set_defaults(func=_cmd_fair_dds)

    scen = sub.add_parser(
        "scenario-rate", parents=[shared], help="scenario fair rate and its par-consistency residual"
    )
    scen.add_argument("scenarios", help="CSV with header weight,recovery_pct,cds_spread_bp")
    scen.add_argument("--maturity", type=float, default=5.0, metavar="YEARS")
    scen.add_argument("--time", type=float, default=None, metavar="YEARS", help="intermediate evaluation time (default maturity/2)")
    scen.add_argument("--rate", type=float, default=None, metavar="PCT", help="fixed rate to evaluate the residual at (default: the fair rate)")
    scen.add_argument("--discount", default=None, metavar="FILE", help="discount CSV (default: flat zero rates)")
    scen.add_argument("--format", choices=("table", "json"), default="table")
    scen.set_defaults(func=_cmd_scenario_rate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return 0 if exc.code is None else USAGE_EXIT
    try:
        return args.func(args)
    except (RecoveryKitError, pydantic.ValidationError, json.JSONDecodeError) as exc:
        print(f"recoverykit: error: {exc}", file=sys.stderr)
        return ERROR_EXIT
    except httpx.HTTPError as exc:
        print(f"recoverykit: service error: {exc}", file=sys.stderr)
        return ERROR_EXIT
    except OSError as exc:
        print(f"recoverykit: error: {exc}", file=sys.stderr)
        return ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())
