"""Golden-file tests driving every CLI path, local and against the HTTP service."""

import json
import math
import shutil
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from recoverykit import cli
from recoverykit.service.app import app

DATA = Path(__file__).parent / "data"


def run(argv):
    return cli.main([str(part) for part in argv])


@pytest.fixture
def dealer_quotes(tmp_path):
    target = tmp_path / "dealer_quotes.csv"
    shutil.copy(DATA / "dealer_quotes.csv", target)
    return target


@pytest.fixture
def market_files(tmp_path):
    quotes = tmp_path / "quotes.csv"
    shutil.copy(DATA / "quotes_two_tenor.csv", quotes)
    discount = tmp_path / "discount.csv"
    shutil.copy(DATA / "discount_flat3.csv", discount)
    return quotes, discount


class TestScanCommand:
    def test_table_output_and_exit_zero(self, dealer_quotes, capsys):
        assert run(["scan", dealer_quotes]) == 0
        out = capsys.readouterr().out
        for ticker in ("CA", "FMC", "GECC", "T"):
            assert ticker in out
        assert "gap threshold" in out

    def test_json_format(self, dealer_quotes, capsys):
        assert run(["scan", dealer_quotes, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["any_arbitrage"] is False
        implied = {row["ticker"]: row["implied_recovery"] for row in payload["rows"]}
        assert implied["CA"] == pytest.approx(1 - 80 / 122, rel=1e-12)
        assert implied["T"] == pytest.approx(1 - 242 / 386, rel=1e-12)

    def test_csv_format(self, dealer_quotes, capsys):
        assert run(["scan", dealer_quotes, "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("ticker,")
        assert len(lines) == 5

    def test_round_applies_in_display_units(self, dealer_quotes, capsys):
        assert run(["scan", dealer_quotes, "--format", "csv", "--round", "4"]) == 0
        first = capsys.readouterr().out.strip().splitlines()[1].split(",")
        assert first[2] == "34.4262"
        assert first[4] == "122.1374"

    def test_arbitrage_exits_three(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        shutil.copy(DATA / "arbitrage.csv", bad)
        assert run(["scan", bad]) == 3
        assert "ARB" in capsys.readouterr().out

    def test_implied_recovery_alias(self, dealer_quotes, capsys):
        assert run(["implied-recovery", dealer_quotes]) == 0
        assert "CA" in capsys.readouterr().out

    def test_threshold_flag(self, dealer_quotes):
        assert run(["scan", dealer_quotes, "--threshold", "0.1"]) == 3

    def test_missing_file_exits_two(self, tmp_path, capsys):
        assert run(["scan", tmp_path / "nope.csv"]) == 2
        assert "error" in capsys.readouterr().err

    def test_malformed_file_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("not,a,quote,file\n1,2,3,4\n")
        assert run(["scan", bad]) == 2
        assert "header" in capsys.readouterr().err


class TestCalibrateCommand:
    def test_writes_curve_json_schema(self, market_files, tmp_path, capsys):
        quotes, discount = market_files
        output = tmp_path / "hazard.json"
        code = run(["calibrate", quotes, "--discount", discount, "--output", output])
        assert code == 0
        payload = json.loads(output.read_text())
        assert set(payload.keys()) == {"segments", "residuals"}
        assert payload["segments"][0]["end_time_years"] == 1.0
        assert payload["segments"][0]["hazard_per_annum"] == pytest.approx(
            0.0100 / 0.60, rel=1e-6
        )
        assert all(abs(r) <= 1e-12 for r in payload["residuals"])

    def test_stdout_and_table_format(self, market_files, capsys):
        quotes, discount = market_files
        assert run(["calibrate", quotes, "--discount", discount, "--format", "table"]) == 0
        out = capsys.readouterr().out
        assert "hazard" in out and "residual" in out

    def test_single_flat_quote_credit_triangle(self, tmp_path, capsys):
        quotes = tmp_path / "flat.csv"
        quotes.write_text("tenor_years,cds_spread_bp,recovery_swap_rate_pct\n5,60,40\n")
        discount = tmp_path / "flat_discount.csv"
        discount.write_text("time_years,discount_factor\n5,1.0\n")
        assert run(["calibrate", quotes, "--discount", discount]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["segments"][0]["hazard_per_annum"] == pytest.approx(0.01, rel=1e-10)

    def test_inconsistent_quotes_exit_two(self, tmp_path, capsys):
        quotes = tmp_path / "quotes.csv"
        quotes.write_text("tenor_years,cds_spread_bp,recovery_swap_rate_pct\n1,100,40\n5,0,40\n")
        discount = tmp_path / "discount.csv"
        discount.write_text("time_years,discount_factor\n5,1.0\n")
        assert run(["calibrate", quotes, "--discount", discount]) == 2
        assert "5.0" in capsys.readouterr().err


class TestPriceCommand:
    def test_pipeline_from_calibrate(self, market_files, tmp_path, capsys):
        quotes, discount = market_files
        curve = tmp_path / "hazard.json"
        assert run(["calibrate", quotes, "--discount", discount, "--output", curve]) == 0
        code = run(
            [
                "price-rs",
                "--curve", curve,
                "--discount", discount,
                "--direction", "receiver",
                "--swap-rate", "35",
                "--maturity", "5",
                "--market-rate", "35",
                "--cds-spread", "150",
                "--format", "json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pv"] == 0.0
        assert payload["par_cds_spread"] == pytest.approx(0.0150, abs=1e-10)

    def test_round_keeps_basis_point_display(self, market_files, tmp_path, capsys):
        quotes, discount = market_files
        curve = tmp_path / "hazard.json"
        assert run(["calibrate", quotes, "--discount", discount, "--output", curve]) == 0
        code = run(
            [
                "price-rs",
                "--curve", curve,
                "--discount", discount,
                "--direction", "receiver",
                "--swap-rate", "35",
                "--maturity", "5",
                "--market-rate", "35",
                "--cds-spread", "150",
                "--round", "2",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "par CDS spread (bp): 150.00" in out

    def test_flat_closed_form_value(self, tmp_path, capsys):
        curve = tmp_path / "hazard.json"
        curve.write_text(json.dumps({"segments": [{"end_time_years": 5.0, "hazard_per_annum": 0.01}]}))
        discount = tmp_path / "flat.csv"
        discount.write_text("time_years,discount_factor\n5,1.0\n")
        code = run(
            [
                "price-rs",
                "--curve", curve,
                "--discount", discount,
                "--direction", "receiver",
                "--swap-rate", "40",
                "--maturity", "5",
                "--market-rate", "45",
                "--cds-spread", "55",
                "--format", "json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pv"] == pytest.approx(0.05 * (1 - math.exp(-0.05)), rel=1e-10)

    def test_stale_curve_exits_two(self, tmp_path, capsys):
        curve = tmp_path / "hazard.json"
        curve.write_text(json.dumps({"segments": [{"end_time_years": 5.0, "hazard_per_annum": 0.01}]}))
        discount = tmp_path / "flat.csv"
        discount.write_text("time_years,discount_factor\n5,1.0\n")
        args = [
            "price-rs",
            "--curve", curve,
            "--discount", discount,
            "--direction", "receiver",
            "--swap-rate", "40",
            "--maturity", "5",
            "--market-rate", "45",
            "--cds-spread", "100",
        ]
        assert run(args) == 2
        assert run(args + ["--no-verify"]) == 0

    def test_extrapolate_flag_prices_beyond_last_tenor(self, tmp_path, capsys):
        curve = tmp_path / "hazard.json"
        curve.write_text(json.dumps({"segments": [{"end_time_years": 5.0, "hazard_per_annum": 0.01}]}))
        discount = tmp_path / "flat.csv"
        discount.write_text("time_years,discount_factor\n8,1.0\n")
        args = [
            "price-rs",
            "--curve", curve,
            "--discount", discount,
            "--direction", "receiver",
            "--swap-rate", "40",
            "--maturity", "7",
            "--market-rate", "45",
            "--cds-spread", "55",
        ]
        assert run(args) == 2
        capsys.readouterr()
        assert run(args + ["--extrapolate"]) == 0


class TestReplicateCommand:
    def test_table_shows_pass(self, capsys):
        assert run(["replicate", "--swap-rate", "34.5", "--cds-spread", "80"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "Sell conventional CDS" in out

    def test_json_values(self, capsys):
        code = run(
            ["replicate", "--swap-rate", "40", "--dds-recovery", "25", "--cds-spread", "100",
             "--format", "json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["dds_hedge"] == pytest.approx(0.60 / 0.75, rel=1e-12)
        assert payload["replication_holds"] is True


class TestFairRateCommand:
    def test_forty_fifteen_example(self, capsys):
        assert run(["fair-rate", "--mean", "40", "--stdev", "15", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["approx_final"] == 0.4375
        assert payload["exact"] == pytest.approx(0.4463989240817706, abs=1e-10)

    def test_round_option(self, capsys):
        assert run(["fair-rate", "--mean", "40", "--stdev", "15", "--round", "4"]) == 0
        out = capsys.readouterr().out
        assert "0.4375" in out
        assert "0.4464" in out

    def test_bad_mean_exits_two(self, capsys):
        assert run(["fair-rate", "--mean", "140", "--stdev", "15"]) == 2


class TestFairDdsCommand:
    def test_values(self, capsys):
        code = run(
            ["fair-dds", "--cds-spread", "100", "--mean", "40", "--stdev", "15", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["fair_dds_spread"] == pytest.approx(0.0177083333333, abs=1e-10)

    def test_round_in_basis_points(self, capsys):
        code = run(["fair-dds", "--cds-spread", "100", "--mean", "40", "--stdev", "15", "--round", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "fair DDS spread (bp):       177.1" in out
        assert "no-premium DDS spread (bp): 166.7" in out


class TestScenarioRateCommand:
    def test_fair_rate_and_residual(self, tmp_path, capsys):
        scenarios = tmp_path / "scenarios.csv"
        shutil.copy(DATA / "scenarios_two.csv", scenarios)
        assert run(["scenario-rate", scenarios, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["fair_rate"] == pytest.approx(0.4166666666666667, rel=1e-12)
        assert abs(payload["residual"]) < 1e-10

    def test_rate_override(self, tmp_path, capsys):
        scenarios = tmp_path / "scenarios.csv"
        shutil.copy(DATA / "scenarios_two.csv", scenarios)
        assert run(["scenario-rate", scenarios, "--rate", "45", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["evaluated_rate"] == pytest.approx(0.45)
        assert payload["residual"] < 0.0

    def test_discount_and_time_flags(self, tmp_path, capsys):
        scenarios = tmp_path / "scenarios.csv"
        shutil.copy(DATA / "scenarios_two.csv", scenarios)
        discount = tmp_path / "discount.csv"
        discount.write_text("time_years,discount_factor\n10,0.74\n")
        code = run(
            ["scenario-rate", scenarios, "--maturity", "6", "--time", "1.5",
             "--discount", discount, "--format", "json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["intermediate_time_years"] == 1.5
        assert payload["maturity_years"] == 6.0
        assert abs(payload["residual"]) < 1e-10


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run(["frobnicate"]) == 64

    def test_unknown_flag(self, dealer_quotes):
        assert run(["scan", dealer_quotes, "--bogus"]) == 64

    def test_no_arguments(self):
        assert run([]) == 64

    def test_missing_required_flag(self):
        assert run(["price-rs"]) == 64

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0
        assert "command" in capsys.readouterr().out


class TestRemoteMode:
    @pytest.fixture
    def service_client(self, monkeypatch):
        monkeypatch.setattr(cli, "_remote_client", lambda server: TestClient(app))

    def test_scan_against_service(self, service_client, dealer_quotes, capsys):
        assert run(["scan", dealer_quotes, "--server", "http://svc", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rows"][0]["ticker"] == "CA"

    def test_fair_rate_against_service(self, service_client, capsys):
        code = run(
            ["fair-rate", "--mean", "40", "--stdev", "15", "--server", "http://svc",
             "--format", "json"]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["approx_final"] == 0.4375

    def test_service_error_maps_to_exit_two(self, service_client, tmp_path, capsys):
        quotes = tmp_path / "quotes.csv"
        quotes.write_text("tenor_years,cds_spread_bp,recovery_swap_rate_pct\n1,100,40\n5,0,40\n")
        discount = tmp_path / "discount.csv"
        discount.write_text("time_years,discount_factor\n5,1.0\n")
        code = run(["calibrate", quotes, "--discount", discount, "--server", "http://svc"])
        assert code == 2
        assert "400" in capsys.readouterr().err
