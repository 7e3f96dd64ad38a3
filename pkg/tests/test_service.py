"""HTTP surface: every endpoint exercised through the ASGI test client."""

import math

import pytest
from fastapi.testclient import TestClient

from recoverykit.service.app import app

client = TestClient(app)

FLAT_DISCOUNT_5Y = [
    {"time_years": 0.0, "discount_factor": 1.0},
    {"time_years": 5.0, "discount_factor": 1.0},
]

DEALER_SHEET_ROWS = [
    {"ticker": "CA", "recovery_swap_rate": 0.345, "cds_spread": 0.0080, "dds_spread": 0.0122},
    {"ticker": "FMC", "recovery_swap_rate": 0.395, "cds_spread": 0.0174, "dds_spread": 0.0289},
    {"ticker": "GECC", "recovery_swap_rate": 0.380, "cds_spread": 0.0026, "dds_spread": 0.0042},
    {"ticker": "T", "recovery_swap_rate": 0.370, "cds_spread": 0.0242, "dds_spread": 0.0386},
]


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_openapi_lists_every_route():
    paths = client.get("/openapi.json").json()["paths"]
    for route in (
        "/calibrate",
        "/price/recovery-swap",
        "/scan",
        "/replicate",
        "/fair-rate",
        "/fair-dds",
        "/scenario-rate",
    ):
        assert "post" in paths[route]


class TestCalibrateEndpoint:
    def test_flat_quote_yields_credit_triangle(self):
        response = client.post(
            "/calibrate",
            json={
                "quotes": [{"tenor_years": 5.0, "cds_spread": 0.0060, "recovery_swap_rate": 0.40}],
                "discount": FLAT_DISCOUNT_5Y,
            },
        )
        assert response.status_code == 200
        payload = response.json()
        assert set(payload.keys()) == {"segments", "residuals"}
        assert payload["segments"][0]["end_time_years"] == 5.0
        assert payload["segments"][0]["hazard_per_annum"] == pytest.approx(0.01, rel=1e-10)
        assert abs(payload["residuals"][0]) <= 1e-12

    def test_inconsistent_quotes_map_to_400(self):
        response = client.post(
            "/calibrate",
            json={
                "quotes": [
                    {"tenor_years": 1.0, "cds_spread": 0.0100, "recovery_swap_rate": 0.40},
                    {"tenor_years": 5.0, "cds_spread": 0.0, "recovery_swap_rate": 0.40},
                ],
                "discount": FLAT_DISCOUNT_5Y,
            },
        )
        assert response.status_code == 400
        assert response.json()["error"] == "InconsistentQuotesError"

    def test_malformed_body_is_422(self):
        response = client.post("/calibrate", json={"quotes": "nope"})
        assert response.status_code == 422


class TestPriceEndpoint:
    def test_flat_example(self):
        response = client.post(
            "/price/recovery-swap",
            json={
                "discount": FLAT_DISCOUNT_5Y,
                "hazard": [{"end_time_years": 5.0, "hazard_per_annum": 0.01}],
                "trade": {
                    "direction": "receiver",
                    "swap_rate": 0.40,
                    "maturity_years": 5.0,
                    "notional": 1.0,
                },
                "market_recovery_rate": 0.45,
                "cds_spread": 0.0055,
            },
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["pv"] == pytest.approx(0.05 * (1 - math.exp(-0.05)), rel=1e-10)
        assert payload["par_cds_spread"] == pytest.approx(0.0055, abs=1e-12)

    def test_stale_curve_is_400(self):
        response = client.post(
            "/price/recovery-swap",
            json={
                "discount": FLAT_DISCOUNT_5Y,
                "hazard": [{"end_time_years": 5.0, "hazard_per_annum": 0.01}],
                "trade": {"direction": "receiver", "swap_rate": 0.40, "maturity_years": 5.0},
                "market_recovery_rate": 0.45,
                "cds_spread": 0.0100,
            },
        )
        assert response.status_code == 400
        assert response.json()["error"] == "CalibrationError"

    def test_extrapolate_field_allows_longer_maturity(self):
        body = {
            "discount": FLAT_DISCOUNT_5Y,
            "hazard": [{"end_time_years": 3.0, "hazard_per_annum": 0.01}],
            "trade": {"direction": "receiver", "swap_rate": 0.40, "maturity_years": 5.0},
            "market_recovery_rate": 0.45,
            "cds_spread": 0.0055,
        }
        assert client.post("/price/recovery-swap", json=body).status_code == 400
        response = client.post("/price/recovery-swap", json={**body, "extrapolate": True})
        assert response.status_code == 200
        assert response.json()["pv"] == pytest.approx(0.05 * (1 - math.exp(-0.05)), rel=1e-10)


class TestScanEndpoint:
    def test_dealer_sheet_rows(self):
        response = client.post("/scan", json={"rows": DEALER_SHEET_ROWS, "gap_threshold": 0.01})
        assert response.status_code == 200
        payload = response.json()
        assert payload["any_arbitrage"] is False
        implied = {row["ticker"]: row["implied_recovery"] for row in payload["rows"]}
        assert implied["CA"] == pytest.approx(1 - 80 / 122, rel=1e-12)
        assert implied["GECC"] == pytest.approx(1 - 26 / 42, rel=1e-12)

    def test_arbitrage_row_sets_flag(self):
        rows = [{"ticker": "BAD", "recovery_swap_rate": 0.40, "cds_spread": 0.0200, "dds_spread": 0.0150}]
        response = client.post("/scan", json={"rows": rows})
        assert response.status_code == 200
        assert response.json()["any_arbitrage"] is True


class TestReplicateEndpoint:
    def test_no_arbitrage_package(self):
        response = client.post(
            "/replicate",
            json={"recovery_swap_rate": 0.345, "cds_spread": 0.0080},
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["cds_hedge"] == 1.0
        assert payload["dds_hedge"] == pytest.approx(0.655, rel=1e-15)
        assert payload["replication_holds"] is True
        assert "PASS" in payload["table"]


class TestFairRateEndpoint:
    def test_forty_fifteen_example(self):
        response = client.post("/fair-rate", json={"mean": 0.40, "stdev": 0.15})
        assert response.status_code == 200
        payload = response.json()
        assert payload["approx_final"] == 0.4375
        assert payload["exact"] == pytest.approx(0.4463989240817706, abs=1e-10)
        assert payload["convexity_premium"] == pytest.approx(0.0375, rel=1e-12)
        assert abs(payload["monte_carlo"]["value"] - payload["exact"]) <= (
            3.0 * payload["monte_carlo"]["standard_error"]
        )

    def test_deterministic_monte_carlo(self):
        body = {"mean": 0.40, "stdev": 0.15, "monte_carlo_draws": 50_000, "seed": 11}
        first = client.post("/fair-rate", json=body).json()
        second = client.post("/fair-rate", json=body).json()
        assert first == second

    def test_domain_error_is_400(self):
        response = client.post("/fair-rate", json={"mean": 1.4, "stdev": 0.15})
        assert response.status_code == 400


class TestFairDdsEndpoint:
    def test_values(self):
        response = client.post(
            "/fair-dds", json={"cds_spread": 0.0100, "mean": 0.40, "stdev": 0.15}
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["fair_dds_spread"] == pytest.approx(0.0100 / 0.6 * 1.0625, rel=1e-12)
        assert payload["no_premium_dds_spread"] == pytest.approx(0.0100 / 0.6, rel=1e-12)
        assert payload["gamma"] == pytest.approx(2 / 0.36, rel=1e-12)

    def test_zero_stdev_collapses_to_no_premium(self):
        payload = client.post(
            "/fair-dds", json={"cds_spread": 0.0100, "mean": 0.40, "stdev": 0.0}
        ).json()
        assert payload["fair_dds_spread"] == payload["no_premium_dds_spread"]


class TestScenarioRateEndpoint:
    SCENARIOS = [
        {"weight": 0.5, "recovery": 0.30, "cds_spread": 0.0100},
        {"weight": 0.5, "recovery": 0.50, "cds_spread": 0.0100},
    ]

    def test_fair_rate_and_vanishing_residual(self):
        response = client.post("/scenario-rate", json={"scenarios": self.SCENARIOS})
        assert response.status_code == 200
        payload = response.json()
        assert payload["fair_rate"] == pytest.approx(0.4166666666666667, rel=1e-12)
        assert payload["evaluated_rate"] == payload["fair_rate"]
        assert abs(payload["residual"]) < 1e-10
        assert payload["intermediate_time_years"] == 2.5

    def test_custom_rate_moves_residual_negative(self):
        response = client.post(
            "/scenario-rate", json={"scenarios": self.SCENARIOS, "swap_rate": 0.45}
        )
        payload = response.json()
        assert payload["evaluated_rate"] == 0.45
        assert payload["residual"] < 0.0

    def test_bad_weights_are_400(self):
        response = client.post(
            "/scenario-rate",
            json={"scenarios": [{"weight": 0.7, "recovery": 0.3, "cds_spread": 0.01}]},
        )
        assert response.status_code == 400
