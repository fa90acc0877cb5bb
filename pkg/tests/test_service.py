"""HTTP endpoints: wire formats, error mapping, and backend agreement."""

import json

import pytest
from fastapi.testclient import TestClient

from gatemargin import ltg
from gatemargin import matchgates as mg
from gatemargin.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok"


def test_analyze_majority(client):
    body = client.post("/analyze", json={"table": "00010111"}).json()
    assert body["is_ltg"] is True
    assert body["margin"] == {"num": 1, "den": 3, "decimal": pytest.approx(1 / 3)}
    assert body["optimal_probability"]["num"] == 2
    assert body["optimal_probability"]["den"] == 3
    assert body["dependent_variables"] == [1, 2, 3]
    assert body["integer_representation"] == {"v": [5, 5, 5], "phi": 0, "weight": 15}
    assert body["weight_bounds"]["lower"]["num"] == 3
    assert body["weight_bounds"]["upper"]["num"] == 24


def test_analyze_hex_table(client):
    body = client.post("/analyze", json={"table": "0x17"}).json()
    assert body["table"] == "00010111"


def test_analyze_xor_reports_infeasibility(client):
    body = client.post("/analyze", json={"table": "0110"}).json()
    assert body["is_ltg"] is False
    assert body["margin"] is None
    lambdas = body["infeasibility"]
    assert sum(l["num"] / l["den"] for l in lambdas) == pytest.approx(1.0)


def test_analyze_malformed_table(client):
    response = client.post("/analyze", json={"table": "01x"})
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "invalid_input"


def test_analyze_capacity(client):
    response = client.post("/analyze", json={"table": "0" * 2**13})
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "capacity"


def test_synthesize_majority_verified(client):
    body = client.post("/synthesize", json={"table": "00010111"}).json()
    assert body["verified"] is True
    assert body["metadata"]["promised_probability"] == pytest.approx(2 / 3)
    assert body["metadata"]["n"] == 3
    assert body["circuit"]["num_qubits"] == 4
    assert body["min_probability"] == pytest.approx(2 / 3)
    # the returned rotation is the compiled circuit
    circuit = mg.circuit_from_dict(body["circuit"])
    assert circuit.num_qubits == 4


def test_synthesize_xor_rejected_with_note(client):
    response = client.post("/synthesize", json={"table": "0110"})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["code"] == "invalid_input"
    assert "infeasible" in detail["message"]
    assert "1/4" in detail["message"]


def test_synthesize_from_representation(client):
    payload = {"representation": {"w": [0.75, 0.25], "theta": 0.0}}
    body = client.post("/synthesize", json=payload).json()
    assert body["verified"] is True
    assert body["metadata"]["margin"] == pytest.approx(0.5)
    assert body["metadata"]["promised_probability"] == pytest.approx(0.75)


def test_synthesize_requires_one_source(client):
    response = client.post("/synthesize", json={})
    assert response.status_code == 422


def test_simulate_empty_circuit(client):
    payload = {
        "circuit": {"num_qubits": 1, "gates": []},
        "input": "0",
        "backend": "both",
    }
    body = client.post("/simulate", json=payload).json()
    assert body["p0"] == pytest.approx(1.0)
    assert body["discrepancy"] == pytest.approx(0.0, abs=1e-12)


def test_simulate_fswap_moves_the_one_away(client):
    payload = {
        "circuit": {"num_qubits": 2, "gates": [{"kind": "fswap", "qubit": 1}]},
        "input": "10",
        "backend": "both",
    }
    body = client.post("/simulate", json=payload).json()
    assert body["p0"] == pytest.approx(1.0)
    assert body["dense_p0"] == pytest.approx(1.0)


def test_simulate_dense_capacity(client):
    payload = {
        "circuit": {"num_qubits": 15, "gates": []},
        "input": "0" * 15,
        "backend": "dense",
    }
    response = client.post("/simulate", json=payload)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "capacity"


def test_simulate_rotation_backend_has_no_width_cap(client):
    payload = {
        "circuit": {"num_qubits": 40, "gates": [{"kind": "zrot", "qubit": 7, "angle": 0.3}]},
        "input": "0" * 40,
        "backend": "rotation",
    }
    body = client.post("/simulate", json=payload).json()
    assert body["p0"] == pytest.approx(1.0)


def test_simulate_malformed_circuit(client):
    payload = {
        "circuit": {"num_qubits": 2, "gates": [{"kind": "zrot", "qubit": 1}]},
        "input": "00",
        "backend": "rotation",
    }
    response = client.post("/simulate", json=payload)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "invalid_input"


def test_wms_run_from_table_with_samples(client):
    payload = {"table": "00010111", "input": "001", "samples": 50_000, "seed": 7}
    body = client.post("/wms/run", json=payload).json()
    assert body["output_expectation"] == pytest.approx(1 / 3)
    assert body["success_probability"] == pytest.approx(2 / 3)
    assert abs(body["empirical_frequency_output0"] - 2 / 3) < 0.02
    assert body["program"]["c"] == "0000"


def test_wms_run_from_program_document(client):
    payload = {
        "program": {"pi": [0.0, 1.0, 0.0, 0.0], "c": "0000"},
        "input": "010",
        "samples": 10,
        "seed": 1,
    }
    body = client.post("/wms/run", json=payload).json()
    assert body["probability_output0"] == pytest.approx(0.0)  # always reads x_2 = 1
    assert body["empirical_frequency_output0"] == pytest.approx(0.0)


def test_wms_run_requires_one_source(client):
    response = client.post("/wms/run", json={"input": "010"})
    assert response.status_code == 422


def test_census_csv_and_count(client):
    response = client.get("/census/2")
    assert response.status_code == 200
    assert response.headers["x-ltg-count"] == "14"
    lines = response.text.strip().split("\n")
    assert lines[0] == "table,is_ltg,margin_num,margin_den,dep_count"
    assert len(lines) == 17
    assert "0110,false,0,1,2" in lines


def test_census_capacity(client):
    response = client.get("/census/5")
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "capacity"


def test_verify_fast_suite(client):
    body = client.post("/verify", json={"level": "fast"}).json()
    assert body["passed"] is True
    names = {c["name"] for c in body["checks"]}
    assert "oracle_equivalence" in names
    assert "wms_equivalence" in names
    assert all(c["passed"] for c in body["checks"])


def test_census_rows_match_core(client):
    text = client.get("/census/1").text
    assert text == ltg.census_csv(ltg.exhaustive_ltg_census(1))
