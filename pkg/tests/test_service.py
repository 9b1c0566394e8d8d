import pytest
from fastapi.testclient import TestClient

from so3chain.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_check_endpoint(client):
    reply = client.post("/check", json={"seed": 1, "n_points": 1, "rtt_pairs": 1})
    assert reply.status_code == 200
    body = reply.json()
    assert body["schema"] == 1
    assert body["seed"] == 1
    assert body["ok"] is True
    assert len(body["identities"]) >= 20
    assert all(v["passed"] for v in body["identities"].values())


def test_check_rejects_degenerate_chain(client):
    reply = client.post(
        "/check",
        json={"chain": {"L": 2, "c": [1.0, 0.0], "xi": [[0.5, 0.0], [0.5, 0.0]]}},
    )
    assert reply.status_code == 422


def test_check_rejects_unknown_field(client):
    assert client.post("/check", json={"sneed": 1}).status_code == 422


def test_bethe_endpoint(client):
    reply = client.post("/bethe", json={"seed": 2, "r": 2})
    assert reply.status_code == 200
    body = reply.json()
    assert body["ok"] is True
    assert body["closed_vs_rec12"] < 1e-8
    assert body["closed_vs_rec23"] < 1e-8
    assert len(body["state"]["vector"]) == 9


def test_act_endpoint_reports_partitions(client):
    reply = client.post("/act", json={"seed": 3, "i": 1, "j": 3, "r": 1})
    assert reply.status_code == 200
    body = reply.json()
    assert body["ok"] is True
    assert body["residual"] < 1e-8
    assert body["n_partitions"] == 1
    assert set(body) >= {"i", "j", "z", "params", "residual", "n_partitions", "pruned"}


def test_solve_endpoint_symmetric_chain(client):
    chain = {"L": 2, "c": [1.0, 0.0], "xi": [[-0.6, 0.0], [0.6, 0.0]]}
    reply = client.post(
        "/solve",
        json={"chain": chain, "r": 1, "seeds": [[[0.3, 0.0]]], "seed": 0},
    )
    assert reply.status_code == 200
    body = reply.json()
    assert body["ok"] is True
    (report,) = body["root_sets"]
    assert abs(report["roots"][0][0]) < 1e-9
    assert report["ed_match_gap"] < 1e-8


def test_spectrum_endpoint(client):
    chain = {"L": 2, "c": [1.0, 0.0], "xi": [[-0.6, 0.0], [0.6, 0.0]]}
    reply = client.post("/spectrum", json={"chain": chain, "r": 1, "seed": 4})
    assert reply.status_code == 200
    body = reply.json()
    assert body["ok"] is True
    assert all(rep["ok"] for rep in body["reports"])


def test_scalar_endpoint(client):
    reply = client.post("/scalar", json={"seed": 5, "samples": 6, "r_values": [0, 1]})
    assert reply.status_code == 200
    body = reply.json()
    assert body["ok"] is True
    for rep in body["reports"]:
        assert rep["rho_spread"] < 1e-6


def test_scalar_rejects_complex_chain(client):
    chain = {"L": 2, "c": [1.0, 0.0], "xi": [[0.31, 0.1], [-0.42, 0.0]]}
    reply = client.post("/scalar", json={"chain": chain, "samples": 2})
    assert reply.status_code == 422
