import pytest
from fastapi.testclient import TestClient

from treespace.main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def vec(*pairs):
    return [{"node": n, "coeff": c} for n, c in pairs]


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_norm(client):
    r = client.post("/space/norm", json={"space": "T", "vector": vec(("0", "1"), ("1", "1"))})
    assert r.status_code == 200
    assert r.json()["value"] == "1/1"
    assert r.json()["certificate"] == ["0"]


def test_classify_returns_the_exposing_functional(client):
    r = client.post("/space/classify", json={"vector": vec(("0", "1"), ("1", "-1"))})
    body = r.json()
    assert body["extreme"] and body["strongly_exposed"]
    assert body["exposing_functional"]["finite"] == vec(("0", "1/2"), ("1", "-1/2"))


def test_gauges(client):
    body = client.post("/space/gauge", json={"vector": vec(("0", "1"), ("1", "-1"))}).json()
    assert body == {"norm": "1/1", "gauge": "2/1", "d_gauge": "2/1"}
    body = client.post("/space/gauge", json={"vector": vec(("eps", "1"))}).json()
    assert body["d_gauge"] is None


def test_shift_round_trip(client):
    moved = client.post("/space/shift", json={"vector": vec(("eps", "1")), "node": "1"}).json()
    assert moved == {"vector": vec(("1", "1/1"))}
    back = client.post("/space/shift", json={"vector": moved["vector"], "node": "1", "inverse": True}).json()
    assert back == {"vector": vec(("eps", "1/1"))}


def test_sup_over_d(client):
    body = client.post("/dual/sup", json={"set": "D", "functional": {"finite": vec(("0", "1"), ("1", "1"))}}).json()
    assert body["value"] == "1/1"
    assert body["witness"] == vec(("1", "1/1"))


def test_l_beta_and_pullback(client):
    functional = {"branches": [{"period": "0", "tail": "1/3"}]}
    r = client.post("/dual/l-beta", json={"functional": functional, "prefix": "00", "period": "0"})
    assert r.json() == {"value": "1/3"}
    r = client.post("/dual/pullback", json={"functional": {"finite": vec(("01", "1"))}, "node": "0"})
    assert r.json()["finite"] == vec(("1", "1/1"))


def test_slice_membership(client):
    s = {"set": "BPLUS", "functional": {"finite": vec(("0", "1"))}, "delta": "1/2"}
    assert client.post("/dual/slice-membership", json={"vector": vec(("0", "1")), "slice": s}).json() == {
        "member": True}
    assert client.post("/dual/slice-membership", json={"slice": s}).json() == {"member": False}


def test_balance(client):
    body = client.post("/constructions/balance", json={"rows": [["1", "1", "1"]]}).json()
    assert body["theta"] == [1, -1, 1]
    assert body["sums"] == ["1/1"]


def test_adp(client):
    s = {"set": "BX", "functional": {"finite": vec(("0", "-1"))}, "delta": "1/2"}
    body = client.post("/constructions/adp", json={"vector": vec(("eps", "1")), "slice": s}).json()
    assert body["theta"] == -1
    assert body["y"] == vec(("0", "-1/1"), ("1", "1/1"))
    assert body["value"] == "2/1"


def test_scd_zero(client):
    body = client.post("/constructions/scd-zero", json={"n": 1, "k": 4, "selector": "shifted"}).json()
    assert body["r"] == "1/4"


@pytest.mark.parametrize("path,payload,status", [
    ("/space/norm", {"space": "M", "vector": vec(("eps", "1"))}, 422),
    ("/space/norm", {"vector": vec(("0", "1/0"))}, 400),
    ("/space/norm", {"space": "Q"}, 400),
    ("/space/classify", {"space": "TINF", "vector": []}, 422),
    ("/constructions/balance", {"rows": [["2"]]}, 422),
    ("/constructions/balance", {}, 400),
    ("/dual/sup", {"set": "E", "functional": {}}, 400),
])
def test_error_statuses(client, path, payload, status):
    r = client.post(path, json=payload)
    assert r.status_code == status
    assert "detail" in r.json()
