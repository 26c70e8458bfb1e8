import json

import pytest
from fastapi.testclient import TestClient

from app import main


@pytest.fixture
def client():
    return TestClient(main.app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_command(client):
    response = client.post("/command", json={"command": "normalize", "args": ["z*zb"]})
    body = response.json()
    assert response.status_code == 200
    assert body["exit_code"] == 0
    assert body["result"]["kind"] == "Func"
    assert body["latency_ms"] >= 0


def test_command_errors(client):
    body = client.post("/command", json={"command": "integrate", "args": ["z"]}).json()
    assert body["exit_code"] == 2
    assert body["error"]["code"] == "NotIntegrable"

    body = client.post("/command", json={"command": "frobnicate", "args": []}).json()
    assert body["exit_code"] == 2
    assert body["error"]["code"] == "DomainError"

    body = client.post("/command", json={"command": "normalize", "args": ["z*)"]}).json()
    assert body["exit_code"] == 1
    assert body["error"]["position"] == 2


def test_verify(client):
    body = client.get("/verify/wpatch", params={"seed": 1}).json()
    assert body["exit_code"] == 0
    assert body["result"]["seed"] == 1
    assert body["result"]["failed"] == 0


def test_unknown_suite(client):
    body = client.get("/verify/nope").json()
    assert body["exit_code"] == 2
    assert body["error"]["code"] == "UnknownSuite"


def test_stats(client):
    client.post("/command", json={"command": "star", "args": ["z"]})
    body = client.get("/stats").json()
    assert body["summary"]["total_runs"] >= 1
    assert body["recent_runs"][-1]["command"] == "star"


def test_max_degree_config(client):
    previous = main.orchestrator.max_degree
    assert client.post("/config/max-degree", params={"max_degree": 20}).json()["status"] == "error"
    assert client.post("/config/max-degree", params={"max_degree": 4}).json()["new_max_degree"] == 4
    assert main.orchestrator.max_degree == 4
    main.orchestrator.max_degree = previous


def test_metrics_export(client, tmp_path, monkeypatch):
    target = tmp_path / "metrics.json"
    monkeypatch.setattr(main.settings, "metrics_file", str(target))
    client.post("/command", json={"command": "d", "args": ["z"]})
    assert client.get("/metrics/export").json()["status"] == "success"
    exported = json.loads(target.read_text())
    assert exported["summary"]["total_runs"] >= 1
