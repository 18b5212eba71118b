"""The same protocol exercised over a real TCP socket via uvicorn."""

from __future__ import annotations

import socket
import threading
import time

import pytest
import requests
import uvicorn

from test_protocol import fake_scorer
from zsp_scorer_service import ServiceConfig, create_app


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def live_endpoint():
    port = _free_port()
    app = create_app(ServiceConfig(model="fake-nli", port=port), scorer=fake_scorer)
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    endpoint = f"http://127.0.0.1:{port}"
    while time.time() < deadline:
        try:
            requests.get(f"{endpoint}/v1/health", timeout=0.5)
            break
        except requests.RequestException:
            time.sleep(0.05)
    else:
        raise RuntimeError("service did not come up")
    yield endpoint
    server.should_exit = True
    thread.join(timeout=5)


def test_health_over_socket(live_endpoint):
    payload = requests.get(f"{live_endpoint}/v1/health", timeout=5).json()
    assert payload == {"status": "ok", "model": "fake-nli"}


def test_score_over_socket(live_endpoint):
    hypotheses = [f"h{i}" for i in range(5)]
    resp = requests.post(
        f"{live_endpoint}/v1/score",
        json={"premise": "p", "hypotheses": hypotheses},
        timeout=5,
    )
    assert resp.status_code == 200
    scores = resp.json()["scores"]
    assert len(scores) == 5
    assert all(0.0 <= s <= 1.0 for s in scores)
    assert scores == pytest.approx(fake_scorer("p", hypotheses))


def test_concurrent_requests_over_socket(live_endpoint):
    from concurrent.futures import ThreadPoolExecutor

    def call(i: int):
        resp = requests.post(
            f"{live_endpoint}/v1/score",
            json={"premise": f"p{i}", "hypotheses": [f"a{i}", f"b{i}"]},
            timeout=5,
        )
        assert resp.status_code == 200
        return resp.json()["scores"]

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(call, range(16)))
    for i, scores in enumerate(results):
        assert scores == pytest.approx(fake_scorer(f"p{i}", [f"a{i}", f"b{i}"]))


def test_schema_violation_over_socket(live_endpoint):
    resp = requests.post(
        f"{live_endpoint}/v1/score", json={"premise": "p", "hypotheses": []}, timeout=5
    )
    assert resp.status_code == 400
