"""The classifier-side HTTP client speaking to this service over a socket.

Skipped when the classifier package is not installed; the two packages share
only the wire protocol.
"""

from __future__ import annotations

import pytest

zsp_scorer = pytest.importorskip("zsp.scorer")

from test_live_socket import live_endpoint  # noqa: F401  (fixture reuse)
from test_protocol import fake_scorer


def test_remote_scorer_roundtrip(live_endpoint):  # noqa: F811
    scorer = zsp_scorer.RemoteScorer(live_endpoint, max_batch_size=3)
    hypotheses = tuple(f"hypothesis {i}" for i in range(7))
    request = zsp_scorer.ScoreRequest(premise="a premise", hypotheses=hypotheses)
    assert scorer.score_batch(request) == pytest.approx(
        fake_scorer("a premise", list(hypotheses))
    )


def test_remote_scorer_health_roundtrip(live_endpoint):  # noqa: F811
    scorer = zsp_scorer.RemoteScorer(live_endpoint)
    assert scorer.health() == {"status": "ok", "model": "fake-nli"}


def test_remote_scorer_sees_schema_errors(live_endpoint):  # noqa: F811
    scorer = zsp_scorer.RemoteScorer(live_endpoint, model="wrong-model")
    request = zsp_scorer.ScoreRequest(premise="p", hypotheses=("h",))
    with pytest.raises(zsp_scorer.MalformedResponse):
        scorer.score_batch(request)
