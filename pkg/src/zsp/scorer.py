"""Entailment scoring backends.

The engine only needs one operation: score a premise against an ordered
batch of hypothesis sentences, returning one probability in [0, 1] per
hypothesis. Three backends implement it:

* OracleScorer - deterministic table lookup, used to pin test behavior.
* RemoteScorer - HTTP client for a model-serving sidecar.
* CachedScorer - transparent (premise, hypothesis)-keyed cache wrapper.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import requests

from .errors import BackendUnavailable, MalformedResponse, ScoreOutOfRange


@dataclass(frozen=True)
class ScoreRequest:
    """A premise with the hypotheses to score against it, in order.

    ``premise_key`` is an optional stable identifier (normally the instance
    id); fixture-driven backends key on it so stored scores survive premise
    whitespace edits.
    """

    premise: str
    hypotheses: tuple[str, ...]
    premise_key: str | None = None

    def __post_init__(self):
        if not self.premise.strip():
            raise ValueError("premise must be non-empty")
        if not self.hypotheses:
            raise ValueError("at least one hypothesis is required")
        if not isinstance(self.hypotheses, tuple):
            object.__setattr__(self, "hypotheses", tuple(self.hypotheses))


class Scorer(Protocol):
    def score_batch(self, request: ScoreRequest) -> list[float]:
        """One score per hypothesis, order-preserving, each in [0, 1]."""
        ...


def _check_range(value: float, origin: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ScoreOutOfRange(f"{origin} returned score {value!r} outside [0, 1]")
    return float(value)


class OracleScorer:
    """Table-driven deterministic backend.

    Scores are keyed by (premise key, hypothesis text); lookups fall back
    from the request's premise_key to the raw premise text, then to
    ``default_score``.
    """

    def __init__(self, scores: dict[tuple[str, str], float] | None = None,
                 default_score: float = 0.0):
        self.scores = dict(scores or {})
        self.default_score = default_score
        for (key, hyp), value in self.scores.items():
            _check_range(value, f"oracle entry ({key!r}, {hyp!r})")
        _check_range(default_score, "oracle default")

    def score_batch(self, request: ScoreRequest) -> list[float]:
        out = []
        for hyp in request.hypotheses:
            score = self.default_score
            for key in (request.premise_key, request.premise):
                if key is not None and (key, hyp) in self.scores:
                    score = self.scores[(key, hyp)]
                    break
            out.append(score)
        return out

    @classmethod
    def from_file(cls, path: str | Path) -> "OracleScorer":
        """Load a JSON oracle: {"default_score": x, "scores": {key: {hyp: score}}}."""
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        scores = {
            (key, hyp): float(value)
            for key, hyps in payload.get("scores", {}).items()
            for hyp, value in hyps.items()
        }
        return cls(scores=scores, default_score=float(payload.get("default_score", 0.0)))


class RemoteScorer:
    """Client for the /v1/score sidecar protocol.

    Requests are split into chunks of at most ``max_batch_size`` hypotheses.
    Connection failures are retried with backoff before giving up; a
    reachable server answering with a non-200 status, a length mismatch, or
    out-of-range scores fails immediately.
    """

    def __init__(self, endpoint: str, model: str | None = None,
                 max_batch_size: int = 32, timeout: float = 30.0,
                 retries: int = 2, backoff: float = 0.5):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.max_batch_size = max(1, max_batch_size)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff

    def _post(self, premise: str, hypotheses: tuple[str, ...]) -> list[float]:
        body: dict = {"premise": premise, "hypotheses": list(hypotheses)}
        if self.model is not None:
            body["model"] = self.model
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                resp = requests.post(
                    f"{self.endpoint}/v1/score", json=body, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_exc = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (2**attempt))
                continue
            if resp.status_code != 200:
                raise MalformedResponse(
                    f"score endpoint returned HTTP {resp.status_code}: {resp.text[:200]}"
                )
            try:
                scores = resp.json()["scores"]
            except (ValueError, KeyError) as exc:
                raise MalformedResponse(f"unparseable score response: {exc}") from exc
            if not isinstance(scores, list) or len(scores) != len(hypotheses):
                raise MalformedResponse(
                    f"expected {len(hypotheses)} scores, got "
                    f"{len(scores) if isinstance(scores, list) else type(scores).__name__}"
                )
            return [_check_range(s, self.endpoint) for s in scores]
        raise BackendUnavailable(
            f"score endpoint {self.endpoint} unreachable after "
            f"{self.retries + 1} attempts: {last_exc}"
        )

    def score_batch(self, request: ScoreRequest) -> list[float]:
        out: list[float] = []
        hyps = request.hypotheses
        for start in range(0, len(hyps), self.max_batch_size):
            out.extend(self._post(request.premise, hyps[start : start + self.max_batch_size]))
        return out

    def health(self) -> dict:
        try:
            resp = requests.get(f"{self.endpoint}/v1/health", timeout=self.timeout)
        except requests.RequestException as exc:
            raise BackendUnavailable(f"health check failed: {exc}") from exc
        if resp.status_code != 200:
            raise MalformedResponse(f"health endpoint returned HTTP {resp.status_code}")
        return resp.json()


class CachedScorer:
    """Wrap any backend with a per-(premise, hypothesis) score cache.

    Only successful scores are stored, so a failed call is retried against
    the backend next time. Safe for concurrent use.
    """

    def __init__(self, backend: Scorer):
        self.backend = backend
        self._cache: dict[tuple[str | None, str, str], float] = {}
        self._lock = threading.Lock()

    def score_batch(self, request: ScoreRequest) -> list[float]:
        keys = [(request.premise_key, request.premise, h) for h in request.hypotheses]
        with self._lock:
            missing = list(dict.fromkeys(k for k in keys if k not in self._cache))
            found = {k: self._cache[k] for k in keys if k in self._cache}
        if missing:
            sub = ScoreRequest(
                premise=request.premise,
                hypotheses=tuple(k[2] for k in missing),
                premise_key=request.premise_key,
            )
            fresh = self.backend.score_batch(sub)
            with self._lock:
                self._cache.update(zip(missing, fresh))
            found.update(zip(missing, fresh))
        return [found[k] for k in keys]


def cached(backend: Scorer) -> CachedScorer:
    """Convenience wrapper constructor."""
    return CachedScorer(backend)
