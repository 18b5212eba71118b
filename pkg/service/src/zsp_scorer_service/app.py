"""The /v1 scoring protocol over FastAPI.

POST /v1/score  {"model": optional, "premise": str, "hypotheses": [str, ...]}
                -> {"scores": [float in [0,1], ...]} order- and length-preserving
GET  /v1/health -> {"status": "ok", "model": <configured id>}

Schema violations answer 400; scorer failures answer 500 with a diagnostic.
Hypotheses are scored in chunks of at most the configured batch size.
"""

from __future__ import annotations

from typing import Callable

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig

ScorerFn = Callable[[str, list[str]], list[float]]


class ScorePayload(BaseModel):
    premise: str
    hypotheses: list[str]
    model: str | None = None


class ScoreResponse(BaseModel):
    scores: list[float]


def _default_scorer(config: ServiceConfig) -> ScorerFn:
    from .model import NliEntailmentScorer

    return NliEntailmentScorer(config.model, device=config.device)


def create_app(config: ServiceConfig | None = None, scorer: ScorerFn | None = None) -> FastAPI:
    """Build the service; ``scorer`` is injectable for protocol tests."""
    config = config or ServiceConfig.from_env()
    if scorer is None:
        scorer = _default_scorer(config)

    app = FastAPI(title="zsp scorer service", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def schema_violation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "model": config.model}

    @app.post("/v1/score", response_model=ScoreResponse)
    def score(payload: ScorePayload):
        if not payload.premise.strip():
            raise HTTPException(status_code=400, detail="premise must be non-empty")
        if not payload.hypotheses:
            raise HTTPException(status_code=400, detail="hypotheses must be non-empty")
        if payload.model is not None and payload.model != config.model:
            raise HTTPException(
                status_code=400,
                detail=f"this service runs {config.model!r}, not {payload.model!r}",
            )
        scores: list[float] = []
        for start in range(0, len(payload.hypotheses), config.max_batch_size):
            chunk = payload.hypotheses[start : start + config.max_batch_size]
            try:
                chunk_scores = scorer(payload.premise, chunk)
            except Exception as exc:  # model failure is a server-side error
                raise HTTPException(status_code=500, detail=f"scoring failed: {exc}") from exc
            scores.extend(chunk_scores)
        if len(scores) != len(payload.hypotheses):
            raise HTTPException(status_code=500, detail="backend returned a short batch")
        bad = [s for s in scores if not 0.0 <= s <= 1.0]
        if bad:
            raise HTTPException(status_code=500, detail=f"backend returned scores outside [0,1]: {bad[:3]}")
        return {"scores": [float(s) for s in scores]}

    return app
