"""Entry point: load the model, then serve.

A model that fails to load aborts startup with a nonzero exit so callers
never reach a half-alive service.
"""

from __future__ import annotations

import argparse
import sys

from .app import create_app
from .config import DEFAULT_MODEL, ServiceConfig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="zsp-scorer-service",
        description="Serve an NLI entailment scorer over the /v1/score protocol.",
    )
    parser.add_argument("--model", help=f"model identifier (default: {DEFAULT_MODEL})")
    parser.add_argument("--host")
    parser.add_argument("--port", type=int)
    parser.add_argument("--max-batch-size", type=int, dest="max_batch_size")
    parser.add_argument("--device", help="cpu / cuda (default: auto)")
    args = parser.parse_args(argv)

    config = ServiceConfig.from_env(
        model=args.model,
        host=args.host,
        port=args.port,
        max_batch_size=args.max_batch_size,
        device=args.device,
    )
    try:
        app = create_app(config)
    except Exception as exc:
        print(f"fatal: could not load model {config.model!r}: {exc}", file=sys.stderr)
        return 1

    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
