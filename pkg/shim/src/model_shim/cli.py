"""`model-shim` command line: serve the inference endpoint."""

from __future__ import annotations

import argparse
import logging
import sys

import uvicorn

from .app import create_app
from .backends import UnloadedBackend, resolve_backend


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="model-shim",
        description="Reference inference server for the multi-hop QA wire protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    serve = sub.add_parser("serve", help="serve POST /v1/infer")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8400)
    serve.add_argument(
        "--backend",
        default="echo",
        help="'echo' (scripted, deterministic) or a module:factory path "
        "to a model-backed implementation",
    )
    serve.add_argument("--log-level", default="info")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    backend = resolve_backend(args.backend)
    if isinstance(backend, UnloadedBackend):
        logging.getLogger("model_shim").warning(
            "backend unavailable (%s); serving 503 for every request",
            backend.reason,
        )
    uvicorn.run(
        create_app(backend),
        host=args.host,
        port=args.port,
        log_level=args.log_level,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
