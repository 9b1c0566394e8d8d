"""Command-line client.

Thin wrapper over the service layer: each subcommand builds the request
model (config file plus flag overrides), executes it either in process or
against a running server (--url), and prints the JSON report with sorted
keys, so a fixed seed yields a bit-identical report.

Exit codes: 0 all checks passed, 1 an identity or verification failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import So3ChainError
from .runners import RUNNERS
from .schemas import REQUEST_TYPES

COMMANDS = ("check", "bethe", "act", "solve", "spectrum", "scalar")

_FLAG_FIELDS = {
    "check": ("L", "n_points", "rtt_pairs"),
    "bethe": ("L", "r"),
    "act": ("L", "i", "j", "r"),
    "solve": ("L", "r", "n_seeds"),
    "spectrum": ("L", "r", "n_z"),
    "scalar": ("L", "samples"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="so3chain",
        description="Verification suites for so3-invariant inhomogeneous spin chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} suite")
        p.add_argument("--config", help="JSON file with the request body")
        p.add_argument("--seed", type=int, help="RNG seed (recorded in the report)")
        p.add_argument("--tol", type=float, help="override all tolerances")
        p.add_argument("--out", help="also write the report to this path")
        p.add_argument("--url", help="POST to a running server instead of in-process")
        for field in _FLAG_FIELDS[name]:
            p.add_argument(f"--{field.replace('_', '-')}", type=int, dest=field)
    srv = sub.add_parser("serve", help="run the HTTP service (requires uvicorn)")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _build_request(command: str, args: argparse.Namespace):
    body: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            body = json.load(fh)
        if not isinstance(body, dict):
            raise ValueError("config file must contain a JSON object")
    for field in ("seed", "tol") + _FLAG_FIELDS[command]:
        value = getattr(args, field, None)
        if value is not None:
            body[field] = value
    return REQUEST_TYPES[command].model_validate(body)


def _execute(command: str, request, url: str | None) -> dict:
    if url is None:
        response = RUNNERS[command](request)
        return response.model_dump(by_alias=True)
    import httpx

    reply = httpx.post(
        url.rstrip("/") + f"/{command}",
        json=request.model_dump(mode="json"),
        timeout=600.0,
    )
    reply.raise_for_status()
    return reply.json()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        request = _build_request(args.command, args)
    except (ValidationError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        report = _execute(args.command, request, args.url)
    except (So3ChainError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if report.get("ok", False) else 1


if __name__ == "__main__":
    sys.exit(main())
