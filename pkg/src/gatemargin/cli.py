"""Thin command-line client for the service.

Every subcommand marshals its arguments into one HTTP request, prints
the response (JSON with sorted keys, or CSV for the census), and maps
structured service errors onto exit codes:

    0  success
    2  invalid input (malformed tables/circuits, non-threshold synthesize)
    3  capacity (width or enumeration budget exceeded)
    4  verification failure (failed suite, or simulate over tolerance)

By default requests run against an in-process app instance; pass
--server to target a running deployment instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAPACITY = 3
EXIT_VERIFY_FAILED = 4

_ERROR_EXITS = {"invalid_input": EXIT_INVALID, "capacity": EXIT_CAPACITY}


class CommandError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _asgi_request(method: str, path: str, payload: dict | None) -> httpx.Response:
    """One request against an in-process app (each invocation is one call)."""
    import asyncio

    from gatemargin.service import create_app

    transport = httpx.ASGITransport(app=create_app())

    async def go() -> httpx.Response:
        async with httpx.AsyncClient(
            transport=transport, base_url="http://gatemargin.local", timeout=None
        ) as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def _request(server: str | None, method: str, path: str, payload: dict | None = None):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            response = client.request(method, path, json=payload)
    else:
        response = _asgi_request(method, path, payload)
    if response.status_code == 200:
        return response
    try:
        detail = response.json().get("detail")
    except (ValueError, AttributeError):
        detail = None
    if isinstance(detail, dict) and "code" in detail:
        code = detail.get("code")
        message = detail.get("message", "request rejected")
        raise CommandError(message, _ERROR_EXITS.get(code, EXIT_INVALID))
    raise CommandError(f"request failed with status {response.status_code}: {detail}", EXIT_INVALID)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(data: dict, output: str | None) -> None:
    _emit(json.dumps(data, indent=2, sort_keys=True) + "\n", output)


def _load_json_file(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise CommandError(f"no such file: {path}", EXIT_INVALID) from exc
    except json.JSONDecodeError as exc:
        raise CommandError(f"{path} does not parse as JSON: {exc}", EXIT_INVALID) from exc


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(server, args) -> int:
    response = _request(server, "POST", "/analyze", {"table": args.table, "n": args.n})
    _emit_json(response.json(), args.output)
    return EXIT_OK


def _cmd_synthesize(server, args) -> int:
    payload: dict = {"n": args.n}
    if args.table is not None:
        payload["table"] = args.table
    if args.representation is not None:
        payload["representation"] = _load_json_file(args.representation)
    response = _request(server, "POST", "/synthesize", payload)
    data = response.json()
    _emit_json(data, args.output)
    return EXIT_OK if data.get("verified") else EXIT_VERIFY_FAILED


def _cmd_simulate(server, args) -> int:
    payload = {
        "circuit": _load_json_file(args.circuit),
        "input": args.input,
        "backend": args.backend,
    }
    response = _request(server, "POST", "/simulate", payload)
    data = response.json()
    _emit_json(data, args.output)
    discrepancy = data.get("discrepancy")
    if args.tolerance is not None and discrepancy is not None and discrepancy > args.tolerance:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def _cmd_wms_run(server, args) -> int:
    payload: dict = {"input": args.input, "samples": args.samples, "seed": args.seed}
    if args.program is not None:
        payload["program"] = _load_json_file(args.program)
    if args.representation is not None:
        payload["representation"] = _load_json_file(args.representation)
    if args.table is not None:
        payload["table"] = args.table
    response = _request(server, "POST", "/wms/run", payload)
    _emit_json(response.json(), args.output)
    return EXIT_OK


def _cmd_census(server, args) -> int:
    response = _request(server, "GET", f"/census/{args.n}")
    _emit(response.text, args.output)
    return EXIT_OK


def _cmd_verify(server, args) -> int:
    response = _request(server, "POST", "/verify", {"level": args.level, "seed": args.seed})
    data = response.json()
    for check in data["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        sys.stdout.write(f"[{status}] {check['name']}\n")
    _emit_json(data, args.output)
    return EXIT_OK if data["passed"] else EXIT_VERIFY_FAILED


def _cmd_serve(args) -> int:
    import uvicorn

    from gatemargin.service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gatemargin",
        description="Analyze threshold gates, synthesize matchgate circuits, "
        "simulate them, and run the equivalent classical sampler.",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="margin, weights, and dependence of a truth table")
    p.add_argument("table", help="binary table like 00010111, or hex like 0x17")
    p.add_argument("--n", type=int, help="input arity (required only to disambiguate hex)")
    p.add_argument("--output", help="write the JSON report here instead of stdout")

    p = sub.add_parser("synthesize", help="build a circuit for a threshold gate")
    p.add_argument("table", nargs="?", help="truth table (omit when passing --representation)")
    p.add_argument("--n", type=int)
    p.add_argument("--representation", help='path to a {"w": [...], "theta": t} JSON file')
    p.add_argument("--output", help="write the circuit JSON here instead of stdout")

    p = sub.add_parser("simulate", help="first-qubit statistics of a circuit on one input")
    p.add_argument("--circuit", required=True, help="path to a circuit JSON file")
    p.add_argument("--input", required=True, help="input bit string, qubit 1 first")
    p.add_argument("--backend", choices=("rotation", "dense", "both"), default="rotation")
    p.add_argument("--tolerance", type=float, help="with both backends: fail if they disagree by more")
    p.add_argument("--output")

    p = sub.add_parser("wms", help="weighted-majority-sampling subcommands")
    wms_sub = p.add_subparsers(dest="wms_command", required=True)
    run = wms_sub.add_parser("run", help="evaluate (and optionally sample) a program")
    run.add_argument("--program", help="path to a {pi, c} program JSON file")
    run.add_argument("--representation", help="build the program from a representation file")
    run.add_argument("--table", help="build the program from a truth table")
    run.add_argument("--input", required=True, help="input bit string")
    run.add_argument("--samples", type=int, default=0)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--output")

    p = sub.add_parser("census", help="classify every n-bit function (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output")

    p = sub.add_parser("verify", help="run the cross-module verification suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--seed", type=int, default=20260800)
    p.add_argument("--output")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "synthesize": _cmd_synthesize,
        "simulate": _cmd_simulate,
        "wms": _cmd_wms_run,
        "census": _cmd_census,
        "verify": _cmd_verify,
    }
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        return handlers[args.command](args.server, args)
    except CommandError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
