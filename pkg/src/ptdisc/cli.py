"""Command-line surface.

Runs against the in-process library by default; ``--url`` switches every
data command into a thin client for a running service instance, with
identical output and exit codes.

Exit codes: 0 success, 1 usage/schema/domain error, 2 infeasible evolution
parameters, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .errors import DomainError, InfeasibleError
from .service import handlers
from .service.schemas import (
    PlanRequest,
    SimulateRequest,
    VerifyRequest,
)
from .verify import DEFAULT_SEED, SUITES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY_FAILED = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; 2 is reserved for infeasibility."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alpha_h_flag(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a real number or 'auto', got {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ptdisc",
        description=(
            "Plan, simulate and verify three-state discrimination by "
            "PT-symmetric evolution."
        ),
    )
    parser.add_argument("--version", action="version", version=f"ptdisc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input_args(p, with_alpha=True):
        p.add_argument(
            "--input",
            default="-",
            help="path to the ensemble JSON document, or - for stdin (default)",
        )
        if with_alpha:
            p.add_argument(
                "--alpha-h",
                type=_alpha_h_flag,
                default="auto",
                help="evolution alpha in radians, or 'auto' for the midpoint of "
                "the feasible range (default)",
            )
            p.add_argument(
                "--alpha-m",
                type=float,
                default=None,
                help="measurement alpha in radians (default: -pi/2 + 1e-3)",
            )
            p.add_argument(
                "--degrees",
                action="store_true",
                help="interpret all input angles (document and flags) as degrees",
            )
        p.add_argument(
            "--url",
            default=None,
            help="base URL of a running service; when set, delegate the "
            "computation instead of running in-process",
        )

    p_plan = sub.add_parser("plan", help="construct and print a discrimination plan")
    add_input_args(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_sim = sub.add_parser("simulate", help="run seeded measurement trials")
    add_input_args(p_sim)
    p_sim.add_argument("--trials", type=int, default=100_000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the seeded invariant suites")
    p_ver.add_argument(
        "--suite",
        default="all",
        choices=["all", *SUITES],
        help="which suite to run (default: all)",
    )
    p_ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_ver.add_argument("--url", default=None, help="delegate to a running service")
    p_ver.set_defaults(func=cmd_verify)

    p_exp = sub.add_parser(
        "export-bloch", help="emit per-stage Bloch coordinates for all three states"
    )
    add_input_args(p_exp)
    p_exp.add_argument("--format", default="csv", choices=["csv", "json"])
    p_exp.set_defaults(func=cmd_export_bloch)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(func=cmd_serve)

    return parser


# ---------------------------------------------------------------------------
# input/output plumbing
# ---------------------------------------------------------------------------

def _read_document(path: str) -> dict:
    raw = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DomainError(f"input is not valid JSON: {exc}") from None


def _schema_error_text(exc: ValidationError) -> str:
    first = exc.errors()[0]
    loc = ".".join(str(part) for part in first["loc"]) or "<document>"
    return f"schema error at {loc}: {first['msg']}"


def _plan_request(args, cls=PlanRequest, **extra):
    doc = _read_document(args.input)
    return cls(
        ensemble=doc,
        alpha_h=args.alpha_h,
        alpha_m=args.alpha_m,
        degrees=args.degrees,
        **extra,
    )


def _client_for(url: str):
    import httpx

    return httpx.Client(base_url=url, timeout=120.0)


def _remote(url: str, path: str, payload: dict) -> dict:
    with _client_for(url) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {"detail": resp.text}
    detail = body.get("detail", resp.text)
    if resp.status_code == 409:
        raise InfeasibleError(str(detail), rhs=body.get("rhs"))
    if isinstance(detail, list):  # FastAPI request-validation shape
        first = detail[0]
        loc = ".".join(str(p) for p in first.get("loc", []) if p != "body")
        raise DomainError(f"schema error at {loc}: {first.get('msg', '')}")
    raise DomainError(str(detail))


def _emit(document) -> None:
    json.dump(document, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_plan(args) -> int:
    req = _plan_request(args)
    if args.url:
        doc = _remote(args.url, "/plan", req.model_dump(mode="json"))
    else:
        doc = handlers.handle_plan(req).model_dump(by_alias=True)
    _emit(doc)
    return EXIT_OK


def cmd_simulate(args) -> int:
    req = _plan_request(args, cls=SimulateRequest, trials=args.trials, seed=args.seed)
    if args.url:
        doc = _remote(args.url, "/simulate", req.model_dump(mode="json"))
    else:
        doc = handlers.handle_simulate(req).model_dump(by_alias=True)
    _emit(doc["report"])
    return EXIT_OK


def cmd_verify(args) -> int:
    req = VerifyRequest(suite=args.suite, seed=args.seed)
    if args.url:
        doc = _remote(args.url, "/verify", req.model_dump(mode="json"))
    else:
        doc = handlers.handle_verify(req).model_dump()
    checks = doc["checks"]
    for check in checks:
        tag = "PASS" if check["passed"] else "FAIL"
        print(
            f"[{tag}] {check['name']}: max deviation {check['max_deviation']:.3e}"
            f" (tolerance {check['tolerance']:.3e})"
        )
    n_pass = sum(1 for c in checks if c["passed"])
    print(f"suite {doc['suite']!r} seed {doc['seed']}: {n_pass}/{len(checks)} passed")
    return EXIT_OK if doc["passed"] else EXIT_VERIFY_FAILED


def cmd_export_bloch(args) -> int:
    req = _plan_request(args)
    if args.url:
        doc = _remote(args.url, "/export-bloch", req.model_dump(mode="json"))
    else:
        doc = handlers.handle_export_bloch(req).model_dump()
    if args.format == "csv":
        sys.stdout.write(doc["csv"])
    else:
        _emit(list(doc["rows"]))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(_schema_error_text(exc), file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
