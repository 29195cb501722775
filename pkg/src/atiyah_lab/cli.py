"""Command-line client for the toolkit.

The CLI is a thin HTTP client: by default it mounts the FastAPI app in
process (no socket), and with ATIYAH_LAB_URL set it targets a remote server
instead, so scripted usage is identical in both modes.

Exit codes: 0 success, 1 parse or usage error, 2 degenerate geometry,
3 verification failures (a potential counterexample is a distinguished
outcome, not an error).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import httpx

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DEGENERATE = 2
EXIT_FAILURES = 3


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors with the parse-error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


class CliError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def make_client() -> httpx.Client:
    """In-process ASGI client, or a remote one when ATIYAH_LAB_URL is set."""
    base = os.environ.get("ATIYAH_LAB_URL")
    if base:
        return httpx.Client(base_url=base, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app

    # TestClient is a synchronous httpx.Client mounted directly on the ASGI
    # app; no socket is involved
    return TestClient(app, raise_server_exceptions=False)


def load_points(path: str, fmt: str | None = None) -> list[list[float]]:
    """Read a points file: JSON {"points": [[x,y,z], ...]} or CSV with an
    x,y,z header. Raises CliError (exit 1) with a location on parse problems.
    """
    if fmt is None:
        fmt = "csv" if path.lower().endswith(".csv") else "json"
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from exc

    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(
                f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}",
                EXIT_PARSE,
            ) from exc
        if not isinstance(doc, dict) or "points" not in doc:
            raise CliError(f'{path}: expected a JSON object with a "points" key', EXIT_PARSE)
        rows = doc["points"]
    else:
        reader = csv.reader(text.splitlines())
        try:
            header = next(reader)
        except StopIteration:
            raise CliError(f"{path}: empty CSV file", EXIT_PARSE) from None
        if [h.strip().lower() for h in header] != ["x", "y", "z"]:
            raise CliError(f"{path}: line 1: expected header x,y,z", EXIT_PARSE)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise CliError(
                    f"{path}: line {lineno}: expected 3 columns, got {len(row)}", EXIT_PARSE
                )
            rows.append(row)

    points = []
    for i, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise CliError(f"{path}: point {i}: expected 3 coordinates", EXIT_PARSE)
        try:
            points.append([float(v) for v in row])
        except (TypeError, ValueError) as exc:
            raise CliError(f"{path}: point {i}: non-numeric coordinate", EXIT_PARSE) from exc
    if len(points) < 2:
        raise CliError(f"{path}: need at least 2 points", EXIT_PARSE)
    return points


def emit(obj) -> None:
    """Stable JSON to stdout: sorted keys, round-trip decimal floats."""
    print(json.dumps(obj, indent=2, sort_keys=True))


def _raise_for_response(resp: httpx.Response) -> dict:
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {"code": "invalid", "detail": resp.text}
    detail = body.get("detail", "request failed")
    if body.get("code") == "degenerate":
        raise CliError(f"degenerate input: {detail}", EXIT_DEGENERATE)
    raise CliError(str(detail), EXIT_PARSE)


def cmd_det(args) -> int:
    points = load_points(args.infile, args.format)
    with make_client() as client:
        out = _raise_for_response(client.post("/det", json={"points": points}))
    emit(out)
    return EXIT_OK


def cmd_ngon(args) -> int:
    params = {"n": args.n, "direct": args.direct, "bounds": args.bounds}
    with make_client() as client:
        out = _raise_for_response(client.get("/ngon", params=params))
    emit(out)
    return EXIT_OK


def cmd_four(args) -> int:
    points = load_points(args.infile, args.format)
    if len(points) != 4:
        raise CliError(f"expected exactly 4 points, got {len(points)}", EXIT_PARSE)
    with make_client() as client:
        out = _raise_for_response(client.post("/four", json={"points": points}))
    emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    req = {
        "suite": args.suite,
        "trials": args.trials,
        "seed": args.seed,
        "n": args.n,
        "workers": args.workers,
        "severity": args.severity,
    }
    with make_client() as client:
        known = _raise_for_response(client.get("/suites"))
        if args.suite not in known:
            raise CliError(
                f"unknown suite {args.suite!r}; known: {', '.join(sorted(known))}",
                EXIT_PARSE,
            )
        out = _raise_for_response(client.post("/verify", json=req))
    report = out["report"]
    emit(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if out["counterexamples"] and args.counterexamples:
        with open(args.counterexamples, "w", encoding="utf-8") as fh:
            for rec in out["counterexamples"]:
                fh.write(json.dumps(rec, sort_keys=True))
                fh.write("\n")
    return EXIT_FAILURES if report["failures"] > 0 else EXIT_OK


def cmd_constants(args) -> int:
    with make_client() as client:
        out = _raise_for_response(client.get("/constants"))
    emit(out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    default_workers = int(os.environ.get("ATIYAH_LAB_WORKERS", "1"))

    parser = _Parser(prog="atiyah-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("det", help="determinant of a point configuration")
    p.add_argument("--in", dest="infile", required=True, help="points file")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("ngon", help="closed form and asymptotics for a regular n-gon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--direct", action="store_true", help="cross-check by direct determinant")
    p.add_argument("--bounds", action="store_true", help="include the sandwich bounds")
    p.set_defaults(func=cmd_ngon)

    p = sub.add_parser("four", help="four-point diagnostics")
    p.add_argument("--in", dest="infile", required=True, help="points file (4 points)")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.set_defaults(func=cmd_four)

    p = sub.add_parser("verify", help="run a Monte Carlo verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--workers", type=int, default=default_workers)
    p.add_argument("--severity", type=float, default=None)
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.add_argument(
        "--counterexamples", default=None, help="write failing trials here (JSONL)"
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("constants", help="computed constants and integral checks")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "ngon" and args.n < 3:
        parser.error("--n must be >= 3")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"atiyah-lab: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
