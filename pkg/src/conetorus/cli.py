"""Command-line client for the service.

All commands build a request, send it to the HTTP service, and print the
response.  By default the service runs in-process over an ASGI transport;
pass --server to talk to a remote instance instead.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx
from mpmath import mpf, nstr


def _request_remote(server: str, method: str, path: str, payload):
    with httpx.Client(base_url=server, timeout=None) as client:
        if method == "GET":
            return client.get(path)
        return client.post(path, json=payload)


def _request_in_process(method: str, path: str, payload):
    import asyncio

    from .service.app import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://conetorus.local", timeout=None
        ) as client:
            if method == "GET":
                return await client.get(path)
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _call(args, method: str, path: str, payload=None):
    try:
        if args.server:
            resp = _request_remote(args.server, method, path, payload)
        else:
            resp = _request_in_process(method, path, payload)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        raise SystemExit(1)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(1)
    return resp.json()


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _csv_sig12(value: str) -> str:
    return nstr(mpf(value), 12)


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--precision", type=int, default=256, metavar="BITS",
                     help="working precision in bits (default 256)")
    sub.add_argument("--tol", default=None, metavar="REAL",
                     help="override the relevant tolerance")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--json", dest="as_csv", action="store_false",
                       help="JSON output (default)")
    group.add_argument("--csv", dest="as_csv", action="store_true",
                       help="CSV output where tabular")
    sub.set_defaults(as_csv=False)
    sub.add_argument("--server", default=None, metavar="URL",
                     help="remote service URL (default: in-process)")


def _point_flags(sub: argparse.ArgumentParser, z_required: bool) -> None:
    sub.add_argument("--theta", required=True, help="cone angle in radians")
    sub.add_argument("--x", required=True)
    sub.add_argument("--y", required=True)
    sub.add_argument("--z", required=z_required, default=None,
                     help="third coordinate; omit to solve the constraint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conetorus",
        description="Computations in the deformation space of hyperbolic cone tori",
    )
    cmds = parser.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("tracepoly", help="trace polynomial of a word")
    p.add_argument("word")
    _common(p)

    p = cmds.add_parser("eval", help="evaluate a word's trace polynomial at a point")
    p.add_argument("word")
    _point_flags(p, z_required=False)
    _common(p)

    p = cmds.add_parser("classify", help="isometry type of a word's image")
    p.add_argument("word")
    _point_flags(p, z_required=False)
    _common(p)

    p = cmds.add_parser("phi", help="triangle shape to trace coordinates")
    p.add_argument("theta_a")
    p.add_argument("theta_b")
    p.add_argument("theta_c")
    _common(p)

    p = cmds.add_parser("phi-inv", help="trace coordinates to triangle shape")
    _point_flags(p, z_required=True)
    _common(p)

    p = cmds.add_parser("newman", help="decide membership in <<r^m>>")
    p.add_argument("u")
    p.add_argument("r")
    p.add_argument("m", type=int)
    _common(p)

    p = cmds.add_parser("torsion-type", help="decide whether a word is of torsion type")
    p.add_argument("u")
    _common(p)

    p = cmds.add_parser("find-locus", help="search relation loci on coordinate curves")
    p.add_argument("--theta", required=True)
    p.add_argument("--coord", default="z", choices=("x", "y", "z"))
    p.add_argument("--N-range", dest="n_range", default="1:20", metavar="A:B",
                   help="inclusive range of word indices (default 1:20)")
    p.add_argument("--grid", default="2.05:12:0.01", metavar="START:STOP:STEP")
    p.add_argument("--torsion", default=None, metavar="P/Q",
                   help="search the torsion locus of this rotation order instead")
    p.add_argument("--samples", type=int, default=5,
                   help="certification sample count (default 5)")
    _common(p)

    p = cmds.add_parser("double-point", help="intersect two loci on different axes")
    p.add_argument("--theta", required=True)
    p.add_argument("--locus1", required=True, metavar="COORD:S:N[:P/Q]",
                   help="first locus, e.g. z:2.3417650359:19")
    p.add_argument("--locus2", required=True, metavar="COORD:S:N[:P/Q]")
    _common(p)

    p = cmds.add_parser("verify-appendix", help="check the published matrices and traces")
    _common(p)

    p = cmds.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _common(p)

    return parser


def _point_payload(args) -> dict:
    payload = {
        "theta": args.theta,
        "x": args.x,
        "y": args.y,
        "precision_bits": args.precision,
    }
    if args.z is not None:
        payload["z"] = args.z
    return payload


def _parse_locus_spec(text: str) -> dict:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise SystemExit(f"error: bad locus spec {text!r}; expected COORD:S:N[:P/Q]")
    spec = {"coordinate": parts[0], "s": parts[1], "n": int(parts[2])}
    if len(parts) == 4:
        spec["torsion_order"] = parts[3]
    return spec


def _locus_csv(doc) -> None:
    print("theta,coordinate,N,s,q,max_residual")
    for row in doc["results"]:
        q = ""
        if row.get("torsion_order"):
            q = row["torsion_order"].split("/")[-1]
        max_resid = max((mpf(r) for r in row["residuals"]), default=mpf("inf"))
        print(
            f"{_csv_sig12(row['theta'])},{row['coordinate']},{row['N']},"
            f"{_csv_sig12(row['s'])},{q},{nstr(max_resid, 12)}"
        )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command

    if cmd == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if cmd == "tracepoly":
        doc = _call(args, "POST", "/tracepoly",
                    {"word": args.word, "precision_bits": args.precision})
        _emit(doc)
        return 0

    if cmd == "eval":
        payload = {"word": args.word, **_point_payload(args)}
        _emit(_call(args, "POST", "/eval", payload))
        return 0

    if cmd == "classify":
        payload = {"word": args.word, **_point_payload(args)}
        if args.tol is not None:
            payload["tol"] = args.tol
        _emit(_call(args, "POST", "/classify", payload))
        return 0

    if cmd == "phi":
        payload = {
            "theta_a": args.theta_a, "theta_b": args.theta_b,
            "theta_c": args.theta_c, "precision_bits": args.precision,
        }
        _emit(_call(args, "POST", "/phi", payload))
        return 0

    if cmd == "phi-inv":
        payload = {
            "theta": args.theta, "x": args.x, "y": args.y, "z": args.z,
            "precision_bits": args.precision,
        }
        _emit(_call(args, "POST", "/phi-inv", payload))
        return 0

    if cmd == "newman":
        doc = _call(args, "POST", "/newman",
                    {"u": args.u, "r": args.r, "m": args.m})
        _emit(doc)
        return 0

    if cmd == "torsion-type":
        _emit(_call(args, "POST", "/torsion-type", {"u": args.u}))
        return 0

    if cmd == "find-locus":
        lo, _, hi = args.n_range.partition(":")
        start, stop, step = args.grid.split(":")
        payload = {
            "theta": args.theta,
            "coordinate": args.coord,
            "n_min": int(lo),
            "n_max": int(hi or lo),
            "grid": {"start": start, "stop": stop, "step": step},
            "precision_bits": args.precision,
            "certify_samples": args.samples,
        }
        if args.torsion is not None:
            payload["torsion_order"] = args.torsion
        if args.tol is not None:
            payload["tol"] = args.tol
        doc = _call(args, "POST", "/find-locus", payload)
        if args.as_csv:
            _locus_csv(doc)
        else:
            _emit(doc)
        return 0 if doc["certified_count"] > 0 else 1

    if cmd == "double-point":
        payload = {
            "theta": args.theta,
            "locus1": _parse_locus_spec(args.locus1),
            "locus2": _parse_locus_spec(args.locus2),
            "precision_bits": args.precision,
        }
        if args.tol is not None:
            payload["tol"] = args.tol
        _emit(_call(args, "POST", "/double-point", payload))
        return 0

    if cmd == "verify-appendix":
        doc = _call(args, "GET", "/verify-appendix")
        if args.as_csv:
            print("name,passed,note")
            for row in doc["rows"]:
                print(f"{row['name']},{row['passed']},{row['note']}")
        else:
            _emit(doc)
        return 0 if doc["all_passed"] else 1

    raise SystemExit(2)


if __name__ == "__main__":
    sys.exit(main())
