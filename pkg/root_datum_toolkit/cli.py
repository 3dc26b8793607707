from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from collections.abc import Sequence
from typing import Any, TextIO

from .config import SettingsError, load_settings
from .datum import ToolkitEngine
from .datum.errors import ToolkitError
from .datum.model import Report

logger = logging.getLogger("root_datum_toolkit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdt", description="Euclidean root datum toolkit")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("validate", help="check a datum file (or every datum file in a directory)")
    p.add_argument("path")

    p = verbs.add_parser("standard", help="emit the standard datum of a type")
    p.add_argument("--type", dest="family", required=True, help="A, B, C, D or BC")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--length2", default="1", help="squared side length L^2, rational")

    p = verbs.add_parser("classify", help="type, fundamental group and case")
    p.add_argument("path")
    p.add_argument(
        "--orbit", action="store_true", help="also close the Weyl group and report the orbit case"
    )

    for name, text in (
        ("pi1", "fundamental group Gamma / Gamma_0"),
        ("split", "finest orthogonal splitting"),
        ("polysphere", "whether a full-rank polysphere exists"),
        ("covers", "all lattices between Gamma_0 and Gamma_1"),
    ):
        p = verbs.add_parser(name, help=text)
        p.add_argument("path")

    p = verbs.add_parser("iso", help="search for an isometry between two data")
    p.add_argument("first")
    p.add_argument("second")

    p = verbs.add_parser("spectrum", help="eigenvalues up to a bound, in units of 4 pi^2 / L^2")
    p.add_argument("path")
    p.add_argument("--mults", required=True, help="m1,m2,m+,m-")
    p.add_argument("--bound", required=True)
    p.add_argument(
        "--absolute", action="store_true", help="also report eigenvalues times 4 pi^2 / L^2"
    )

    p = verbs.add_parser("first-eigencheck", help="whether eps_1 spans the first eigenspace")
    p.add_argument("path")
    p.add_argument("--mults", required=True, help="m1,m2,m+,m-")

    p = verbs.add_parser("embed", help="build and check the torus embedding")
    p.add_argument("path")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--a", type=float, default=0.0, help="radius of the zero-weight component")
    p.add_argument(
        "--points", default=None, help="write sampled points as CSV to this path ('-' for stdout)"
    )
    p.add_argument("--report", default=None, help="report path, required with --points -")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
    except SettingsError as exc:
        _configure_logging("WARNING")
        return _emit(Report("error", {"error": "Settings"}, (str(exc),)), sys.stdout)
    _configure_logging(settings.log_level)

    engine = ToolkitEngine(
        max_weyl=settings.max_weyl,
        max_rank=settings.max_rank,
        embed_tol=settings.embed_tol,
    )
    logger.debug("running %s with %s", args.verb, settings)

    if args.verb == "embed":
        return _embed(engine, args)
    return _emit(_dispatch(engine, args), sys.stdout)


def _dispatch(engine: ToolkitEngine, args: argparse.Namespace) -> Report:
    verb = args.verb
    if verb == "validate":
        return engine.validate(args.path)
    if verb == "standard":
        return engine.standard(args.family, args.rank, args.length2)
    if verb == "classify":
        return engine.classify(args.path, orbit=args.orbit)
    if verb == "pi1":
        return engine.pi1(args.path)
    if verb == "split":
        return engine.split(args.path)
    if verb == "polysphere":
        return engine.polysphere(args.path)
    if verb == "covers":
        return engine.covers(args.path)
    if verb == "iso":
        return engine.iso(args.first, args.second)
    if verb == "spectrum":
        return engine.spectrum(args.path, args.mults, args.bound, absolute=args.absolute)
    if verb == "first-eigencheck":
        return engine.first_eigencheck(args.path, args.mults)
    raise AssertionError(f"unhandled verb {verb}")


def _embed(engine: ToolkitEngine, args: argparse.Namespace) -> int:
    if args.points == "-" and not args.report:
        return _emit(Report("error", {"error": "Usage"}, ("--points - needs --report PATH",)), sys.stdout)
    report = engine.embed(args.path, samples=args.samples, tol=args.tol, a=args.a)
    points_text: str | None = None
    if args.points and report.status != "error":
        try:
            rows = engine.embed_points(args.path, samples=args.samples, a=args.a)
        except ToolkitError as exc:
            return _emit(Report("error", {"error": "Embedding"}, (str(exc),)), sys.stdout)
        text = points_csv(rows)
        if args.points == "-":
            points_text = text
        else:
            try:
                with open(args.points, "w", encoding="utf-8", newline="") as handle:
                    handle.write(text)
            except OSError as exc:
                return _emit(_output_error(args.points, exc), sys.stdout)
    if not args.report:
        return _emit(report, sys.stdout)
    try:
        handle = open(args.report, "w", encoding="utf-8")
    except OSError as exc:
        return _emit(_output_error(args.report, exc), sys.stdout)
    # stdout holds only CSV once the report file is open
    if points_text is not None:
        sys.stdout.write(points_text)
    with handle:
        return _emit(report, handle)


def _output_error(path: str, exc: OSError) -> Report:
    return Report("error", {"error": "Output"}, (f"cannot write {path}: {exc.strerror or exc}",))


def points_csv(rows: Sequence[tuple[Any, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if rows:
        r, d = len(rows[0][0]), len(rows[0][1])
        writer.writerow([f"h{j + 1}" for j in range(r)] + [f"x{j + 1}" for j in range(d)])
    for h, point in rows:
        writer.writerow([f"{float(x):.17g}" for x in h] + [f"{float(x):.17g}" for x in point])
    return buffer.getvalue()


def render_report(report: Report) -> dict[str, Any]:
    return {
        "status": report.status,
        "payload": report.payload,
        "diagnostics": list(report.diagnostics),
    }


def _emit(report: Report, stream: TextIO) -> int:
    stream.write(json.dumps(render_report(report), sort_keys=True, indent=2) + "\n")
    stream.flush()
    return report.exit_code


def _configure_logging(level: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("root_datum_toolkit")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


if __name__ == "__main__":
    raise SystemExit(main())
