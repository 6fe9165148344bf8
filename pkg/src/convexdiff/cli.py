"""Command line: ``convexdiff run|validate|demo``.

Exit codes: 0 success, 1 a scenario check failed, 2 invalid scenario or
unsupported input, 3 budget or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import arith
from .geometry import DimensionError
from .gmp import BudgetExceeded, ConvergenceError
from .scenario import SCHEMA_VERSION, ScenarioError, encode, execute, load, parse, validate
from .svg import render_svg

EXIT_OK, EXIT_CHECKS, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3
DEMOS = ("fig1", "lemmas", "lipschitz")


def write_atomic(path: Path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _env_seed():
    raw = os.environ.get("CONVEXDIFF_SEED")
    if raw is None or raw == "":
        return None
    if not raw.isdigit():
        raise ScenarioError([f"CONVEXDIFF_SEED: expected an unsigned integer, got {raw!r}"])
    return int(raw)


def build_report(doc: dict, name: str, arithmetic: str | None = None, jobs: int = 1) -> tuple:
    """Run a scenario document; returns ``(report, figures)``."""
    sc = parse(doc, arithmetic, _env_seed())
    start = time.perf_counter()
    with arith.arithmetic(sc.arithmetic):
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results, checks, figures = execute(sc, pool.map)
        else:
            results, checks, figures = execute(sc)
        svg = render_svg(figures, labels=True) if figures else None
    elapsed = time.perf_counter() - start
    report = {
        "schema_version": SCHEMA_VERSION,
        "scenario": {"name": name, "operation": sc.operation, "seed": sc.seed,
                     "inputs": sc.inputs},
        "arithmetic": sc.arithmetic,
        "tolerance": 0 if sc.arithmetic == "rational" else arith.TOL,
        "results": encode(results),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "timing": {"seconds": round(elapsed, 6)},
    }
    return report, svg


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _run_doc(doc, name, out_dir: Path, arithmetic, jobs, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        report, svg = build_report(doc, name, arithmetic, jobs)
    except ScenarioError as exc:
        for d in exc.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_INVALID
    except DimensionError as exc:
        print(f"error: unsupported input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceeded, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    output = doc.get("output", {})
    report_path = out_dir / output.get("report", f"{name}.report.json")
    write_atomic(report_path, dumps(report))
    print(f"report: {report_path}", file=stream)
    if svg is not None and "svg" in output:
        svg_path = out_dir / output["svg"]
        write_atomic(svg_path, svg)
        print(f"svg: {svg_path}", file=stream)
    for c in report["checks"]:
        print(f"  [{'PASS' if c['passed'] else 'FAIL'}] {c['name']}", file=stream)
    return EXIT_OK if report["passed"] else EXIT_CHECKS


def demo_document(name: str) -> dict:
    text = resources.files("convexdiff").joinpath("scenarios", f"{name}.json").read_text("utf-8")
    return json.loads(text)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="convexdiff",
                                 description="Differences of convex polytopes and "
                                             "approximate subdifferentials.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
        p.add_argument("--arith", choices=arith.MODES, help="override the arithmetic mode")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p_run = sub.add_parser("run", help="execute a scenario file")
    p_run.add_argument("scenario", type=Path)
    common(p_run)
    p_val = sub.add_parser("validate", help="check a scenario file without running it")
    p_val.add_argument("scenario", type=Path)
    p_demo = sub.add_parser("demo", help="run a bundled scenario")
    p_demo.add_argument("name", choices=DEMOS)
    common(p_demo)
    args = ap.parse_args(argv)

    if getattr(args, "jobs", 1) < 1:
        ap.error("--jobs must be at least 1")
    if args.command == "validate":
        try:
            diags = validate(load(args.scenario))
        except ScenarioError as exc:
            diags = exc.diagnostics
        for d in diags:
            print(f"error: {d}", file=sys.stderr)
        if not diags:
            print(f"{args.scenario}: ok")
        return EXIT_INVALID if diags else EXIT_OK
    if args.command == "run":
        try:
            doc = load(args.scenario)
        except ScenarioError as exc:
            for d in exc.diagnostics:
                print(f"error: {d}", file=sys.stderr)
            return EXIT_INVALID
        return _run_doc(doc, args.scenario.stem, args.out, args.arith, args.jobs)
    return _run_doc(demo_document(args.name), args.name, args.out, args.arith, args.jobs)


if __name__ == "__main__":
    sys.exit(main())
