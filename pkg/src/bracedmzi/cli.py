"""Command-line front end: ``bracedmzi {mzi,braced,sweep,verify}``.

Exit status: 0 success, 1 I/O failure, 2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import analysis, verification
from .experiments import ExperimentParams, InputKind, WheelerMzi, coincidence_curve, mzi_detection, mzi_output
from .network import balanced_bs

MZI_COLUMNS = ("phi", "P4", "P5")
BRACED_COLUMNS = ("phi", "epsilon", "alpha", "P46", "P47", "P56", "P57", "K", "V")
SWEEP_COLUMNS = ("phi", "epsilon", "epsilon_sq", "alpha", "P46")

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("grid counts must be at least 1")
    return value


@dataclass
class RunConfig:
    command: str
    phi_values: np.ndarray
    epsilon_values: np.ndarray = field(default_factory=lambda: np.array([1 / math.sqrt(2)]))
    alpha: float = 1.0
    kind: str = "pair"
    bs2_present: bool = True
    out: str | None = None
    format: str = "csv"


def _axis(single: float, steps: int | None, start: float, stop: float) -> np.ndarray:
    if steps is None:
        return np.array([single])
    return np.linspace(start, stop, steps)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bracedmzi", description="Braced Mach-Zehnder photon simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p):
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def phi_flags(p, steps=None):
        p.add_argument("--phi", type=_finite, default=0.0, help="single phase in radians")
        p.add_argument("--phi-steps", type=_count, default=steps, help="scan phi over [start, stop] instead")
        p.add_argument("--phi-start", type=_finite, default=0.0)
        p.add_argument("--phi-stop", type=_finite, default=2 * math.pi)

    def braced_flags(p, steps=None, kind="pair"):
        p.add_argument("--epsilon", type=_finite, default=1 / math.sqrt(2), help="BS5 transmission")
        p.add_argument("--epsilon-steps", type=_count, default=steps, help="scan epsilon over [start, stop]")
        p.add_argument("--epsilon-start", type=_finite, default=0.0)
        p.add_argument("--epsilon-stop", type=_finite, default=1.0)
        p.add_argument("--alpha", type=_finite, default=None, help="input weight (superposed kind only)")
        p.add_argument("--kind", choices=[k.value for k in InputKind], default=kind)

    p = sub.add_parser("mzi", help="single-photon Mach-Zehnder fringes")
    phi_flags(p)
    p.add_argument("--no-bs2", action="store_true", help="pull out the second beam splitter")
    io_flags(p)

    p = sub.add_parser("braced", help="braced-MZI coincidences and duality metrics")
    phi_flags(p)
    braced_flags(p)
    io_flags(p)

    p = sub.add_parser("sweep", help="(phi, epsilon) grid of the D4/D6 coincidence")
    phi_flags(p, steps=64)
    braced_flags(p, steps=21, kind="superposed")
    io_flags(p)

    sub.add_parser("verify", help="run the full verification suite")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return RunConfig("verify", np.array([]))
    phis = _axis(args.phi, args.phi_steps, args.phi_start, args.phi_stop)
    if args.command == "mzi":
        return RunConfig("mzi", phis, bs2_present=not args.no_bs2, out=args.out, format=args.format)

    effective = {"pair": 1.0, "antibunched": 0.0}.get(args.kind)
    if effective is not None and args.alpha is not None and args.alpha != effective:
        parser.error(f"--alpha does not apply to --kind {args.kind}")
    alpha = effective if effective is not None else (1.0 if args.alpha is None else args.alpha)
    eps = _axis(args.epsilon, args.epsilon_steps, args.epsilon_start, args.epsilon_stop)
    try:
        for e in eps:
            ExperimentParams(0.0, e, alpha)
    except ValueError as exc:
        parser.error(str(exc))
    return RunConfig(args.command, phis, eps, alpha, args.kind, out=args.out, format=args.format)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def mzi_rows(config: RunConfig):
    for phi in config.phi_values:
        p4, p5 = mzi_detection(mzi_output(WheelerMzi(balanced_bs(), float(phi), config.bs2_present)))
        yield phi, p4, p5


def braced_rows(config: RunConfig):
    """phi-major rows; each epsilon column is one batched phase scan."""
    per_eps = []
    for eps in config.epsilon_values:
        curves = [coincidence_curve(config.phi_values, eps, config.alpha, config.kind, d) for d in
                  ((4, 6), (4, 7), (5, 6), (5, 7))]
        per_eps.append((eps, curves, analysis.duality(eps, config.alpha)))
    for i, phi in enumerate(config.phi_values):
        for eps, curves, metrics in per_eps:
            yield (phi, eps, config.alpha, *(c[i] for c in curves), metrics.K, metrics.V)


def sweep_rows(config: RunConfig):
    grid = analysis.sweep_p46(config.phi_values, config.epsilon_values, config.alpha, config.kind)
    yield from grid.rows()


def render(columns: Sequence[str], rows, fmt: str) -> str:
    records = [[_fmt(v) for v in row] for row in rows]
    if fmt == "json":
        objs = [{c: float(v) for c, v in zip(columns, rec)} for rec in records]
        return json.dumps(objs, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(records)
    return buf.getvalue()


def run(config: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if config.command == "verify":
        results = verification.run_all()
        for r in results:
            print(r.line(), file=stdout)
        ok = all(r.passed for r in results)
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed", file=stdout)
        return EXIT_OK if ok else EXIT_VERIFY

    columns, rows = {
        "mzi": (MZI_COLUMNS, mzi_rows),
        "braced": (BRACED_COLUMNS, braced_rows),
        "sweep": (SWEEP_COLUMNS, sweep_rows),
    }[config.command]
    text = render(columns, rows(config), config.format)
    if config.out is None:
        stdout.write(text)
        return EXIT_OK
    try:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"bracedmzi: cannot write {config.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
