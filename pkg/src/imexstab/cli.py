"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import boundary
from .errors import StabilityError
from .output import render_svg, write_csv
from .stabfn import stability_polynomials
from .tableau import Severity, TableauError, load_tableau, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

METHODS = ("root", "definition", "continuation")


@dataclass(frozen=True)
class RunConfig:
    tableau_path: str
    method: str = "root"
    n_samples: int = 256
    rho_max: float = 20.0
    tol: float = 1e-10
    out_csv: Optional[str] = None
    out_svg: Optional[str] = None

    def __post_init__(self):
        if self.method not in METHODS + ("all",):
            raise ValueError(f"unknown method {self.method!r}")
        if self.n_samples < boundary.MIN_SAMPLES:
            raise ValueError(f"--samples must be at least {boundary.MIN_SAMPLES}")
        if not self.rho_max > 0:
            raise ValueError("--rho-max must be positive")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(config: RunConfig):
    try:
        return load_tableau(config.tableau_path)
    except OSError as exc:
        print(f"error: cannot read {config.tableau_path}: {exc.strerror or exc}", file=sys.stderr)
    except TableauError as exc:
        print(f"error: invalid tableau {config.tableau_path}: {exc}", file=sys.stderr)
    return None


def cmd_check(config: RunConfig) -> int:
    t = _load(config)
    if t is None:
        return EXIT_INPUT
    diags = validate(t)
    for d in diags:
        print(d)
    if any(d.severity is Severity.ERROR for d in diags):
        return EXIT_INPUT
    if not diags:
        print(f"{t.name or config.tableau_path}: ok (s = {t.s})")
    return EXIT_OK


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def cmd_stabfn(config: RunConfig) -> int:
    t = _load(config)
    if t is None:
        return EXIT_INPUT
    sf = stability_polynomials(t)
    print("p (rows: powers of z1, columns: powers of z2)")
    for row in sf.p.coeffs:
        print("  " + " ".join(_fmt17(c) for c in row))
    print("q (powers of z1)")
    print("  " + " ".join(_fmt17(c) for c in sf.q.coeffs))
    return EXIT_OK


def _trace(sf, method: str, config: RunConfig) -> boundary.BoundaryCurve:
    if method == "root":
        return boundary.trace_root_method(sf, config.n_samples, config.rho_max)
    if method == "definition":
        return boundary.trace_definition_method(sf, config.n_samples, config.rho_max, config.tol)
    return boundary.trace_continuation_method(
        sf, 2 * math.pi / config.n_samples, config.rho_max)


def cmd_boundary(config: RunConfig) -> int:
    t = _load(config)
    if t is None:
        return EXIT_INPUT
    sf = stability_polynomials(t)
    methods = METHODS if config.method == "all" else (config.method,)
    curves = []
    try:
        for method in methods:
            curves.append(_trace(sf, method, config))
    except StabilityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if config.out_csv:
        write_csv(config.out_csv, curves)
    if config.out_svg:
        with open(config.out_svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(curves, title=t.name or ""))
    n_failed = 0
    for curve in curves:
        rhos = np.array([p.rho for p in curve.points if p.status != "failed"])
        failed = len(curve.failed)
        n_failed += failed
        fallback = sum(p.status == "fallback" for p in curve.points)
        if rhos.size:
            span = f"rho min {rhos.min():.12g}, max {rhos.max():.12g}"
        else:
            span = "no boundary points"
        print(f"{curve.method}: {len(curve.points)} rays, {span}, "
              f"failed {failed}, fallback {fallback}")
    return EXIT_NUMERIC if n_failed else EXIT_OK


def cmd_area(config: RunConfig) -> int:
    t = _load(config)
    if t is None:
        return EXIT_INPUT
    sf = stability_polynomials(t)
    try:
        curve = boundary.trace_root_method(sf, config.n_samples, config.rho_max)
    except StabilityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        value = boundary.area(curve)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{value:.12g}")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "stabfn": cmd_stabfn,
            "boundary": cmd_boundary, "area": cmd_area}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="imexstab",
                     description="L-stable region boundary of IMEX Runge-Kutta schemes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tableau_arg(p):
        p.add_argument("--tableau", required=True, metavar="FILE", help="tableau JSON file")

    def sweep_args(p):
        p.add_argument("--samples", type=int, default=256, metavar="N",
                       help="number of rays (default 256)")
        p.add_argument("--rho-max", type=float, default=20.0, metavar="R",
                       help="radius cap (default 20)")

    tableau_arg(sub.add_parser("check", help="validate a tableau"))
    tableau_arg(sub.add_parser("stabfn", help="print the coefficients of p and q"))

    b = sub.add_parser("boundary", help="trace the region boundary")
    tableau_arg(b)
    b.add_argument("--method", choices=METHODS + ("all",), default="root")
    sweep_args(b)
    b.add_argument("--tol", type=float, default=1e-10,
                   help="bisection width for the definition method")
    b.add_argument("--out", required=True, metavar="FILE.csv")
    b.add_argument("--svg", metavar="FILE.svg")

    a = sub.add_parser("area", help="area enclosed by the root-method boundary")
    tableau_arg(a)
    sweep_args(a)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            tableau_path=args.tableau,
            method=getattr(args, "method", "root"),
            n_samples=getattr(args, "samples", 256),
            rho_max=getattr(args, "rho_max", 20.0),
            tol=getattr(args, "tol", 1e-10),
            out_csv=getattr(args, "out", None),
            out_svg=getattr(args, "svg", None),
        )
    except ValueError as exc:
        parser.error(str(exc))
    return COMMANDS[args.command](config)


if __name__ == "__main__":
    sys.exit(main())
