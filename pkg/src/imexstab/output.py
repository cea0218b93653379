"""CSV and SVG writers for boundary curves."""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from typing import Iterable

from .boundary import BoundaryCurve, BoundaryPoint

CSV_COLUMNS = ("method", "theta", "rho", "re_z2", "im_z2", "status")
COLORS = {"root": "#1f5fbf", "definition": "#111111", "continuation": "#c0392b"}
SVG_SIZE = 800


def _g(x: float) -> str:
    return format(x, ".17g")


def curves_to_csv(curves: Iterable[BoundaryCurve]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for curve in curves:
        for p in curve.points:
            z = p.z2
            writer.writerow((curve.method, _g(p.theta), _g(p.rho),
                             _g(z.real), _g(z.imag), p.status))
    return buf.getvalue()


def write_csv(path, curves: Iterable[BoundaryCurve]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(curves_to_csv(curves))


def read_csv(text: str) -> list[BoundaryCurve]:
    """Parse CSV produced by :func:`curves_to_csv`, preserving method order."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    grouped: dict[str, list[BoundaryPoint]] = defaultdict(list)
    for row in reader:
        grouped[row["method"]].append(
            BoundaryPoint(float(row["theta"]), float(row["rho"]), row["status"]))
    return [BoundaryCurve(method, tuple(points)) for method, points in grouped.items()]


def _segments(curve: BoundaryCurve) -> list[list[complex]]:
    """Runs of consecutive usable points; failed rays break the line."""
    runs, run = [], []
    for p in curve.points:
        if p.status == "failed" or not math.isfinite(p.rho):
            if run:
                runs.append(run)
            run = []
        else:
            run.append(p.z2)
    if run:
        runs.append(run)
    # close the loop when the curve is complete
    if len(runs) == 1 and len(runs[0]) == len(curve.points):
        runs[0].append(runs[0][0])
    return runs


def render_svg(curves: Iterable[BoundaryCurve], title: str = "") -> str:
    """Boundary curves in the z2 plane, with the centre -1 marked."""
    curves = list(curves)
    pts = [z for c in curves for run in _segments(c) for z in run] + [complex(-1, 0)]
    xs = [z.real for z in pts]
    ys = [z.imag for z in pts]
    half = max(max(xs) - min(xs), max(ys) - min(ys)) / 2 * 1.1 or 1.0
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2
    k = SVG_SIZE / (2 * half)

    def to_px(z: complex) -> tuple[float, float]:
        return (SVG_SIZE / 2 + (z.real - cx) * k, SVG_SIZE / 2 - (z.imag - cy) * k)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" '
           f'width="{SVG_SIZE}" height="{SVG_SIZE}">',
           '<rect width="100%" height="100%" fill="white"/>']
    x0, y0 = to_px(complex(cx - half, 0))
    x1, _ = to_px(complex(cx + half, 0))
    out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y0:.2f}" '
               'stroke="#bbbbbb" stroke-width="1"/>')
    xa, ya0 = to_px(complex(0, cy + half))
    _, ya1 = to_px(complex(0, cy - half))
    out.append(f'<line x1="{xa:.2f}" y1="{ya0:.2f}" x2="{xa:.2f}" y2="{ya1:.2f}" '
               'stroke="#bbbbbb" stroke-width="1"/>')
    for curve in curves:
        color = COLORS.get(curve.method, "#777777")
        for run in _segments(curve):
            coords = " ".join("{:.2f},{:.2f}".format(*to_px(z)) for z in run)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                       f'points="{coords}"><title>{curve.method}</title></polyline>')
    mx, my = to_px(complex(-1, 0))
    out.append(f'<circle cx="{mx:.2f}" cy="{my:.2f}" r="4" fill="black"/>')
    ly = 24
    for curve in curves:
        color = COLORS.get(curve.method, "#777777")
        out.append(f'<text x="16" y="{ly}" font-family="sans-serif" font-size="14" '
                   f'fill="{color}">{curve.method}</text>')
        ly += 18
    if title:
        out.append(f'<text x="{SVG_SIZE - 16}" y="24" text-anchor="end" '
                   f'font-family="sans-serif" font-size="14">{_escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
