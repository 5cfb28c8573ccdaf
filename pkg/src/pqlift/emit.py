"""Writers for the JSON report, the SVG drawing and the 3D polyline file.

Relative target paths are resolved against ``$PQLIFT_OUTPUT_DIR`` when it is
set.  The SVG is a picture only: coordinates are rounded floats on a fixed
canvas, whereas the JSON report carries the exact geometry.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Union
from xml.sax.saxutils import escape

from .pipeline import LiftReport

TARGETS = ("json", "svg", "lines3d")
OUTPUT_DIR_ENV = "PQLIFT_OUTPUT_DIR"

CANVAS = 640
MARGIN = 80
RAY_LENGTH = 48


def _f(s: str) -> float:
    return float(Fraction(s))


def _num(x: float) -> str:
    text = f"{x:.2f}"
    return "0.00" if text == "-0.00" else text


def render_svg(report: LiftReport) -> str:
    pts = {v["id"]: (_f(v["mu"][0]), _f(v["mu"][1])) for v in report.vertices}
    xs = [p[0] for p in pts.values()] or [0.0]
    ys = [p[1] for p in pts.values()] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    scale = (CANVAS - 2 * MARGIN) / span if span > 0 else 1.0
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2

    def place(p):
        # y axis points up in the web, down in SVG
        return CANVAS / 2 + (p[0] - cx) * scale, CANVAS / 2 - (p[1] - cy) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
        "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">"
        "<path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>",
        f'<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>',
    ]
    for e in report.edges:
        (x1, y1), (x2, y2) = place(pts[e["from"]]), place(pts[e["to"]])
        out.append(
            f'<line class="edge" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
            f'stroke="black" stroke-width="2"><title>{escape(e["from"])}-&gt;{escape(e["to"])} '
            f't={escape(e["t"])} s={escape(e["s"])}</title></line>'
        )
    for r in report.rays:
        x1, y1 = place(pts[r["at"]])
        dx, dy = _f(r["direction2d"][0]), _f(r["direction2d"][1])
        norm = math.hypot(dx, dy)
        x2, y2 = x1 + RAY_LENGTH * dx / norm, y1 - RAY_LENGTH * dy / norm
        out.append(
            f'<line class="ray" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
            f'stroke="gray" stroke-width="2" marker-end="url(#arrow)"/>'
        )
    for v in report.vertices:
        x, y = place(pts[v["id"]])
        out.append(f'<circle class="vertex" cx="{_num(x)}" cy="{_num(y)}" r="4" fill="black"/>')
        out.append(
            f'<text class="nu3" x="{_num(x + 6)}" y="{_num(y - 6)}" font-size="12">'
            f'{escape(v["id"])}: ν₃={escape(v["nu3"])}</text>'
        )
    for key, value in report.residuals.items():
        cyc = report.cycles.get(key, ())
        if cyc and cyc[0] == cyc[-1]:
            cyc = cyc[:-1]
        if not cyc:
            continue
        placed = [place(pts[c]) for c in cyc]
        x = sum(p[0] for p in placed) / len(placed)
        y = sum(p[1] for p in placed) / len(placed)
        out.append(
            f'<text class="residual" x="{_num(x)}" y="{_num(y)}" font-size="12" '
            f'text-anchor="middle" fill="firebrick">{escape(key)}: {escape(value)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_lines3d(report: LiftReport) -> str:
    """``edge a b x y z x y z`` and ``ray v x y z dx dy dz`` records, exact."""
    nu = {v["id"]: (*v["mu"], v["nu3"]) for v in report.vertices}
    lines = ["# pqlift lines3d v1: edge <from> <to> <x y z> <x y z>; ray <at> <x y z> <dx dy dz>"]
    for e in report.edges:
        lines.append(" ".join(["edge", e["from"], e["to"], *nu[e["from"]], *nu[e["to"]]]))
    for r in report.rays:
        lines.append(" ".join(["ray", r["at"], *nu[r["at"]], *r["direction3d"]]))
    return "\n".join(lines) + "\n"


RENDERERS = {
    "json": LiftReport.to_json,
    "svg": render_svg,
    "lines3d": render_lines3d,
}


def resolve_target(path: Union[str, Path]) -> Path:
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def emit_outputs(report: LiftReport, targets: Mapping[str, Union[str, Path]]) -> list[Path]:
    """Write each requested target; returns the paths written, in target order."""
    unknown = sorted(set(targets) - set(TARGETS))
    if unknown:
        raise ValueError(f"unknown output kind(s) {unknown}; expected {list(TARGETS)}")
    written = []
    for kind in TARGETS:
        if targets.get(kind) is None:
            continue
        path = resolve_target(targets[kind])
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(RENDERERS[kind](report))
        written.append(path)
    return written
