"""Run a job end to end and collect the result as a serialisable report."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .classes import make_class
from .errors import FanError
from .fan import validate_fan
from .jobspec import JobSpec
from .lattice import ZERO
from .lift import LiftedWeb, build_lift, closure_report
from .web import build_moment_web, ingest_user_web


def q(value) -> str:
    return str(Fraction(value))


def _pair(p):
    x, y = p
    return [q(x), q(y)]


@dataclass(frozen=True)
class LiftReport:
    """Everything the CLI emits.  Numbers are exact rational strings."""

    mode: str
    vertices: tuple[dict, ...]
    edges: tuple[dict, ...]
    rays: tuple[dict, ...]
    residuals: dict
    cycles: dict
    closed: bool
    kaehler: bool
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "vertices": list(self.vertices),
            "edges": list(self.edges),
            "rays": list(self.rays),
            "residuals": dict(self.residuals),
            "cycles": {k: list(v) for k, v in self.cycles.items()},
            "closed": self.closed,
            "kaehler": self.kaehler,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def lift_job(spec: JobSpec) -> LiftedWeb:
    """Build the lifted web described by ``spec``."""
    bp = spec.basepoint
    lam0 = bp.lam if bp.lam is not None else ZERO
    nu0 = bp.nu3 if bp.nu3 is not None else Fraction(0)
    allow = spec.flags.allow_non_kaehler
    if spec.mode == "fan":
        fan = validate_fan(list(spec.fan.rays), spec.fan.triangles)
        omega = make_class(fan, dict(spec.omega))
        F = make_class(fan, dict(spec.F), integral=True)
        if bp.triangle is None:
            tri = 0
        elif isinstance(bp.triangle, int):
            tri = bp.triangle
        else:
            tri = fan.triangle_index(bp.triangle)
        if not 0 <= tri < len(fan.triangles):
            raise FanError(f"basepoint triangle {tri} out of range")
        web = build_moment_web(
            fan, omega, tri, bp.mu if bp.mu is not None else ZERO, allow_non_kaehler=allow
        )
        lifted = build_lift(web, F, lam0, nu0)
    else:
        w = spec.web
        web = ingest_user_web(
            [{"id": v.id, "mu": v.mu, "label": v.label} for v in w.vertices],
            [{"from": e.source, "to": e.target, "r": e.r, "t": e.t, "s": e.s} for e in w.edges],
            [{"at": r.at, "direction": r.direction, "r": r.r} for r in w.rays],
            basepoint=bp.vertex,
            basepoint_mu=bp.mu,
            allow_non_kaehler=allow,
        )
        lifted = build_lift(web, None, lam0, nu0)
    closure_report(lifted)
    return lifted


def report_from_lift(mode: str, lifted: LiftedWeb) -> LiftReport:
    web = lifted.base
    vertices = tuple(
        {
            "id": v.id,
            "label": v.label,
            "mu": _pair(v.mu),
            "lambda": _pair(lifted.lam[v.id]),
            "nu3": q(lifted.nu3[v.id]),
        }
        for v in web.vertices
    )
    edges = tuple(
        {
            "from": e.source,
            "to": e.target,
            "r": _pair(e.stabiliser),
            "t": q(e.t),
            "s": q(s),
            "fan_edge": list(e.origin.rays) if e.origin is not None else None,
        }
        for e, s in zip(web.edges, lifted.s)
    )
    rays = tuple(
        {
            "at": r.at,
            "r": _pair(r.stabiliser),
            "direction2d": _pair(r.direction),
            "direction3d": [q(c) for c in d3],
        }
        for r, d3 in zip(web.rays, lifted.rays3d)
    )
    return LiftReport(
        mode=mode,
        vertices=vertices,
        edges=edges,
        rays=rays,
        residuals={k: q(v) for k, v in lifted.residuals.items()},
        cycles={k: tuple(v) for k, v in lifted.cycles.items()},
        closed=lifted.closed,
        kaehler=web.kaehler,
        warnings=tuple(web.warnings),
    )


def run_pipeline(spec: JobSpec) -> LiftReport:
    return report_from_lift(spec.mode, lift_job(spec))
