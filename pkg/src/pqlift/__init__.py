"""Exact moment webs of toric surfaces and their lifts to circle bundles."""

from importlib import resources

from .classes import (
    CohClass,
    cup_by_triple_intersections,
    cup_on_divisor,
    curve_degree,
    kaehler_cone_check,
    make_class,
    restricted_triple,
)
from .emit import emit_outputs
from .errors import ConsistencyError, InputError, PqliftError
from .fan import FanTriangulation, quad_relation, validate_fan
from .jobspec import JobSpec, dump_job, parse_input
from .lattice import LatticeVec2, LatticeVec3, QPoint
from .lift import GaugeShift, LiftedWeb, build_lift, closure_report, gauge_transform, ray_directions_3d
from .pipeline import LiftReport, run_pipeline
from .web import MomentWeb, build_moment_web, ingest_user_web


def fixture_path(name: str):
    """Path of a shipped example job, e.g. ``fixture_path("hexagon")``."""
    return resources.files(__name__) / "fixtures" / f"{name}.json"


__all__ = [
    "CohClass", "ConsistencyError", "FanTriangulation", "GaugeShift", "InputError",
    "JobSpec", "LatticeVec2", "LatticeVec3", "LiftReport", "LiftedWeb", "MomentWeb",
    "PqliftError", "QPoint", "build_lift", "build_moment_web", "closure_report",
    "cup_by_triple_intersections", "cup_on_divisor", "curve_degree", "dump_job",
    "emit_outputs", "fixture_path", "gauge_transform", "ingest_user_web",
    "kaehler_cone_check", "make_class", "parse_input", "quad_relation",
    "ray_directions_3d", "restricted_triple", "run_pipeline", "validate_fan",
]
