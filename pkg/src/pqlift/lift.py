"""Lifting a planar moment web to the multi-moment graph of a circle bundle.

Along a compact edge ``T -> T'`` with stabiliser ``r`` and degrees ``(t, s)``::

    lambda(T') = lambda(T) - s * j2(r)
    nu3(T')    = nu3(T) + t * <r, lambda(T)>

``lambda`` is single valued.  ``nu3`` is assigned along a spanning tree and
its holonomy around cycles is the obstruction to the lift closing up.

Residual orientation: for a fan web the residual of an interior ray ``E`` is
the change of ``nu3`` accumulated going once *clockwise* around the star of
``E``; with that orientation it equals ``([omega] u [F]) . E``.  For a user
web the residual of the cycle closed by a non-tree edge ``a -> b`` is the
change accumulated along ``b -> (tree) -> a -> b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional

from .classes import CohClass, cup_on_divisor, curve_degree
from .errors import ClassError, ConsistencyError, HolonomyError, WebError
from .fan import star_triangles
from .lattice import QPoint, dot, j2, primitive_triple
from .web import MomentWeb, fundamental_cycle, spanning_tree


@dataclass(frozen=True)
class GaugeShift:
    lambda0: QPoint

    def __post_init__(self):
        object.__setattr__(self, "lambda0", QPoint.of(self.lambda0))


@dataclass(frozen=True)
class LiftedWeb:
    base: MomentWeb
    s: tuple[Fraction, ...]
    lam: Mapping[str, QPoint]
    nu3: Mapping[str, Fraction]
    residuals: Mapping[str, Fraction]
    cycles: Mapping[str, tuple[str, ...]]
    rays3d: tuple[tuple[int, int, int], ...]
    F: Optional[CohClass] = None

    @property
    def closed(self) -> bool:
        return all(v == 0 for v in self.residuals.values())

    def nu(self, vid: str) -> tuple[Fraction, Fraction, Fraction]:
        mu = self.base.vertex(vid).mu
        return (mu.x, mu.y, self.nu3[vid])


def _increment(edge, lam_source):
    return edge.t * dot(edge.stabiliser, lam_source)


def build_lift(
    web: MomentWeb,
    F: Optional[CohClass] = None,
    basepoint_lambda=(0, 0),
    basepoint_nu3=0,
) -> LiftedWeb:
    """Propagate ``lambda`` and ``nu3`` over ``web`` and compute residuals.

    Fan webs take the bundle class ``F`` (integral); user webs carry their
    own ``s`` values on the edges and take no ``F``.
    """
    if web.is_fan_web:
        if F is None:
            raise ClassError("a bundle class F is required for a fan web")
        bad = [rid for rid, c in F.coeffs.items() if Fraction(c).denominator != 1]
        if bad:
            raise ClassError(f"F must be integral; non-integer coefficients at {bad}")
        s_values = tuple(curve_degree(web.fan, F, e.origin) for e in web.edges)
    else:
        if F is not None:
            raise WebError("user webs carry s on their edges; F is not accepted")
        missing = [str(e) for e in web.edges if e.s is None]
        if missing:
            raise WebError(f"edges without s value: {missing}")
        s_values = tuple(e.s for e in web.edges)

    ids = [v.id for v in web.vertices]
    _, steps = spanning_tree(ids, web.edges, web.basepoint)
    lam = {web.basepoint: QPoint.of(basepoint_lambda)}
    nu3 = {web.basepoint: Fraction(basepoint_nu3)}
    for i, frm, to, forward in steps:
        e, s = web.edges[i], s_values[i]
        step = j2(e.stabiliser) * s
        if forward:
            lam[to] = lam[frm] - step
            nu3[to] = nu3[frm] + _increment(e, lam[frm])
        else:
            lam[to] = lam[frm] + step
            nu3[to] = nu3[frm] - _increment(e, lam[to])

    increments = []
    for e, s in zip(web.edges, s_values):
        miss = lam[e.target] - lam[e.source] + j2(e.stabiliser) * s
        if not miss.is_zero():
            raise HolonomyError(
                f"lambda is path dependent: edge {e} misses by {miss}", module="lift"
            )
        inc = _increment(e, lam[e.source])
        if inc != e.t * dot(e.stabiliser, lam[e.target]):
            raise ConsistencyError(f"endpoint asymmetry on edge {e}", module="lift")
        increments.append(inc)

    tree = set(web.tree)
    mismatch = {
        i: nu3[e.source] + increments[i] - nu3[e.target]
        for i, e in enumerate(web.edges)
        if i not in tree
    }

    residuals, cycles = {}, {}
    if web.is_fan_web:
        fan = web.fan
        for e_ray in fan.interior_rays:
            anticlockwise = _star_sum(web, increments, e_ray)
            residuals[e_ray] = -anticlockwise
            cycles[e_ray] = tuple(f"q{q + 1}" for q in reversed(star_triangles(fan, e_ray)))
        _check_cycle_space(web, mismatch, residuals)
        for e_ray, value in residuals.items():
            expected = cup_on_divisor(fan, web.omega, F, e_ray)
            if value != expected:
                raise ConsistencyError(
                    f"nu3 residual {value} around {e_ray!r} differs from the cup "
                    f"product pairing {expected}",
                    module="lift",
                )
    else:
        for i, value in mismatch.items():
            path = fundamental_cycle(web, i)
            key = "->".join(path)
            residuals[key] = value
            cycles[key] = tuple(path)

    rays3d = tuple(
        primitive_triple(*r.direction, dot(r.stabiliser, lam[r.at])) for r in web.rays
    )
    return LiftedWeb(
        base=web,
        s=s_values,
        lam=MappingProxyType(lam),
        nu3=MappingProxyType(nu3),
        residuals=MappingProxyType(residuals),
        cycles=MappingProxyType(cycles),
        rays3d=rays3d,
        F=F,
    )


def _edge_between(web, a, b):
    for i, e in enumerate(web.edges):
        if (e.source, e.target) == (a, b):
            return i, 1
        if (e.source, e.target) == (b, a):
            return i, -1
    raise ConsistencyError(f"no compact edge between {a} and {b}", module="lift")


def _star_sum(web, increments, e_ray):
    """nu3 change going q_1 -> q_2 -> ... -> q_m -> q_1 (anticlockwise)."""
    qs = star_triangles(web.fan, e_ray)
    m = len(qs)
    total = Fraction(0)
    for j in range(m):
        i, sign = _edge_between(web, f"q{qs[j] + 1}", f"q{qs[(j + 1) % m] + 1}")
        total += sign * increments[i]
    return total


def _centroid6(fan, tri):
    """Six times the centroid of a triangle, as an integer pair."""
    pts = [fan.u(r) for r in tri.rays]
    return (2 * sum(p.x for p in pts), 2 * sum(p.y for p in pts))


def _winding(center, polygon):
    w = 0
    cx, cy = center
    n = len(polygon)
    for i in range(n):
        (ax, ay), (bx, by) = polygon[i], polygon[(i + 1) % n]
        side = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if ay <= cy < by and side > 0:
            w += 1
        elif by <= cy < ay and side < 0:
            w -= 1
    return w


def _check_cycle_space(web, mismatch, residuals):
    """Every fundamental cycle must be explained by the interior-ray stars.

    A dual cycle winding ``n_E`` times anticlockwise around each interior ray
    picks up ``-sum n_E * residual(E)``.
    """
    fan = web.fan
    cycle_rank = len(web.edges) - len(web.vertices) + 1
    if cycle_rank != len(fan.interior_rays):
        raise ConsistencyError(
            f"dual graph has {cycle_rank} independent cycles but "
            f"{len(fan.interior_rays)} interior rays",
            module="lift",
        )
    # dual polygons pass through centroids and edge midpoints; coordinates
    # are scaled by 6 so that the winding test runs on integers
    index = {f"q{i + 1}": i for i in range(len(fan.triangles))}
    centers = {e: (6 * fan.u(e).x, 6 * fan.u(e).y) for e in fan.interior_rays}
    for i, value in mismatch.items():
        path = fundamental_cycle(web, i)
        polygon = []
        for a, b in zip(path, path[1:]):
            ta, tb = fan.triangles[index[a]], fan.triangles[index[b]]
            x, y = (fan.u(r) for r in set(ta.rays) & set(tb.rays))
            polygon.extend([_centroid6(fan, ta), (3 * (x.x + y.x), 3 * (x.y + y.y))])
        expected = -sum(
            (_winding(centers[e], polygon) * residuals[e] for e in fan.interior_rays),
            Fraction(0),
        )
        if value != expected:
            raise ConsistencyError(
                f"fundamental cycle through edge {web.edges[i]} picks up {value}, "
                f"stars predict {expected}",
                module="lift",
            )


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    per_divisor: Mapping[str, Fraction]


def closure_report(lifted: LiftedWeb) -> ClosureReport:
    """Closure verdict; for fan webs re-checks each residual against the cup product."""
    web = lifted.base
    if web.is_fan_web:
        for e_ray, value in lifted.residuals.items():
            expected = cup_on_divisor(web.fan, web.omega, lifted.F, e_ray)
            if value != expected:
                raise ConsistencyError(
                    f"residual {value} at {e_ray!r} but cup product gives {expected}",
                    module="lift",
                )
    return ClosureReport(lifted.closed, lifted.residuals)


def gauge_transform(lifted: LiftedWeb, shift: GaugeShift) -> LiftedWeb:
    """Shift ``lambda`` by ``lambda0``; ``nu3`` becomes ``nu3 - l2*mu1 + l1*mu2``."""
    l0 = shift.lambda0
    lam = {v: p + l0 for v, p in lifted.lam.items()}
    nu3 = {}
    for v in lifted.base.vertices:
        nu3[v.id] = lifted.nu3[v.id] - l0.y * v.mu.x + l0.x * v.mu.y
    rays3d = tuple(
        primitive_triple(*r.direction, dot(r.stabiliser, lam[r.at])) for r in lifted.base.rays
    )
    return LiftedWeb(
        base=lifted.base,
        s=lifted.s,
        lam=MappingProxyType(lam),
        nu3=MappingProxyType(nu3),
        residuals=lifted.residuals,
        cycles=lifted.cycles,
        rays3d=rays3d,
        F=lifted.F,
    )


def ray_directions_3d(lifted: LiftedWeb) -> dict[int, tuple[int, int, int]]:
    """Integer direction ``(-r2, r1, <r, lambda>)`` of each unbounded ray, by ray index."""
    return dict(enumerate(lifted.rays3d))
