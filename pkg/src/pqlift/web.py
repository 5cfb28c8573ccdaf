"""The planar moment web of a toric base.

Vertices are torus fixed points (one per fan triangle), compact edges are
invariant curves (one per internal fan edge) and unbounded rays come from the
boundary edges.  Crossing a compact edge with stabiliser ``r`` and
``[omega]``-degree ``t`` moves the moment image by ``t * j2(r)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .classes import CohClass, curve_degree, kaehler_cone_check, nested_neighbours
from .errors import ConsistencyError, HolonomyError, NonKaehlerError, WebError
from .fan import BoundaryEdge, FanTriangulation, InternalEdge, star_of_interior_ray
from .lattice import ZERO, LatticeVec2, QPoint, is_primitive, j2


@dataclass(frozen=True)
class WebVertex:
    id: str
    mu: QPoint
    label: Optional[str] = None


@dataclass(frozen=True)
class WebEdge:
    """A compact edge oriented ``source -> target``.

    ``mu(target) - mu(source) == t * j2(stabiliser)``.  ``s`` is the degree of
    the bundle class; for fan webs it is filled in by the lift.
    """

    source: str
    target: str
    stabiliser: LatticeVec2
    t: Fraction
    s: Optional[Fraction] = None
    origin: Optional[InternalEdge] = None

    @property
    def displacement(self) -> QPoint:
        return j2(self.stabiliser) * self.t

    def __str__(self):
        return f"{self.source}->{self.target}"


@dataclass(frozen=True)
class WebRay:
    """Unbounded edge; ``j2(stabiliser) == direction``, the outward direction."""

    at: str
    stabiliser: LatticeVec2
    direction: LatticeVec2
    origin: Optional[BoundaryEdge] = None


@dataclass(frozen=True)
class MomentWeb:
    vertices: tuple[WebVertex, ...]
    edges: tuple[WebEdge, ...]
    rays: tuple[WebRay, ...]
    basepoint: str
    tree: tuple[int, ...]
    kaehler: bool
    fan: Optional[FanTriangulation] = None
    omega: Optional[CohClass] = None
    warnings: tuple[str, ...] = ()

    def vertex(self, vid: str) -> WebVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    @property
    def mu(self) -> Mapping[str, QPoint]:
        return MappingProxyType({v.id: v.mu for v in self.vertices})

    @property
    def is_fan_web(self) -> bool:
        return self.fan is not None


def spanning_tree(vertex_ids: Sequence[str], edges: Sequence[WebEdge], root: str):
    """Breadth-first spanning tree over the compact edges.

    Returns ``(order, steps)``: vertex discovery order and, for each tree edge
    in discovery order, ``(edge_index, from_id, to_id, forward)`` where
    ``forward`` says whether the edge is crossed source-to-target.
    """
    adj = {v: [] for v in vertex_ids}
    for i, e in enumerate(edges):
        adj[e.source].append((i, e.target, True))
        adj[e.target].append((i, e.source, False))
    seen = {root}
    order, steps = [root], []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for i, w, forward in adj[v]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                steps.append((i, v, w, forward))
                queue.append(w)
    return order, steps


def fundamental_cycle(web: MomentWeb, edge_index: int) -> list[str]:
    """Vertices of the cycle ``target -> (tree) -> source -> target``."""
    parent = {}
    for i, frm, to, _ in _tree_steps(web):
        parent[to] = frm

    def up(v):
        path = [v]
        while path[-1] in parent:
            path.append(parent[path[-1]])
        return path

    e = web.edges[edge_index]
    up_t, up_s = up(e.target), up(e.source)
    common = set(up_s)
    lca = next(v for v in up_t if v in common)
    down = up_s[: up_s.index(lca)]
    return up_t[: up_t.index(lca) + 1] + list(reversed(down)) + [e.target]


def _tree_steps(web):
    _, steps = spanning_tree([v.id for v in web.vertices], web.edges, web.basepoint)
    return steps


def _place(vertex_ids, edges, root, root_mu):
    _, steps = spanning_tree(vertex_ids, edges, root)
    mu = {root: root_mu}
    for i, frm, to, forward in steps:
        d = edges[i].displacement
        mu[to] = mu[frm] + d if forward else mu[frm] - d
    return mu, tuple(i for i, *_ in steps)


def _check_holonomy(edges, mu, module="web"):
    for e in edges:
        residual = mu[e.target] - mu[e.source] - e.displacement
        if not residual.is_zero():
            raise HolonomyError(
                f"moment positions are path dependent: edge {e} misses by {residual}",
                module=module,
            )


def build_moment_web(
    fan: FanTriangulation,
    omega: CohClass,
    basepoint_triangle: int = 0,
    basepoint_mu=(0, 0),
    allow_non_kaehler: bool = False,
) -> MomentWeb:
    """Moment web of the resolution described by ``fan`` with Kaehler class ``omega``.

    One vertex ``q<i+1>`` per triangle ``i``.  Positions are laid out by
    breadth-first search from ``basepoint_triangle``; crossing the internal
    edge traversed ``x -> y`` by the current triangle uses ``r = x - y``.
    """
    if not 0 <= basepoint_triangle < len(fan.triangles):
        raise WebError(f"basepoint triangle {basepoint_triangle} out of range")
    report = kaehler_cone_check(fan, omega)
    if not report.ok and not allow_non_kaehler:
        raise NonKaehlerError(report.violations)

    vid = [f"q{i + 1}" for i in range(len(fan.triangles))]
    # orientation of each compact edge follows BFS discovery order
    rank = {}
    queue = deque([basepoint_triangle])
    rank[basepoint_triangle] = 0
    adj = {i: [] for i in range(len(fan.triangles))}
    for e in fan.internal_edges:
        a, b = e.triangles
        adj[a].append(b)
        adj[b].append(a)
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if j not in rank:
                rank[j] = len(rank)
                queue.append(j)

    edges = []
    for e in fan.internal_edges:
        t0, t1 = e.triangles
        x, y = e.rays
        r = fan.u(x) - fan.u(y)
        if rank[t1] < rank[t0]:
            t0, t1, r = t1, t0, -r
        edges.append(WebEdge(vid[t0], vid[t1], r, report.degrees[e], None, e))

    rays = []
    for b in fan.boundary_edges:
        x, y = b.rays
        r = fan.u(x) - fan.u(y)
        rays.append(WebRay(vid[b.triangle], r, j2(r), b))

    root = vid[basepoint_triangle]
    mu, tree = _place(vid, edges, root, QPoint.of(basepoint_mu))
    _check_holonomy(edges, mu)

    vertices = tuple(
        WebVertex(vid[i], mu[vid[i]], ",".join(tri.rays)) for i, tri in enumerate(fan.triangles)
    )
    warnings = list(fan.warnings)
    for e in report.violations:
        warnings.append(f"edge {e} has nonpositive degree {report.degrees[e]}")
    for ray in fan.interior_rays:
        nested = nested_neighbours(fan, ray)
        if nested:
            warnings.append(
                f"compact divisor {ray!r} meets compact divisors {list(nested)}; "
                "no worked example covers nested interior rays"
            )
    web = MomentWeb(
        vertices=vertices,
        edges=tuple(edges),
        rays=tuple(rays),
        basepoint=root,
        tree=tree,
        kaehler=report.ok,
        fan=fan,
        omega=omega,
        warnings=(),
    )
    bad_degree = degree_violations(web)
    tension = zero_tension_check(web)
    if bad_degree or tension.violations:
        raise ConsistencyError(
            f"fan web is not a balanced trivalent graph at {bad_degree or list(tension.violations)}",
            module="web",
        )
    warnings.extend(embedding_check(web))
    return _with_warnings(web, warnings)


def _with_warnings(web, warnings):
    return MomentWeb(
        web.vertices, web.edges, web.rays, web.basepoint, web.tree,
        web.kaehler, web.fan, web.omega, tuple(warnings),
    )


def degree_violations(web: MomentWeb) -> list[str]:
    count = {v.id: 0 for v in web.vertices}
    for e in web.edges:
        count[e.source] += 1
        count[e.target] += 1
    for r in web.rays:
        count[r.at] += 1
    return [v for v, c in count.items() if c != 3]


@dataclass(frozen=True)
class TensionReport:
    sums: Mapping[str, LatticeVec2]
    violations: Mapping[str, LatticeVec2]

    @property
    def ok(self) -> bool:
        return not self.violations


def outgoing_directions(web: MomentWeb) -> dict[str, list[LatticeVec2]]:
    """Primitive directions leaving each vertex (edges and rays)."""
    out = {v.id: [] for v in web.vertices}
    for e in web.edges:
        d = j2(e.stabiliser)
        out[e.source].append(d)
        out[e.target].append(-d)
    for r in web.rays:
        out[r.at].append(r.direction)
    return out


def zero_tension_check(web: MomentWeb) -> TensionReport:
    sums = {}
    for vid, dirs in outgoing_directions(web).items():
        total = LatticeVec2(0, 0)
        for d in dirs:
            total = total + d
        sums[vid] = total
    bad = {v: s for v, s in sums.items() if s != LatticeVec2(0, 0)}
    return TensionReport(MappingProxyType(sums), MappingProxyType(bad))


def mu_holonomy_check(fan: FanTriangulation, omega: CohClass) -> dict[str, QPoint]:
    """``sum_j t_j j2(u_j - u_E)`` around every interior ray; always zero."""
    out = {}
    for e_ray in fan.interior_rays:
        total = ZERO
        ue = fan.u(e_ray)
        for uj in star_of_interior_ray(fan, e_ray):
            t = curve_degree(fan, omega, (uj, e_ray))
            total = total + j2(fan.u(uj) - ue) * t
        out[e_ray] = total
    return out


def embedding_check(web: MomentWeb) -> list[str]:
    """Exact checks that vertices are distinct and avoid non-incident edges."""
    warnings = []
    seen = {}
    for v in web.vertices:
        if v.mu in seen:
            warnings.append(f"vertices {seen[v.mu]} and {v.id} coincide at {v.mu}")
        else:
            seen[v.mu] = v.id
    # clear denominators so the incidence test runs on integers
    den = 1
    for v in web.vertices:
        den = math.lcm(den, v.mu.x.denominator, v.mu.y.denominator)
    mu = {v.id: (int(v.mu.x * den), int(v.mu.y * den)) for v in web.vertices}
    for e in web.edges:
        (ax, ay), (bx, by) = mu[e.source], mu[e.target]
        sx, sy = bx - ax, by - ay
        if sx == 0 and sy == 0:
            continue
        for vid, (px, py) in mu.items():
            if vid in (e.source, e.target):
                continue
            px, py = px - ax, py - ay
            if sx * py - sy * px != 0:
                continue
            if 0 < px * sx + py * sy < sx * sx + sy * sy:
                warnings.append(f"vertex {vid} lies on edge {e}")
    return warnings


def _rational(value, what):
    if isinstance(value, float):
        raise WebError(f"{what} is a float; use an exact rational")
    try:
        return Fraction(value)
    except (TypeError, ValueError):
        raise WebError(f"{what} is not a rational number: {value!r}") from None


def _lattice(value, what):
    if isinstance(value, LatticeVec2):
        return value
    try:
        x, y = value
        return LatticeVec2(x, y)
    except (TypeError, ValueError):
        raise WebError(f"{what} is not an integer pair: {value!r}") from None


def ingest_user_web(
    vertices: Iterable[Mapping],
    edges: Iterable[Mapping],
    rays: Iterable[Mapping],
    basepoint: Optional[str] = None,
    basepoint_mu=None,
    allow_non_kaehler: bool = False,
) -> MomentWeb:
    """Moment web from a user-decorated graph.

    ``vertices``: mappings with ``id`` and optional ``mu``/``label``.
    ``edges``: ``from``, ``to``, ``r``, ``t`` and optional ``s``.
    ``rays``: ``at``, ``direction`` and optional ``r`` (must satisfy
    ``j2(r) == +-direction``; the sign is normalised).
    Positions are propagated from the basepoint and compared with any given.
    """
    vlist, given = [], {}
    for v in vertices:
        vid = str(v["id"])
        if vid in given:
            raise WebError(f"duplicate vertex id {vid!r}")
        mu = v.get("mu")
        given[vid] = None if mu is None else QPoint(*(_rational(c, f"mu of {vid}") for c in mu))
        vlist.append((vid, v.get("label")))
    if not vlist:
        raise WebError("web has no vertices")
    ids = [vid for vid, _ in vlist]

    elist = []
    for k, e in enumerate(edges):
        src, dst = str(e["from"]), str(e["to"])
        for end in (src, dst):
            if end not in given:
                raise WebError(f"edge {k} refers to unknown vertex {end!r}")
        if src == dst:
            raise WebError(f"edge {k} is a loop at {src!r}")
        r = _lattice(e["r"], f"stabiliser of edge {src}->{dst}")
        if not is_primitive(r):
            raise WebError(f"stabiliser {r} of edge {src}->{dst} is not primitive")
        t = _rational(e["t"], f"t of edge {src}->{dst}")
        s = e.get("s")
        s = None if s is None else _rational(s, f"s of edge {src}->{dst}")
        elist.append(WebEdge(src, dst, r, t, s))

    rlist = []
    for k, ray in enumerate(rays):
        at = str(ray["at"])
        if at not in given:
            raise WebError(f"ray {k} is attached to unknown vertex {at!r}")
        d = _lattice(ray["direction"], f"direction of ray {k}")
        if not is_primitive(d):
            raise WebError(f"direction {d} of ray {k} at {at} is not primitive")
        r = -j2(d)
        if ray.get("r") is not None:
            user_r = _lattice(ray["r"], f"stabiliser of ray {k}")
            if user_r not in (r, -r):
                raise WebError(
                    f"stabiliser {user_r} of ray {k} at {at} is not orthogonal to its direction {d}"
                )
        rlist.append(WebRay(at, r, d))

    root = basepoint if basepoint is not None else ids[0]
    if root not in given:
        raise WebError(f"basepoint {root!r} is not a vertex")
    if basepoint_mu is None:
        root_mu = given[root] if given[root] is not None else ZERO
    else:
        root_mu = QPoint(*(_rational(c, "basepoint mu") for c in basepoint_mu))

    mu, tree = _place(ids, elist, root, root_mu)
    missing = [v for v in ids if v not in mu]
    if missing:
        raise WebError(f"web is disconnected; unreachable vertices {missing}")
    _check_holonomy(elist, mu)
    for vid in ids:
        if given[vid] is not None and given[vid] != mu[vid]:
            raise WebError(
                f"given position {given[vid]} of {vid} disagrees with propagated {mu[vid]}"
            )

    nonpositive = [e for e in elist if e.t <= 0]
    if nonpositive and not allow_non_kaehler:
        raise NonKaehlerError(nonpositive)

    web = MomentWeb(
        vertices=tuple(WebVertex(vid, mu[vid], label) for vid, label in vlist),
        edges=tuple(elist),
        rays=tuple(rlist),
        basepoint=root,
        tree=tree,
        kaehler=not nonpositive,
    )
    bad = degree_violations(web)
    if bad:
        raise WebError(f"web is not trivalent at {bad}")
    tension = zero_tension_check(web)
    if not tension.ok:
        listing = ", ".join(f"{v}: {s}" for v, s in tension.violations.items())
        raise WebError(f"zero-tension fails at {listing}")
    warnings = [f"edge {e} has nonpositive degree {e.t}" for e in nonpositive]
    warnings.extend(embedding_check(web))
    return _with_warnings(web, warnings)
