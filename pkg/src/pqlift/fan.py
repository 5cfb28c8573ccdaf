"""Validated height-one fan triangulations.

A fan is given by rays ``u_i = (x, y, 1)`` recorded through their offsets
``(x, y)`` and a list of triangles.  :func:`validate_fan` checks smoothness
(every triangle unimodular), that the triangles tile a disc edge-to-edge, and
derives the edge classification and the stars of interior rays.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import ConsistencyError, FanError, NonUnimodularError
from .lattice import LatticeVec2, det2


@dataclass(frozen=True)
class Ray:
    id: str
    u: LatticeVec2


@dataclass(frozen=True)
class Triangle:
    """Three ray ids, stored anticlockwise."""

    rays: tuple[str, str, str]

    def directed_edges(self):
        a, b, c = self.rays
        return ((a, b), (b, c), (c, a))

    def apex(self, x: str, y: str) -> str:
        (rest,) = set(self.rays) - {x, y}
        return rest

    def rotated_to(self, ray_id: str) -> tuple[str, str, str]:
        a, b, c = self.rays
        if ray_id == a:
            return (a, b, c)
        if ray_id == b:
            return (b, c, a)
        if ray_id == c:
            return (c, a, b)
        raise KeyError(ray_id)


@dataclass(frozen=True)
class InternalEdge:
    """An edge shared by two triangles.

    ``rays`` is the direction in which the edge is traversed by the
    anticlockwise cycle of ``triangles[0]``; ``triangles[1]`` traverses it the
    other way.
    """

    rays: tuple[str, str]
    triangles: tuple[int, int]

    def __str__(self):
        return f"({self.rays[0]},{self.rays[1]})"


@dataclass(frozen=True)
class BoundaryEdge:
    rays: tuple[str, str]
    triangle: int

    def __str__(self):
        return f"({self.rays[0]},{self.rays[1]})"


@dataclass(frozen=True)
class QuadRelation:
    """``u_apex1 + u_apex2 + y1 u_edge1 + y2 u_edge2 = 0`` with ``y1 + y2 = -2``."""

    apex1: str
    apex2: str
    edge1: str
    edge2: str
    y1: int
    y2: int


@dataclass(frozen=True)
class FanTriangulation:
    rays: tuple[Ray, ...]
    triangles: tuple[Triangle, ...]
    internal_edges: tuple[InternalEdge, ...]
    boundary_edges: tuple[BoundaryEdge, ...]
    interior_rays: tuple[str, ...]
    stars: dict = field(compare=False, repr=False, default_factory=dict)
    warnings: tuple[str, ...] = field(compare=False, default=())
    _coords: dict = field(compare=False, repr=False, default_factory=dict)
    _edge_index: dict = field(compare=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self._coords.update({r.id: r.u for r in self.rays})
        for i, e in enumerate(self.internal_edges):
            self._edge_index[frozenset(e.rays)] = ("internal", i)
        for i, e in enumerate(self.boundary_edges):
            self._edge_index[frozenset(e.rays)] = ("boundary", i)

    @property
    def ray_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.rays)

    def u(self, ray_id: str) -> LatticeVec2:
        try:
            return self._coords[ray_id]
        except KeyError:
            raise FanError(f"unknown ray {ray_id!r}") from None

    def has_ray(self, ray_id: str) -> bool:
        return ray_id in self._coords

    def internal_edge(self, a: str, b: str) -> InternalEdge:
        kind, i = self._edge_index.get(frozenset((a, b)), (None, None))
        if kind != "internal":
            raise FanError(f"({a},{b}) is not an internal edge")
        return self.internal_edges[i]

    def internal_edge_index(self, a: str, b: str) -> int:
        kind, i = self._edge_index.get(frozenset((a, b)), (None, None))
        if kind != "internal":
            raise FanError(f"({a},{b}) is not an internal edge")
        return i

    def is_boundary_ray(self, ray_id: str) -> bool:
        return ray_id not in self.stars

    def triangle_index(self, ray_ids: Iterable[str]) -> int:
        key = frozenset(ray_ids)
        for i, tri in enumerate(self.triangles):
            if frozenset(tri.rays) == key:
                return i
        raise FanError(f"no triangle with rays {sorted(key)}")


def validate_fan(rays, triangles) -> FanTriangulation:
    """Check raw fan data and derive edges, interior rays and stars.

    ``rays`` holds :class:`Ray` objects or ``(id, (x, y))`` pairs and
    ``triangles`` holds :class:`Triangle` objects or triples of ray ids.
    Triangles are reordered anticlockwise.
    """
    ray_list = [_coerce_ray(r) for r in rays]
    coords = {}
    seen_u = {}
    for r in ray_list:
        if r.id in coords:
            raise FanError(f"duplicate ray id {r.id!r}")
        if r.u in seen_u:
            raise FanError(
                f"rays {seen_u[r.u]!r} and {r.id!r} have the same coordinates {r.u}"
            )
        coords[r.id] = r.u
        seen_u[r.u] = r.id

    tris = []
    seen_tris = set()
    for raw in triangles:
        ids = tuple(raw.rays if isinstance(raw, Triangle) else raw)
        if len(ids) != 3:
            raise FanError(f"triangle {ids} does not have three rays")
        for rid in ids:
            if rid not in coords:
                raise FanError(f"triangle {ids} refers to unknown ray {rid!r}")
        if len(set(ids)) != 3:
            raise FanError(f"triangle {ids} repeats a ray")
        a, b, c = (coords[i] for i in ids)
        d = det2(b - a, c - a)
        if d == 0:
            raise FanError(f"degenerate triangle {ids}: rays are collinear")
        if abs(d) != 1:
            raise NonUnimodularError(ids, d)
        if d < 0:
            ids = (ids[0], ids[2], ids[1])
        key = frozenset(ids)
        if key in seen_tris:
            raise FanError(f"triangle {ids} listed twice")
        seen_tris.add(key)
        tris.append(Triangle(ids))
    if not tris:
        raise FanError("fan has no triangles")

    used = {rid for t in tris for rid in t.rays}
    unused = [r.id for r in ray_list if r.id not in used]
    if unused:
        raise FanError(f"rays not used by any triangle: {unused}")

    # Unimodular triangles have primitive edges, so no ray can sit inside an
    # edge: T-junctions are excluded by the determinant check alone.
    incidence: dict[frozenset, list[tuple[int, tuple[str, str]]]] = {}
    order: list[frozenset] = []
    for ti, tri in enumerate(tris):
        for xy in tri.directed_edges():
            key = frozenset(xy)
            if key not in incidence:
                incidence[key] = []
                order.append(key)
            incidence[key].append((ti, xy))

    internal, boundary = [], []
    for key in order:
        inc = incidence[key]
        if len(inc) == 1:
            (ti, xy), = inc
            boundary.append(BoundaryEdge(xy, ti))
        elif len(inc) == 2:
            (t0, xy0), (t1, xy1) = inc
            if xy0 != (xy1[1], xy1[0]):
                raise FanError(
                    f"triangles {tris[t0].rays} and {tris[t1].rays} overlap: "
                    f"apexes lie on the same side of edge {xy0}"
                )
            internal.append(InternalEdge(xy0, (t0, t1)))
        else:
            raise FanError(
                f"edge {tuple(sorted(key))} is shared by {len(inc)} triangles"
            )

    _check_connected(tris, internal)
    stars, interior = _classify_rays(ray_list, tris, coords)
    warnings = _check_boundary(boundary, coords)

    return FanTriangulation(
        rays=tuple(ray_list),
        triangles=tuple(tris),
        internal_edges=tuple(internal),
        boundary_edges=tuple(boundary),
        interior_rays=tuple(interior),
        stars=stars,
        warnings=tuple(warnings),
    )


def _coerce_ray(r) -> Ray:
    if isinstance(r, Ray):
        return r
    rid, u = r
    if not isinstance(u, LatticeVec2):
        try:
            u = LatticeVec2(*u)
        except TypeError as exc:
            raise FanError(f"ray {rid!r}: {exc}") from None
    return Ray(str(rid), u)


def _check_connected(tris, internal):
    adj = {i: [] for i in range(len(tris))}
    for e in internal:
        a, b = e.triangles
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        for nb in adj[queue.popleft()]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    if len(seen) != len(tris):
        missing = [tris[i].rays for i in range(len(tris)) if i not in seen]
        raise FanError(f"dual graph is disconnected; unreachable triangles {missing}")


def _winding(center: LatticeVec2, polygon: Sequence[LatticeVec2]) -> int:
    # crossing-number winding; center never lies on the polygon here
    w = 0
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        side = det2(b - a, center - a)
        if a.y <= center.y < b.y and side > 0:
            w += 1
        elif b.y <= center.y < a.y and side < 0:
            w -= 1
    return w


def _classify_rays(ray_list, tris, coords):
    """Interior rays are those whose incident triangles close into a cycle."""
    link: dict[str, dict[str, str]] = {r.id: {} for r in ray_list}
    first_link: dict[str, str] = {}
    for tri in tris:
        for rid in tri.rays:
            _, a, b = tri.rotated_to(rid)
            if a in link[rid]:
                raise FanError(f"ray {rid!r} is a non-manifold point of the fan")
            link[rid][a] = b
            first_link.setdefault(rid, a)

    stars, interior = {}, []
    for r in ray_list:
        nxt = link[r.id]
        targets = set(nxt.values())
        starts = [a for a in nxt if a not in targets]
        if not starts:
            cycle = [first_link[r.id]]
            while True:
                b = nxt[cycle[-1]]
                if b == cycle[0]:
                    break
                cycle.append(b)
            if len(cycle) != len(nxt):
                raise FanError(f"triangles around ray {r.id!r} form several cycles")
            w = _winding(coords[r.id], [coords[c] for c in cycle])
            if w != 1:
                raise FanError(
                    f"triangles around ray {r.id!r} wind {w} times around it"
                )
            stars[r.id] = tuple(cycle)
            interior.append(r.id)
        elif len(starts) > 1:
            raise FanError(
                f"ray {r.id!r} is a pinch point: its triangles form "
                f"{len(starts)} separate fans"
            )
        else:
            count, a = 0, starts[0]
            while a in nxt:
                a = nxt[a]
                count += 1
            if count != len(nxt):
                raise FanError(f"ray {r.id!r} is a non-manifold point of the fan")
    return stars, interior


def _segments_meet(p, q, r, s) -> bool:
    def orient(a, b, c):
        d = det2(b - a, c - a)
        return (d > 0) - (d < 0)

    def on_segment(a, b, c):
        return min(a.x, b.x) <= c.x <= max(a.x, b.x) and min(a.y, b.y) <= c.y <= max(a.y, b.y)

    o1, o2, o3, o4 = orient(p, q, r), orient(p, q, s), orient(r, s, p), orient(r, s, q)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and on_segment(p, q, r))
        or (o2 == 0 and on_segment(p, q, s))
        or (o3 == 0 and on_segment(r, s, p))
        or (o4 == 0 and on_segment(r, s, q))
    )


def _check_boundary(boundary, coords) -> list[str]:
    nxt = {}
    for e in boundary:
        x, y = e.rays
        if x in nxt:
            raise FanError(f"boundary of the fan is not a simple polygon at ray {x!r}")
        nxt[x] = y
    start = boundary[0].rays[0]
    cycle = [start]
    while nxt.get(cycle[-1]) != start:
        if cycle[-1] not in nxt:
            raise FanError(f"boundary of the fan is not closed at ray {cycle[-1]!r}")
        cycle.append(nxt[cycle[-1]])
        if len(cycle) > len(nxt):
            raise ConsistencyError("boundary walk did not close", module="fan")
    if len(cycle) != len(boundary):
        raise FanError("boundary of the fan has several components (the fan has holes)")

    pts = [coords[c] for c in cycle]
    n = len(pts)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_meet(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]):
                raise FanError(
                    f"boundary edges ({cycle[i]},{cycle[(i + 1) % n]}) and "
                    f"({cycle[j]},{cycle[(j + 1) % n]}) intersect"
                )

    warnings = []
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        turn = det2(b - a, c - b)
        if turn == 0:
            warnings.append(
                f"polygon is not good: ray {cycle[i]!r} lies inside a polygon edge"
            )
        elif turn < 0:
            warnings.append(f"polygon is not convex at ray {cycle[i]!r}")
    return warnings


EdgeRef = Union[InternalEdge, int, tuple]


def resolve_internal_edge(fan: FanTriangulation, edge: EdgeRef) -> tuple[InternalEdge, tuple[str, str]]:
    """Return the edge record and the ray order the caller asked for."""
    if isinstance(edge, InternalEdge):
        return edge, edge.rays
    if isinstance(edge, int) and not isinstance(edge, bool):
        e = fan.internal_edges[edge]
        return e, e.rays
    a, b = edge
    return fan.internal_edge(a, b), (a, b)


def quad_relation(fan: FanTriangulation, edge: EdgeRef) -> QuadRelation:
    """Solve ``u1 + u2 + y1 v1 + y2 v2 = 0``, ``y1 + y2 = -2`` around an edge.

    ``v1, v2`` are the edge rays in the order given by ``edge`` and ``u1, u2``
    the apexes of the two adjacent triangles.
    """
    rec, (v1_id, v2_id) = resolve_internal_edge(fan, edge)
    t0, t1 = rec.triangles
    x, y = rec.rays
    apex1 = fan.triangles[t0].apex(x, y)
    apex2 = fan.triangles[t1].apex(x, y)
    u1, u2 = fan.u(apex1), fan.u(apex2)
    v1, v2 = fan.u(v1_id), fan.u(v2_id)

    # eliminate y2 = -2 - y1: y1 (v1 - v2) = 2 v2 - u1 - u2
    d = v1 - v2
    rhs = v2 * 2 - u1 - u2
    if d.x != 0:
        y1, rem = divmod(rhs.x, d.x)
    else:
        y1, rem = divmod(rhs.y, d.y)
    if rem != 0 or d * y1 != rhs:
        raise ConsistencyError(
            f"quadrilateral relation around {rec} has no integer solution",
            module="fan",
        )
    return QuadRelation(apex1, apex2, v1_id, v2_id, y1, -2 - y1)


def star_of_interior_ray(fan: FanTriangulation, ray_id: str) -> tuple[str, ...]:
    """Neighbours of an interior ray in anticlockwise cyclic order."""
    if not fan.has_ray(ray_id):
        raise FanError(f"unknown ray {ray_id!r}")
    try:
        return fan.stars[ray_id]
    except KeyError:
        raise FanError(f"ray {ray_id!r} is not interior") from None


def star_triangles(fan: FanTriangulation, ray_id: str) -> tuple[int, ...]:
    """Triangle indices ``q_1..q_m`` with ``q_j = (E, u_j, u_{j+1})``."""
    star = star_of_interior_ray(fan, ray_id)
    m = len(star)
    return tuple(fan.triangle_index((ray_id, star[j], star[(j + 1) % m])) for j in range(m))
