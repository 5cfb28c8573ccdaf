"""Hypothesis strategies and small builders shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import assume
from hypothesis import strategies as st

from pqlift import make_class, validate_fan

HEX_RAYS = [
    ("E", (0, 0)), ("u1", (-1, -1)), ("u2", (0, -1)), ("u3", (1, 0)),
    ("u4", (1, 1)), ("u5", (0, 1)), ("u6", (-1, 0)),
]
HEX_TRIS = [("E", f"u{j}", f"u{j % 6 + 1}") for j in range(1, 7)]

CONIFOLD_RAYS = [
    ("u1", (0, 0)), ("u2", (1, 0)), ("u3", (0, 3)),
    ("u4", (-1, 3)), ("v1", (0, 1)), ("v2", (0, 2)),
]
CONIFOLD_TRIS = [
    ("u1", "u2", "v1"), ("u1", "v1", "u4"), ("u2", "u4", "v1"),
    ("u2", "u4", "v2"), ("u2", "u3", "v2"), ("u3", "u4", "v2"),
]


def hexagon():
    return validate_fan(HEX_RAYS, HEX_TRIS)


def conifold():
    return validate_fan(CONIFOLD_RAYS, CONIFOLD_TRIS)


def hex_class(fan, vals, integral=False):
    return make_class(fan, {f"u{i + 1}": v for i, v in enumerate(vals)}, integral=integral)


def conifold_class(fan, vals, integral=False):
    return make_class(fan, {f"u{i + 1}": v for i, v in enumerate(vals)}, integral=integral)


def mmn_input(m=1, n=2, k=1, s_ab=None):
    vertices = [{"id": x} for x in "ABCD"]
    edges = [
        {"from": "A", "to": "B", "r": (1, 0), "t": k * n, "s": -n if s_ab is None else s_ab},
        {"from": "B", "to": "D", "r": (0, -1), "t": k * m, "s": m},
        {"from": "A", "to": "C", "r": (0, -1), "t": k * m, "s": m},
        {"from": "C", "to": "D", "r": (1, 0), "t": k * n, "s": -n},
    ]
    rays = [
        {"at": "A", "direction": (-1, -1)},
        {"at": "B", "direction": (-1, 1)},
        {"at": "C", "direction": (1, -1)},
        {"at": "D", "direction": (1, 1)},
    ]
    return vertices, edges, rays


# cheaper to draw than st.fractions and covers the same kind of values
rationals = st.builds(Fraction, st.integers(-42, 42), st.integers(1, 7))
small_ints = st.integers(min_value=-4, max_value=4)


# -- random fine triangulations ------------------------------------------------


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _hull(points):
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _inside(hull, p):
    n = len(hull)
    return all(_orient(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n))


def placing_triangulation(points):
    """Lexicographic placing triangulation using every point.

    Applied to all lattice points of a lattice polygon it is fine, hence
    unimodular.
    """
    pts = sorted(set(points))
    k = 2
    while k < len(pts) and _orient(pts[0], pts[1], pts[k]) == 0:
        k += 1
    if k == len(pts):
        raise ValueError("points are collinear")
    apex = pts[k]
    tris = [(pts[i], pts[i + 1], apex) for i in range(k - 1)]
    line = pts[:k]
    hull = line + [apex] if _orient(pts[0], pts[k - 1], apex) > 0 else line[::-1] + [apex]
    for p in pts[k + 1:]:
        n = len(hull)
        visible = [_orient(hull[i], hull[(i + 1) % n], p) < 0 for i in range(n)]
        # rotate so the visible chain is contiguous and starts at index 0
        start = next(i for i in range(n) if visible[i] and not visible[i - 1])
        hull = hull[start:] + hull[:start]
        visible = visible[start:] + visible[:start]
        m = 0
        while m < n and visible[m]:
            tris.append((hull[m], hull[m + 1 - n if m + 1 >= n else m + 1], p))
            m += 1
        hull = [hull[0], p] + hull[m:] if m < n else [hull[0], p]
    return tris


@st.composite
def lattice_polygons(draw, radius=2, min_points=3, max_points=6):
    box = [(x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)]
    chosen = draw(st.lists(st.sampled_from(box), min_size=min_points, max_size=max_points, unique=True))
    hull = _hull(chosen)
    if len(hull) < 3:
        chosen = [(0, 0), (1, 0), (0, 1)]
        hull = _hull(chosen)
    return [p for p in box if _inside(hull, p)]


@st.composite
def random_fans(draw, radius=2, need_interior=False):
    pts = draw(lattice_polygons(radius=radius))
    tris = placing_triangulation(pts)
    name = {p: f"r{i}" for i, p in enumerate(sorted(pts))}
    # shuffle triangle order and vertex order within triangles
    tris = draw(st.permutations(tris))
    tris = [tuple(draw(st.permutations(t))) for t in tris]
    fan = validate_fan([(name[p], p) for p in sorted(pts)], [tuple(name[p] for p in t) for t in tris])
    if need_interior:
        assume(fan.interior_rays)
    return fan


@st.composite
def classes_on(draw, fan, integral=False):
    coeff = small_ints if integral else rationals
    ids = list(fan.ray_ids)
    values = dict(zip(ids, draw(st.lists(coeff, min_size=len(ids), max_size=len(ids)))))
    return make_class(fan, values, integral=integral)
