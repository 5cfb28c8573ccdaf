from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqlift.classes import cup_by_triple_intersections, cup_on_divisor, make_class
from pqlift.errors import ClassError, HolonomyError, WebError
from pqlift.fan import star_of_interior_ray
from pqlift.lattice import QPoint, dot, j2
from pqlift.lift import (
    GaugeShift,
    build_lift,
    closure_report,
    gauge_transform,
    ray_directions_3d,
)
from pqlift.web import build_moment_web, ingest_user_web

from strategies import (
    classes_on,
    conifold,
    conifold_class,
    hex_class,
    hexagon,
    mmn_input,
    random_fans,
    rationals,
    small_ints,
)

ratpairs = st.tuples(rationals, rationals)


def hex_lift(w=(1, 2, 2, 1), f=(1, 1, -1, -1), **kw):
    fan = hexagon()
    web = build_moment_web(fan, hex_class(fan, w), allow_non_kaehler=True)
    return build_lift(web, hex_class(fan, f, integral=True), **kw)


def edge_between(web, a, b):
    for e in web.edges:
        if (e.source, e.target) == (a, b):
            return e, 1
        if (e.source, e.target) == (b, a):
            return e, -1
    raise KeyError((a, b))


def test_hexagon_golden_values():
    L = hex_lift()
    lam = {k: tuple(v) for k, v in L.lam.items()}
    assert [lam[f"q{i}"] for i in range(1, 6)] == [(0, 0), (1, 0), (1, -1), (1, -1), (0, -1)]
    # single-valuedness around the star forces lambda(q6) = lambda(q1) here
    assert lam["q6"] == (0, 0)
    assert [L.nu3[f"q{i}"] for i in range(1, 7)] == [0, 0, 1, 1, 0, 0]
    assert dict(L.residuals) == {"E": 0} and L.closed


def test_hexagon_rays_3d():
    L = hex_lift()
    by_vertex = {}
    for ray, d in zip(L.base.rays, L.rays3d):
        by_vertex.setdefault(ray.at, []).append(d)
    assert (0, -1, 0) in by_vertex["q1"]
    assert (1, 0, 1) in by_vertex["q3"]
    for ray, d in zip(L.base.rays, L.rays3d):
        assert (d[0], d[1]) == tuple(ray.direction)


@settings(max_examples=50)
@given(st.tuples(rationals, rationals, rationals, rationals), st.tuples(small_ints, small_ints, small_ints, small_ints))
def test_hexagon_general_lambda(w, f):
    f1, f2, f3, f4 = f
    L = hex_lift(w, f)
    expected = {
        "q2": (-f1 + f2 - f3, 0),
        "q3": (-f1 + f2 - f3, -f2 + f3 - f4),
        "q4": (-f1 + f2 - f4, -f2),
        "q5": (-f1 + f2, -f2),
        "q6": (f2 - f1, f1 - f2),
    }
    assert {k: tuple(L.lam[k]) for k in expected} == expected


@settings(max_examples=50)
@given(st.tuples(rationals, rationals, rationals, rationals), st.tuples(small_ints, small_ints, small_ints, small_ints))
def test_hexagon_nu3_along_the_star(w, f):
    """nu3 propagated q1 -> q2 -> ... -> q6 (anticlockwise) in closed form."""
    w1, w2, w3, w4 = w
    f1, f2, f3, f4 = f
    L = hex_lift(w, f)
    nu = {"q1": Fraction(0)}
    for j in range(1, 6):
        a, b = f"q{j}", f"q{j + 1}"
        e, sign = edge_between(L.base, a, b)
        nu[b] = nu[a] + sign * e.t * dot(e.stabiliser, L.lam[a])
    expected = {
        "q2": 0,
        "q3": (-f1 + f2 - f3) * (w2 - w3 + w4),
        "q4": -f1 * w2 + (f2 - f3) * (w2 - w3 + w4) - f4 * (w3 - w4),
        "q5": -f1 * w2 + f2 * (w2 - w3) - f3 * (w2 - w3 + w4) - f4 * (w3 - w4),
        "q6": f1 * (w1 - w2) - f2 * (w1 - w2 + w3) - f3 * (w2 - w3 + w4) - f4 * (w3 - w4),
    }
    assert {k: nu[k] for k in expected} == expected
    # one more step back to q1 closes up with minus the residual
    e, sign = edge_between(L.base, "q6", "q1")
    assert nu["q6"] + sign * e.t * dot(e.stabiliser, L.lam["q6"]) == -L.residuals["E"]


def test_hexagon_open_lift():
    L = hex_lift(f=(1, 1, 1, 1))
    assert dict(L.residuals) == {"E": 4}
    assert not L.closed
    assert closure_report(L).per_divisor["E"] == 4


def test_mmn_lift():
    L = build_lift(ingest_user_web(*mmn_input()))
    assert {k: tuple(v) for k, v in L.lam.items()} == {
        "A": (0, 0), "B": (0, 2), "C": (-1, 0), "D": (-1, 2),
    }
    assert dict(L.nu3) == {"A": 0, "B": 0, "C": 0, "D": -2}
    assert list(L.residuals.values()) == [0]
    assert L.rays3d == ((-1, -1, 0), (-1, 1, 2), (1, -1, 1), (1, 1, -3))


def test_mmn_with_s_ab_equal_n_is_path_dependent():
    with pytest.raises(HolonomyError):
        build_lift(ingest_user_web(*mmn_input(s_ab=2)))


@given(st.tuples(rationals, rationals, rationals), st.tuples(small_ints, small_ints, small_ints))
def test_conifold_lift(w, f):
    fan = conifold()
    web = build_moment_web(
        fan, conifold_class(fan, w), fan.triangle_index(("u2", "u4", "v1")), allow_non_kaehler=True
    )
    L = build_lift(web, conifold_class(fan, f, integral=True))
    vid = {v.label: v.id for v in web.vertices}
    p1, p2 = vid["u2,u4,v1"], vid["u2,v2,u4"]
    assert L.lam[p2] - L.lam[p1] == QPoint(3, 2) * f[1]
    assert L.residuals["v1"] == (f[0] + f[1]) * (w[0] + w[1])
    assert L.residuals["v2"] == (f[1] + f[2]) * (w[1] + w[2])


def test_conifold_closed_example():
    fan = conifold()
    web = build_moment_web(fan, conifold_class(fan, (2, -1, 2)))
    L = build_lift(web, conifold_class(fan, (1, -1, 1), integral=True))
    assert L.closed and dict(L.residuals) == {"v1": 0, "v2": 0}


def test_bundle_class_checks():
    fan = hexagon()
    web = build_moment_web(fan, hex_class(fan, (1, 2, 2, 1)))
    with pytest.raises(ClassError, match="required"):
        build_lift(web)
    with pytest.raises(ClassError, match="integral"):
        build_lift(web, make_class(fan, {"u1": Fraction(1, 2)}))
    user = ingest_user_web(*mmn_input())
    with pytest.raises(WebError):
        build_lift(user, make_class(fan, {"u1": 1}))
    v, e, r = mmn_input()
    del e[0]["s"]
    with pytest.raises(WebError, match="without s"):
        build_lift(ingest_user_web(v, e, r))


def test_gauge_identity_and_shift():
    L = hex_lift()
    same = gauge_transform(L, GaugeShift((0, 0)))
    assert dict(same.nu3) == dict(L.nu3) and dict(same.lam) == dict(L.lam)
    shifted = gauge_transform(L, GaugeShift((1, 0)))
    mu = L.base.mu
    assert all(shifted.nu3[v] == L.nu3[v] + mu[v].y for v in mu)
    assert shifted.nu3["q3"] == 2
    assert dict(shifted.residuals) == dict(L.residuals)


@settings(max_examples=50, deadline=None)
@given(ratpairs, st.tuples(small_ints, small_ints, small_ints, small_ints))
def test_gauge_covariance_hexagon(lam0, f):
    base = hex_lift(f=f)
    built = hex_lift(f=f, basepoint_lambda=lam0)
    moved = gauge_transform(base, GaugeShift(lam0))
    assert dict(built.lam) == dict(moved.lam)
    assert dict(built.nu3) == dict(moved.nu3)
    assert dict(built.residuals) == dict(base.residuals)
    assert built.rays3d == moved.rays3d


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_gauge_covariance_random_fans(data):
    fan = data.draw(random_fans(radius=3))
    web = build_moment_web(fan, data.draw(classes_on(fan)), allow_non_kaehler=True)
    F = data.draw(classes_on(fan, integral=True))
    lam0 = data.draw(ratpairs)
    built = build_lift(web, F, basepoint_lambda=lam0)
    moved = gauge_transform(build_lift(web, F), GaugeShift(lam0))
    assert dict(built.lam) == dict(moved.lam)
    assert dict(built.nu3) == dict(moved.nu3)
    assert dict(built.residuals) == dict(moved.residuals)
    assert closure_report(built).closed == closure_report(moved).closed


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_lift_invariants_on_random_fans(data):
    fan = data.draw(random_fans(radius=3))
    omega = data.draw(classes_on(fan))
    F = data.draw(classes_on(fan, integral=True))
    web = build_moment_web(fan, omega, data.draw(st.integers(0, len(fan.triangles) - 1)), allow_non_kaehler=True)
    L = build_lift(web, F)
    for e, s in zip(web.edges, L.s):
        a, b = L.lam[e.source], L.lam[e.target]
        # lambda is single valued on every edge, tree or not
        assert b - a == -(j2(e.stabiliser) * s)
        # either endpoint gives the same nu3 increment
        assert e.t * dot(e.stabiliser, a) == e.t * dot(e.stabiliser, b)
    for i in web.tree:
        e = web.edges[i]
        x, y = web.vertex(e.target).mu - web.vertex(e.source).mu
        lam = L.lam[e.source]
        assert L.nu3[e.target] - L.nu3[e.source] == lam.x * y - lam.y * x
    for e_ray in fan.interior_rays:
        assert L.residuals[e_ray] == cup_on_divisor(fan, omega, F, e_ray)
        assert L.residuals[e_ray] == cup_by_triple_intersections(fan, omega, F, e_ray)
    assert L.closed == all(cup_on_divisor(fan, omega, F, e) == 0 for e in fan.interior_rays)
    for ray, d in ray_directions_3d(L).items():
        assert (d[0], d[1]) == tuple(web.rays[ray].direction)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_d_j_lemma(data):
    fan = data.draw(random_fans(radius=3, need_interior=True))
    omega = data.draw(classes_on(fan))
    F = data.draw(classes_on(fan, integral=True))
    L = build_lift(build_moment_web(fan, omega, allow_non_kaehler=True), F)
    for e_ray in fan.interior_rays:
        star = star_of_interior_ray(fan, e_ray)
        m = len(star)
        ue, fe = fan.u(e_ray), F[e_ray]

        def d(j):
            uj, un = star[j], star[(j + 1) % m]
            return (
                QPoint.of(fan.u(uj) - fan.u(un)) * fe
                + QPoint.of(fan.u(un) - ue) * F[uj]
                - QPoint.of(fan.u(uj) - ue) * F[un]
            )

        q = [f"q{fan.triangle_index((e_ray, star[j], star[(j + 1) % m])) + 1}" for j in range(m)]
        for j in range(m):
            assert L.lam[q[j]] - L.lam[q[0]] == j2(d(j) - d(0))
