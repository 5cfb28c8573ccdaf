from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqlift.classes import (
    cup_by_triple_intersections,
    cup_on_divisor,
    curve_degree,
    kaehler_cone_check,
    make_class,
    nested_neighbours,
    relation_classes,
    restricted_triple,
)
from pqlift.errors import ClassError
from pqlift.fan import star_of_interior_ray

from strategies import (
    classes_on,
    conifold,
    conifold_class,
    hex_class,
    hexagon,
    random_fans,
    rationals,
    small_ints,
)


def test_hexagon_curve_degrees():
    fan = hexagon()
    w = hex_class(fan, (1, 2, 2, 1))
    assert curve_degree(fan, w, ("E", "u1")) == 1
    assert curve_degree(fan, w, ("E", "u5")) == 1


@given(st.tuples(rationals, rationals, rationals))
def test_conifold_edge_degree(w):
    fan = conifold()
    assert curve_degree(fan, conifold_class(fan, w), ("u2", "u4")) == -w[1]


@pytest.mark.parametrize(
    "fan_fn, mk, vals, ok",
    [
        (hexagon, hex_class, (1, 2, 2, 1), True),
        (conifold, conifold_class, (2, -1, 2), True),
        (hexagon, hex_class, (1, 3, 1, 1), False),
    ],
)
def test_kaehler_cone(fan_fn, mk, vals, ok):
    fan = fan_fn()
    report = kaehler_cone_check(fan, mk(fan, vals))
    assert report.ok is ok


def test_kaehler_violation_names_the_edge():
    fan = hexagon()
    report = kaehler_cone_check(fan, hex_class(fan, (1, 3, 1, 1)))
    degrees = {frozenset(e.rays): report.degrees[e] for e in report.violations}
    # t2 = w1 - w2 + w3 = -1 and t4 = w3 - w4 = 0
    assert degrees == {frozenset(("E", "u2")): -1, frozenset(("E", "u4")): 0}


def test_restricted_triples_on_hexagon():
    fan = hexagon()
    assert restricted_triple(fan, "E", "E", "E") == 6
    assert restricted_triple(fan, "E", "u3", "u3") == -1
    assert restricted_triple(fan, "E", "u1", "u2") == 1
    assert restricted_triple(fan, "E", "u1", "u4") == 0
    assert restricted_triple(fan, "E", "u2", "E") == -1


def test_restricted_triple_outside_star_is_refused():
    fan = conifold()
    with pytest.raises(ClassError, match="closed star"):
        restricted_triple(fan, "v1", "u3", "u1")


@pytest.mark.parametrize("f, expected", [((1, 1, -1, -1), 0), ((1, 0, 0, 0), 1), ((1, 1, 1, 1), 4)])
def test_hexagon_cup(f, expected):
    fan = hexagon()
    w = hex_class(fan, (1, 2, 2, 1))
    F = hex_class(fan, f, integral=True)
    assert cup_on_divisor(fan, w, F, "E") == expected
    assert cup_by_triple_intersections(fan, w, F, "E") == expected


@given(st.tuples(rationals, rationals, rationals), st.tuples(small_ints, small_ints, small_ints))
def test_conifold_cup_closed_forms(w, f):
    fan = conifold()
    W, F = conifold_class(fan, w), conifold_class(fan, f, integral=True)
    assert cup_on_divisor(fan, W, F, "v1") == (f[0] + f[1]) * (w[0] + w[1])
    assert cup_on_divisor(fan, W, F, "v2") == (f[1] + f[2]) * (w[1] + w[2])


def test_make_class_rejects_bad_input():
    fan = hexagon()
    with pytest.raises(ClassError, match="unknown ray"):
        make_class(fan, {"zz": 1})
    with pytest.raises(ClassError, match="float"):
        make_class(fan, {"u1": 0.5})
    with pytest.raises(ClassError, match="integral"):
        make_class(fan, {"u1": Fraction(1, 2)}, integral=True)


def test_missing_coefficients_are_zero():
    fan = hexagon()
    assert make_class(fan, {"u1": 3})["u5"] == 0


def test_no_nested_rays_in_examples():
    assert nested_neighbours(hexagon(), "E") == ()
    assert nested_neighbours(conifold(), "v1") == ()


@settings(max_examples=60, deadline=None)
@given(random_fans(radius=3))
def test_relation_classes_have_zero_degree(fan):
    for rel in relation_classes(fan):
        for e in fan.internal_edges:
            assert curve_degree(fan, rel, e) == 0


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_curve_degree_linear(data):
    fan = data.draw(random_fans(radius=3))
    a, b = data.draw(classes_on(fan)), data.draw(classes_on(fan))
    k = data.draw(rationals)
    for e in fan.internal_edges:
        assert curve_degree(fan, a + b * k, e) == curve_degree(fan, a, e) + k * curve_degree(fan, b, e)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lemma_t_u(data):
    fan = data.draw(random_fans(radius=3, need_interior=True))
    cls = data.draw(classes_on(fan))
    for e in fan.interior_rays:
        ue = fan.u(e)
        total = [Fraction(0), Fraction(0)]
        for uj in star_of_interior_ray(fan, e):
            t = curve_degree(fan, cls, (uj, e))
            d = fan.u(uj) - ue
            total[0] += t * d.x
            total[1] += t * d.y
        assert total == [0, 0]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_cup_two_routes_agree(data):
    fan = data.draw(random_fans(radius=3, need_interior=True))
    w = data.draw(classes_on(fan))
    F = data.draw(classes_on(fan, integral=True))
    for e in fan.interior_rays:
        assert cup_on_divisor(fan, w, F, e) == cup_by_triple_intersections(fan, w, F, e)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_cup_invariant_under_relations(data):
    fan = data.draw(random_fans(radius=3, need_interior=True))
    w = data.draw(classes_on(fan))
    F = data.draw(classes_on(fan, integral=True))
    shift = data.draw(st.sampled_from(relation_classes(fan))) * data.draw(small_ints)
    for e in fan.interior_rays:
        assert cup_on_divisor(fan, w + shift, F, e) == cup_on_divisor(fan, w, F, e)
        assert cup_by_triple_intersections(fan, w, F + shift, e) == cup_on_divisor(fan, w, F, e)


@settings(max_examples=40, deadline=None)
@given(random_fans(radius=3, need_interior=True))
def test_self_intersection_matches_noether(fan):
    # E is a smooth complete toric surface with m rays, so E^3 = K_E^2 = 12 - m
    for e in fan.interior_rays:
        m = len(star_of_interior_ray(fan, e))
        assert restricted_triple(fan, e, e, e) == 12 - m
