"""Degree-two classes on a toric resolution and their intersection numbers.

A class is a rational combination ``sum c_i D_i`` of the ray divisors.  No
normal form modulo the linear relations ``sum <m, u_i> D_i = 0`` is computed:
every quantity consumed downstream (curve degrees, pairings on compact
divisors) is invariant under those relations, which the tests assert.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .errors import ClassError
from .fan import (
    EdgeRef,
    FanTriangulation,
    InternalEdge,
    quad_relation,
    star_of_interior_ray,
)

CurveRef = InternalEdge


@dataclass(frozen=True, eq=False)
class CohClass:
    coeffs: Mapping[str, Fraction]
    integral: bool = False

    def __getitem__(self, ray_id: str) -> Fraction:
        return self.coeffs.get(ray_id, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return self.integral == other.integral and all(self[k] == other[k] for k in keys)

    def __add__(self, other: CohClass) -> CohClass:
        keys = list(dict.fromkeys([*self.coeffs, *other.coeffs]))
        return CohClass(
            MappingProxyType({k: self[k] + other[k] for k in keys}),
            self.integral and other.integral,
        )

    def __mul__(self, k) -> CohClass:
        k = Fraction(k)
        return CohClass(
            MappingProxyType({r: c * k for r, c in self.coeffs.items()}),
            self.integral and k.denominator == 1,
        )

    __rmul__ = __mul__


def make_class(fan: FanTriangulation, coeffs: Mapping[str, object], integral: bool = False) -> CohClass:
    """Build a class over the rays of ``fan``; missing rays get coefficient 0.

    With ``integral=True`` every coefficient must be an integer, as needed for
    the curvature class of a circle bundle.
    """
    values = {}
    for rid, raw in coeffs.items():
        if not fan.has_ray(rid):
            raise ClassError(f"coefficient given for unknown ray {rid!r}")
        if isinstance(raw, float):
            raise ClassError(f"coefficient of {rid!r} is a float; use an exact rational")
        c = Fraction(raw)
        if integral and c.denominator != 1:
            raise ClassError(f"class must be integral but coefficient of {rid!r} is {c}")
        values[rid] = c
    full = {rid: values.get(rid, Fraction(0)) for rid in fan.ray_ids}
    return CohClass(MappingProxyType(full), integral)


def relation_classes(fan: FanTriangulation) -> tuple[CohClass, CohClass, CohClass]:
    """The three classes ``sum x(u_i) D_i``, ``sum y(u_i) D_i``, ``sum D_i``, all zero."""
    xs = {r.id: r.u.x for r in fan.rays}
    ys = {r.id: r.u.y for r in fan.rays}
    ones = {r.id: 1 for r in fan.rays}
    return tuple(make_class(fan, c, integral=True) for c in (xs, ys, ones))


def curve_degree(fan: FanTriangulation, cls: CohClass, curve: EdgeRef) -> Fraction:
    """Pairing of ``cls`` with the compact curve dual to an internal edge.

    Only the four divisors of the surrounding quadrilateral meet the curve.
    """
    q = quad_relation(fan, curve)
    return cls[q.apex1] + cls[q.apex2] + q.y1 * cls[q.edge1] + q.y2 * cls[q.edge2]


@dataclass(frozen=True)
class KaehlerReport:
    ok: bool
    violations: tuple[InternalEdge, ...]
    degrees: Mapping[InternalEdge, Fraction]


def kaehler_cone_check(fan: FanTriangulation, omega: CohClass) -> KaehlerReport:
    degrees = {e: curve_degree(fan, omega, e) for e in fan.internal_edges}
    bad = tuple(e for e, t in degrees.items() if t <= 0)
    return KaehlerReport(not bad, bad, MappingProxyType(degrees))


def _star_coefficients(fan, e_ray):
    """``(a_j, b_j)`` with ``u_{j-1} + u_{j+1} + a_j u_j + b_j u_E = 0``."""
    star = star_of_interior_ray(fan, e_ray)
    m = len(star)
    out = []
    for j, uj in enumerate(star):
        q = quad_relation(fan, (uj, e_ray))
        if {q.apex1, q.apex2} != {star[j - 1], star[(j + 1) % m]}:
            raise ClassError(f"star of {e_ray!r} is inconsistent at {uj!r}")
        out.append((q.y1, q.y2))
    return star, out


def restricted_triple(fan: FanTriangulation, e_ray: str, a: str, b: str) -> int:
    """Triple intersection ``A . B . E`` for A, B in the closed star of E.

    Requests outside the closed star are refused rather than answered with 0.
    """
    star, ab = _star_coefficients(fan, e_ray)
    index = {u: j for j, u in enumerate(star)}
    for x in (a, b):
        if x != e_ray and x not in index:
            raise ClassError(f"{x!r} is not in the closed star of {e_ray!r}")
    if a == e_ray and b == e_ray:
        return -sum(bj for _, bj in ab)
    if a == e_ray or b == e_ray:
        j = index[b if a == e_ray else a]
        return ab[j][1]
    j, k = index[a], index[b]
    if j == k:
        return ab[j][0]
    m = len(star)
    if (j - k) % m in (1, m - 1):
        return 1
    return 0


def cup_on_divisor(fan: FanTriangulation, omega: CohClass, F: CohClass, e_ray: str) -> Fraction:
    """``([omega] u [F]) . E`` as ``sum_j t_j (f_j - f_E)`` over the star of E."""
    star = star_of_interior_ray(fan, e_ray)
    f_e = F[e_ray]
    return sum(
        (curve_degree(fan, omega, (uj, e_ray)) * (F[uj] - f_e) for uj in star),
        Fraction(0),
    )


def cup_by_triple_intersections(fan: FanTriangulation, omega: CohClass, F: CohClass, e_ray: str) -> Fraction:
    """Same pairing, expanded over the restricted triple intersections.

    Independent of :func:`cup_on_divisor`; the two must agree exactly.
    """
    star = star_of_interior_ray(fan, e_ray)
    w_e, f_e = omega[e_ray], F[e_ray]
    total = w_e * f_e * restricted_triple(fan, e_ray, e_ray, e_ray)
    for uj in star:
        total += (omega[uj] * f_e + w_e * F[uj]) * restricted_triple(fan, e_ray, uj, e_ray)
        for uk in star:
            total += omega[uj] * F[uk] * restricted_triple(fan, e_ray, uj, uk)
    return Fraction(total)


def nested_neighbours(fan: FanTriangulation, e_ray: str) -> tuple[str, ...]:
    """Interior rays in the star of ``e_ray`` (no worked example covers these)."""
    return tuple(u for u in star_of_interior_ray(fan, e_ray) if u in fan.stars)
