"""Exact lattice and rational-plane arithmetic.

Everything here is integer or :class:`fractions.Fraction` valued; there is no
floating point anywhere in the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

from .errors import GeometryError

Scalar = Union[int, Fraction]


def _check_int(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True, order=True)
class LatticeVec2:
    """Integer vector in Z^2 (a fan ray offset or a stabiliser)."""

    x: int
    y: int

    def __post_init__(self):
        _check_int(self.x, "x")
        _check_int(self.y, "y")

    def __add__(self, other: LatticeVec2) -> LatticeVec2:
        return LatticeVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: LatticeVec2) -> LatticeVec2:
        return LatticeVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> LatticeVec2:
        return LatticeVec2(-self.x, -self.y)

    def __mul__(self, k):
        if isinstance(k, bool) or not isinstance(k, Rational):
            return NotImplemented
        if isinstance(k, int):
            return LatticeVec2(self.x * k, self.y * k)
        return QPoint(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.x
        yield self.y

    def lift(self) -> LatticeVec3:
        """The height-one lift (x, y, 1)."""
        return LatticeVec3(self.x, self.y, 1)

    def __str__(self):
        return f"({self.x},{self.y})"


@dataclass(frozen=True, order=True)
class LatticeVec3:
    x: int
    y: int
    z: int

    def __post_init__(self):
        for name in ("x", "y", "z"):
            _check_int(getattr(self, name), name)

    def __add__(self, other: LatticeVec3) -> LatticeVec3:
        return LatticeVec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __mul__(self, k: int) -> LatticeVec3:
        _check_int(k, "scalar")
        return LatticeVec3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0


@dataclass(frozen=True)
class QPoint:
    """A point (or displacement) of the rational plane Q^2."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        if type(self.x) is not Fraction:
            object.__setattr__(self, "x", Fraction(self.x))
        if type(self.y) is not Fraction:
            object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def of(cls, value) -> QPoint:
        if isinstance(value, QPoint):
            return value
        x, y = value
        return cls(x, y)

    def __add__(self, other) -> QPoint:
        other = QPoint.of(other)
        return QPoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other) -> QPoint:
        other = QPoint.of(other)
        return QPoint(self.x - other.x, self.y - other.y)

    def __neg__(self) -> QPoint:
        return QPoint(-self.x, -self.y)

    def __mul__(self, k) -> QPoint:
        if isinstance(k, bool) or not isinstance(k, Rational):
            return NotImplemented
        return QPoint(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.x
        yield self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self):
        return f"({self.x},{self.y})"


ZERO = QPoint(Fraction(0), Fraction(0))


def det2(a, b):
    """Determinant of the 2x2 matrix with columns a and b."""
    return a.x * b.y - a.y * b.x


def dot(a, b):
    return a.x * b.x + a.y * b.y


def j2(a):
    """Quarter turn anticlockwise: (x, y) -> (-y, x)."""
    if isinstance(a, LatticeVec2):
        return LatticeVec2(-a.y, a.x)
    return QPoint(-a.y, a.x)


def is_primitive(a: LatticeVec2) -> bool:
    return gcd(a.x, a.y) == 1


def is_anticlockwise(a: LatticeVec2, b: LatticeVec2, c: LatticeVec2) -> bool:
    """True iff the triangle abc is positively oriented.

    Raises :class:`GeometryError` when the three points are collinear.
    """
    d = det2(b - a, c - a)
    if d == 0:
        raise GeometryError(f"degenerate triangle {a}, {b}, {c}")
    return d > 0


def primitive_triple(a: Scalar, b: Scalar, c: Scalar) -> tuple[int, int, int]:
    """Clear denominators of a rational triple and divide out the content."""
    fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
    den = 1
    for f in (fa, fb, fc):
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in (fa, fb, fc)]
    g = gcd(gcd(ints[0], ints[1]), ints[2])
    if g == 0:
        return (0, 0, 0)
    return tuple(v // g for v in ints)
