"""Dyadic cubes, boxes, and exact geometric predicates.

Coordinates of cubes are integers, sites are dyadic rationals, and all
comparisons (containment, touching, distance bounds) are carried out in
exact rational arithmetic.  Squared distances replace distances wherever a
square root would otherwise appear, so every predicate is decided exactly.
"""

import math
from dataclasses import dataclass
from fractions import Fraction


def pow2(m):
    """2**m as an exact Fraction, for any integer m (positive or negative)."""
    if m >= 0:
        return Fraction(2 ** m)
    return Fraction(1, 2 ** (-m))


def to_frac_point(x):
    """Convert a point (sequence of float/int/Fraction) to exact Fractions.

    Floats are binary rationals, so the conversion is exact.
    """
    return tuple(Fraction(c) for c in x)


def is_dyadic(q):
    """True iff the rational q has a power-of-two denominator."""
    d = Fraction(q).denominator
    return d & (d - 1) == 0


def dyadic_exponent(points):
    """Smallest q such that every coordinate of every point is k / 2**q."""
    q = 0
    for pt in points:
        for c in pt:
            f = Fraction(c)
            if not is_dyadic(f):
                raise ValueError(f"coordinate {c} is not a dyadic rational")
            q = max(q, f.denominator.bit_length() - 1)
    return q


def float_point(x):
    return tuple(float(c) for c in x)


@dataclass(frozen=True)
class Box:
    """Axis-aligned closed box with exact rational endpoints."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise ValueError("empty box")

    @property
    def n(self):
        return len(self.lo)

    def contains(self, x):
        x = to_frac_point(x)
        return all(l <= c <= h for l, c, h in zip(self.lo, x, self.hi))

    def intersects(self, other):
        return all(l1 <= h2 and l2 <= h1 for l1, h1, l2, h2 in
                   zip(self.lo, self.hi, other.lo, other.hi))

    def dilate(self, c):
        """cB: scale about the center by rational factor c."""
        c = Fraction(c)
        lo, hi = [], []
        for l, h in zip(self.lo, self.hi):
            mid = (l + h) / 2
            r = (h - l) / 2
            lo.append(mid - c * r)
            hi.append(mid + c * r)
        return Box(tuple(lo), tuple(hi))

    def center(self):
        return tuple((l + h) / 2 for l, h in zip(self.lo, self.hi))

    def volume(self):
        v = Fraction(1)
        for l, h in zip(self.lo, self.hi):
            v *= h - l
        return v

    def diameter_sq(self):
        return sum((h - l) ** 2 for l, h in zip(self.lo, self.hi))

    def clamp(self, x):
        """Closest point of the box to x, per-axis."""
        x = to_frac_point(x)
        return tuple(min(max(c, l), h) for l, c, h in zip(self.lo, x, self.hi))

    def dist_sq_to_point(self, x):
        """Exact squared Euclidean distance from x to the box."""
        x = to_frac_point(x)
        out = Fraction(0)
        for l, c, h in zip(self.lo, x, self.hi):
            if c < l:
                out += (l - c) ** 2
            elif c > h:
                out += (c - h) ** 2
        return out


@dataclass(frozen=True)
class DyadicCube:
    """The cube prod_i [a_i 2^-m, (a_i+1) 2^-m] with integer level and coords."""

    level: int
    coords: tuple

    @property
    def n(self):
        return len(self.coords)

    @property
    def side(self):
        return pow2(-self.level)

    def box(self):
        t = self.side
        return Box(tuple(a * t for a in self.coords),
                   tuple((a + 1) * t for a in self.coords))

    def diameter(self):
        """delta_Q = sqrt(n) * 2^-level (float)."""
        return math.sqrt(self.n) * float(self.side)

    def diameter_sq(self):
        """Exact n * side^2."""
        return self.n * self.side ** 2

    def center(self):
        t = self.side
        return tuple((2 * a + 1) * t / 2 for a in self.coords)

    def parent(self):
        return DyadicCube(self.level - 1, tuple(a >> 1 for a in self.coords))

    def children(self):
        from itertools import product
        out = []
        for bits in product((0, 1), repeat=self.n):
            out.append(DyadicCube(self.level + 1,
                                  tuple(2 * a + b for a, b in zip(self.coords, bits))))
        return out

    def contains(self, x):
        return self.box().contains(x)

    def key(self):
        """Stable string id, e.g. "3:5,-2"."""
        return f"{self.level}:{','.join(str(a) for a in self.coords)}"

    @classmethod
    def from_key(cls, key):
        lvl, coords = key.split(":")
        return cls(int(lvl), tuple(int(c) for c in coords.split(",")))


def cube_geometry(cube):
    """Box and diameter of a dyadic cube.  Diameter is sqrt(n) * 2^-level."""
    return cube.box(), cube.diameter()


def dist_box_to_points(box, points):
    """min_{d in points} dist(d, box) as a float; squared form is exact."""
    return math.sqrt(float(dist_sq_box_to_points(box, points)))


def dist_sq_box_to_points(box, points):
    """Exact squared distance from a finite point set to a box."""
    points = list(points)
    if not points:
        raise ValueError("empty reference set")
    return min(box.dist_sq_to_point(p) for p in points)


def cubes_touch(q1, q2):
    """Exact test whether two closed dyadic cubes intersect.

    Both cubes are rescaled to the finer level and integer coordinate
    ranges are compared.
    """
    if q1.n != q2.n:
        raise ValueError("dimension mismatch")
    m = max(q1.level, q2.level)
    s1 = 1 << (m - q1.level)
    s2 = 1 << (m - q2.level)
    for a, b in zip(q1.coords, q2.coords):
        lo1, hi1 = a * s1, (a + 1) * s1
        lo2, hi2 = b * s2, (b + 1) * s2
        if hi1 < lo2 or hi2 < lo1:
            return False
    return True
