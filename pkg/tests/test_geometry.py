from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from whitneyext.geometry import (
    Box, DyadicCube, cubes_touch, dist_sq_box_to_points, dyadic_exponent,
    is_dyadic, pow2, to_frac_point)


def test_pow2_exact_both_signs():
    assert pow2(3) == 8
    assert pow2(-3) == Fraction(1, 8)
    assert pow2(0) == 1


def test_to_frac_point_floats_are_exact():
    pt = to_frac_point((0.5, 0.25, 3.0))
    assert pt == (Fraction(1, 2), Fraction(1, 4), Fraction(3))


def test_is_dyadic():
    assert is_dyadic(Fraction(3, 8))
    assert is_dyadic(5)
    assert not is_dyadic(Fraction(1, 3))


def test_dyadic_exponent():
    assert dyadic_exponent([(Fraction(3, 8), Fraction(1, 2))]) == 3
    with pytest.raises(ValueError):
        dyadic_exponent([(Fraction(1, 3),)])


def test_box_predicates():
    b = Box((Fraction(0), Fraction(0)), (Fraction(1), Fraction(2)))
    assert b.contains((Fraction(1, 2), Fraction(2)))
    assert not b.contains((Fraction(3, 2), Fraction(1)))
    assert b.volume() == 2
    assert b.diameter_sq() == 5
    assert b.dist_sq_to_point((Fraction(2), Fraction(3))) == 2
    assert b.dist_sq_to_point((Fraction(1, 2), Fraction(1))) == 0
    d = b.dilate(Fraction(11, 10))
    assert d.lo == (Fraction(-1, 20), Fraction(-1, 10))
    assert d.hi == (Fraction(21, 20), Fraction(21, 10))


def test_empty_box_rejected():
    with pytest.raises(ValueError):
        Box((Fraction(1),), (Fraction(0),))


def test_dist_sq_box_to_points_empty_raises():
    b = Box((Fraction(0),), (Fraction(1),))
    with pytest.raises(ValueError):
        dist_sq_box_to_points(b, [])
    assert dist_sq_box_to_points(b, [(Fraction(3),), (Fraction(-1),)]) == 1


def test_cube_box_and_key_round_trip():
    c = DyadicCube(3, (5, -2))
    b = c.box()
    assert b.lo == (Fraction(5, 8), Fraction(-1, 4))
    assert b.hi == (Fraction(6, 8), Fraction(-1, 8))
    assert c.key() == "3:5,-2"
    assert DyadicCube.from_key(c.key()) == c
    assert c.diameter_sq() == 2 * Fraction(1, 64)


def test_cubes_touch_examples():
    a = DyadicCube(0, (10,))
    assert cubes_touch(a, DyadicCube(0, (11,)))           # shared endpoint
    assert cubes_touch(a, DyadicCube(1, (19,)))           # [9.5,10] below
    assert not cubes_touch(a, DyadicCube(1, (18,)))       # [9,9.5]
    assert not cubes_touch(a, DyadicCube(0, (12,)))
    assert cubes_touch(DyadicCube(1, (2, 2)), DyadicCube(0, (0, 0)))  # corner


cube_st = st.builds(
    DyadicCube,
    st.integers(-2, 4),
    st.tuples(st.integers(-20, 20), st.integers(-20, 20)))


@given(cube_st, cube_st)
def test_cubes_touch_symmetric_and_matches_interval_oracle(a, b):
    got = cubes_touch(a, b)
    assert got == cubes_touch(b, a)
    # oracle: exact closed-interval overlap of the boxes, axis by axis
    ba, bb = a.box(), b.box()
    expected = all(l1 <= h2 and l2 <= h1 for l1, h1, l2, h2 in
                   zip(ba.lo, ba.hi, bb.lo, bb.hi))
    assert got == expected


@given(cube_st)
def test_parent_child_round_trip(c):
    kids = c.children()
    assert len(kids) == 4
    for k in kids:
        assert k.parent() == c
        kb, cb = k.box(), c.box()
        assert all(cl <= kl and kh <= ch for cl, kl, kh, ch in
                   zip(cb.lo, kb.lo, kb.hi, cb.hi))
    assert cubes_touch(c, c)


@given(cube_st, st.integers(0, 3))
def test_rescaled_copies_preserve_touching_structure(c, j):
    # integer-coordinate structure is scale free
    other = DyadicCube(c.level, tuple(a + 1 for a in c.coords))
    assert cubes_touch(c, other)
    scaled = DyadicCube(c.level + j, c.coords)
    scaled_other = DyadicCube(other.level + j, other.coords)
    assert cubes_touch(scaled, scaled_other)
