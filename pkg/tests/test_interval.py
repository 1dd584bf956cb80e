import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pacstl.errors import InputError
from pacstl.geomsets import Interval, hull, imax, imin

finite = st.floats(-1e6, 1e6, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = draw(finite), draw(finite)
    return Interval(min(a, b), max(a, b))


def test_rejects_inverted_and_nan():
    with pytest.raises(InputError):
        Interval(1.0, 0.0)
    with pytest.raises(InputError):
        Interval(math.nan, 1.0)


def test_negation_swaps_bounds():
    assert (-Interval(-1.0, 2.0)).as_tuple() == (-2.0, 1.0)


def test_min_max_inclusion_functions():
    a, b = Interval(0.0, 3.0), Interval(-1.0, 2.0)
    assert imin(a, b).as_tuple() == (-1.0, 2.0)
    assert imax(a, b).as_tuple() == (0.0, 3.0)
    assert imin([a, b]).as_tuple() == (-1.0, 2.0)


def test_hull_of_values():
    assert hull([3.0, -1.0, 2.0]).as_tuple() == (-1.0, 3.0)
    with pytest.raises(InputError):
        hull([])


@given(intervals(), intervals(), st.floats(0, 1), st.floats(0, 1))
def test_arithmetic_encloses_point_results(a, b, s, t):
    x = a.lo + s * a.width
    y = b.lo + t * b.width
    tol = 1e-6 * (1 + abs(x) + abs(y))
    assert (a + b).lo - tol <= x + y <= (a + b).hi + tol
    assert (a - b).lo - tol <= x - y <= (a - b).hi + tol
    p = a * b
    assert p.lo - 1e-6 * (1 + abs(x * y)) <= x * y <= p.hi + 1e-6 * (1 + abs(x * y))
    assert imin(a, b).lo <= min(x, y) <= imin(a, b).hi
    assert imax(a, b).lo <= max(x, y) <= imax(a, b).hi


@given(intervals(), st.floats(-100, 100, allow_nan=False))
def test_scalar_multiplication_keeps_order(a, k):
    r = a * k
    assert r.lo <= r.hi


@given(intervals())
def test_negation_involution(a):
    assert -(-a) == a


def test_containment():
    iv = Interval(0.0, 1.0)
    assert 0.5 in iv and 1.0 in iv and 1.1 not in iv
    assert Interval(0.2, 0.3) in iv
    assert Interval(0.2, 1.3) not in iv
