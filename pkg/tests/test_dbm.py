import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from tacause.dbm import DBM, INF, b_add, b_negate, bound

CLOCKS = 3

# a constraint is (i, j, c, strict): x_i - x_j < c or <= c, index 0 is the zero clock
constraint = st.tuples(st.integers(0, CLOCKS), st.integers(0, CLOCKS),
                       st.integers(-4, 5), st.booleans()).filter(lambda t: t[0] != t[1])
point = st.lists(st.integers(0, 12).map(lambda v: Fraction(v, 2)), min_size=CLOCKS,
                 max_size=CLOCKS).map(lambda v: [Fraction(0)] + v)


def holds(cons, v) -> bool:
    for i, j, c, strict in cons:
        d = v[i] - v[j]
        if d > c or (d == c and strict):
            return False
    return True


def zone(cons) -> DBM:
    z = DBM.universe(CLOCKS)
    for i, j, c, strict in cons:
        z.constrain(i, j, bound(c, strict))
    return z


def shift_interval(cons, v, direction):
    """Exact set of ``d >= 0`` with ``v + direction * d`` in the constraints: (lo, hi) bounds."""
    lo, lo_open, hi, hi_open = Fraction(0), False, None, False
    nonneg = [(0, i, 0, False) for i in range(1, CLOCKS + 1)]  # clocks stay >= 0
    for i, j, c, strict in list(cons) + nonneg:
        # coefficient of d in x_i - x_j
        coef = (direction if i else 0) - (direction if j else 0)
        rest = v[i] - v[j]
        if coef == 0:
            if rest > c or (rest == c and strict):
                return None
        elif coef > 0:  # rest + d <= c
            b = Fraction(c) - rest
            if hi is None or b < hi or (b == hi and strict):
                hi, hi_open = b, strict
        else:  # rest - d <= c
            b = rest - c
            if b > lo or (b == lo and strict):
                lo, lo_open = b, strict
    if hi is None:
        return True
    return hi > lo or (hi == lo and not hi_open and not lo_open)


def in_up(cons, v):
    """v in up(Z) iff v - d in Z for some d >= 0."""
    return bool(shift_interval(cons, v, -1))


def in_down(cons, v):
    return bool(shift_interval(cons, v, 1))


@settings(max_examples=300, deadline=None)
@given(st.lists(constraint, max_size=6), point)
def test_constrain_matches_points(cons, v):
    z = zone(cons)
    assert z.contains_point(v) == holds(cons, v)
    if z.is_empty():
        assert not holds(cons, v)


@settings(max_examples=300, deadline=None)
@given(st.lists(constraint, max_size=5), point)
def test_up_and_down_exact(cons, v):
    z = zone(cons)
    if z.is_empty():
        return
    assert z.copy().up().contains_point(v) == in_up(cons, v)
    assert z.copy().down().close().contains_point(v) == in_down(cons, v)


@settings(max_examples=300, deadline=None)
@given(st.lists(constraint, max_size=5), point, st.integers(1, CLOCKS), st.integers(0, 3))
def test_reset_exact(cons, v, x, value):
    z = zone(cons)
    if z.is_empty():
        return
    r = z.copy().reset(x, value)
    if v[x] != value:
        assert not r.contains_point(v)
        return
    # v in reset(Z) iff some t >= 0 with v[x := t] in Z; candidates suffice on a fine grid
    ok = any(holds(cons, v[:x] + [Fraction(t, 4)] + v[x + 1:]) for t in range(0, 60))
    assert r.contains_point(v) == ok


@settings(max_examples=200, deadline=None)
@given(st.lists(constraint, max_size=5), st.lists(constraint, max_size=4), point)
def test_intersect_and_subtract(c1, c2, v):
    a, b = zone(c1), zone(c2)
    both = a.intersect(b)
    assert both.contains_point(v) == (holds(c1, v) and holds(c2, v))
    pieces = a.subtract(b)
    inside = [p.contains_point(v) for p in pieces]
    assert sum(inside) <= 1  # pairwise disjoint
    assert any(inside) == (holds(c1, v) and not holds(c2, v))


@settings(max_examples=200, deadline=None)
@given(st.lists(constraint, max_size=5), point)
def test_extrapolation_only_grows(cons, v):
    z = zone(cons)
    e = z.copy().extrapolate([0, 2, 3, 1])
    if z.contains_point(v):
        assert e.contains_point(v)
    assert e.includes(z)


@settings(max_examples=200, deadline=None)
@given(st.lists(constraint, max_size=5), st.lists(constraint, max_size=5))
def test_includes_agrees_with_points(c1, c2):
    a, b = zone(c1), zone(c2)
    if a.includes(b):
        rng = random.Random(0)
        for _ in range(30):
            v = [Fraction(0)] + [Fraction(rng.randint(0, 12), 2) for _ in range(CLOCKS)]
            if holds(c2, v):
                assert holds(c1, v)


def test_bound_arithmetic():
    assert b_add(bound(2), bound(3)) == bound(5)
    assert b_add(bound(2, True), bound(3)) == bound(5, True)
    assert b_add(INF, bound(1)) == INF
    assert b_negate(bound(3)) == bound(-3, True)
    assert b_negate(bound(3, True)) == bound(-3)
    assert bound(1, True) < bound(1) < bound(2, True)


def test_empty_detection():
    z = DBM.universe(1)
    z.constrain(1, 0, bound(2))
    z.constrain(0, 1, bound(-2, True))  # x > 2
    assert z.is_empty()
