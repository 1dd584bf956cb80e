import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pacstl.errors import InputError
from pacstl.geomsets import Interval
from pacstl.istl import (
    And,
    Atomic,
    Eventually,
    Globally,
    IntervalSignal,
    Not,
    Or,
    Until,
    evaluate,
    evaluate_trace,
    horizon,
    parse,
    point_robustness,
    point_trace,
    verdict,
)
from pacstl.istl.semantics import Verdict

DT = 0.5
NAMES = ("a", "b", "c")


# independent scalar robustness written from the textbook recursion
def oracle(spec, s, t):
    if isinstance(spec, Atomic):
        return s[spec.name][t]
    if isinstance(spec, Not):
        return -oracle(spec.child, s, t)
    if isinstance(spec, And):
        return min(oracle(c, s, t) for c in spec.children)
    if isinstance(spec, Or):
        return max(oracle(c, s, t) for c in spec.children)
    a, b = round(spec.lo / DT), round(spec.hi / DT)
    if isinstance(spec, Globally):
        return min(oracle(spec.child, s, t + k) for k in range(a, b + 1))
    if isinstance(spec, Eventually):
        return max(oracle(spec.child, s, t + k) for k in range(a, b + 1))
    best = -np.inf
    for k in range(a, b + 1):
        left = min(oracle(spec.left, s, t + j) for j in range(0, k + 1))
        best = max(best, min(oracle(spec.right, s, t + k), left))
    return best


windows = st.tuples(st.integers(0, 3), st.integers(0, 3)).map(lambda p: (min(p) * DT, max(p) * DT))


def formulas(depth=4):
    leaf = st.sampled_from(NAMES).map(Atomic)
    if depth == 0:
        return leaf
    sub = st.deferred(lambda: formulas(depth - 1))
    return st.one_of(
        leaf,
        sub.map(Not),
        st.lists(sub, min_size=1, max_size=3).map(lambda c: And(tuple(c))),
        st.lists(sub, min_size=1, max_size=3).map(lambda c: Or(tuple(c))),
        st.tuples(windows, sub).map(lambda p: Globally(p[0][0], p[0][1], p[1])),
        st.tuples(windows, sub).map(lambda p: Eventually(p[0][0], p[0][1], p[1])),
        st.tuples(windows, sub, sub).map(lambda p: Until(p[0][0], p[0][1], p[1], p[2])),
    )


def _random_signal(rng, length):
    lo = {n: rng.normal(size=length) for n in NAMES}
    hi = {n: lo[n] + rng.exponential(0.5, size=length) for n in NAMES}
    return lo, hi


def test_horizon_examples():
    assert horizon(Atomic("a"), DT) == 0
    assert horizon(Globally(1.0, 2.5, Atomic("a")), DT) == 5
    assert horizon(And((Not(Atomic("a")), Globally(1.0, 2.5, Atomic("a")))), DT) == 5
    with pytest.raises(InputError):
        horizon(Globally(0.0, 0.7, Atomic("a")), DT)


def test_node_invariants():
    with pytest.raises(InputError):
        Globally(2.0, 1.0, Atomic("a"))
    with pytest.raises(InputError):
        And(())


def test_parse_prefix_form():
    spec = parse("(and (not enc) (G 1.0 2.5 enc))")
    assert spec == And((Not(Atomic("enc")), Globally(1.0, 2.5, Atomic("enc"))))
    assert parse("(U 0 1 a b)") == Until(0.0, 1.0, Atomic("a"), Atomic("b"))
    for bad in ("", "(and a", "(not a b)", "(G 1 a)", "a)", "(xor a b)", "(G x 1 a)"):
        with pytest.raises(InputError):
            parse(bad)


def test_not_swaps_bounds_and_points():
    sig = IntervalSignal({"a": [(-1.0, 2.0)]}, DT)
    r = evaluate(Not(Atomic("a")), sig)
    assert r.interval.as_tuple() == (-2.0, 1.0)


def test_globally_window_example():
    sig = IntervalSignal({"a": [(0, 1), (-1, 2), (0.5, 3)]}, DT)
    r = evaluate(Globally(0.0, 1.0, Atomic("a")), sig)
    assert r.interval.as_tuple() == (-1.0, 1.0)
    assert (r.t_low, r.t_up) == (1, 0)


def test_ties_pick_earliest_step():
    sig = IntervalSignal({"a": [(0, 1), (0, 1), (0, 1)]}, DT)
    r = evaluate(Globally(0.0, 1.0, Atomic("a")), sig)
    assert (r.t_low, r.t_up) == (0, 0)


def test_encounter_figure_example():
    h = [(-2.4, -0.11), (0.0, 3.0), (-0.5, 2.9), (-0.8, 2.5), (0.2, 2.6), (-1.0, 2.3)]
    sig = IntervalSignal({"encounter": h}, DT)
    spec = parse("(and (not encounter) (G 1.0 2.5 encounter))")
    r = evaluate(spec, sig)
    assert r.interval.lo == pytest.approx(-1.0)
    assert r.interval.hi == pytest.approx(2.3)
    assert (r.t_low, r.t_up) == (5, 5)
    assert verdict(r.interval) is Verdict.UNDEFINED


def test_verdicts():
    assert verdict(Interval(0.1, 2)) is Verdict.SATISFIED
    assert verdict(Interval(-2, -0.1)) is Verdict.VIOLATED
    assert verdict(Interval(0.0, 1.0)) is Verdict.UNDEFINED
    assert verdict(Interval(-1.0, 0.0)) is Verdict.UNDEFINED


def test_unknown_atomic_and_short_signal():
    sig = IntervalSignal({"a": [(0, 1)] * 3}, DT)
    with pytest.raises(InputError):
        evaluate(Atomic("zz"), sig)
    with pytest.raises(InputError):
        evaluate(Globally(0, 1.5, Atomic("a")), sig)
    with pytest.raises(InputError):
        evaluate(Atomic("a"), sig, t=3)


def test_signal_validation():
    with pytest.raises(InputError):
        IntervalSignal({"a": [(1, 0)]}, DT)
    with pytest.raises(InputError):
        IntervalSignal({"a": [(0, 1)], "b": [(0, 1), (0, 1)]}, DT)
    with pytest.raises(InputError):
        IntervalSignal({"a": [(0, 1)]}, 0.0)


@given(formulas(), st.integers(0, 2**31 - 1))
def test_point_semantics_matches_oracle(spec, seed):
    rng = np.random.default_rng(seed)
    length = horizon(spec, DT) + 3
    s = {n: rng.normal(size=length) for n in NAMES}
    got = point_trace(spec, s, DT)
    assert float(point_robustness(spec, s, DT, 1)) == pytest.approx(oracle(spec, s, 1), abs=1e-12)
    for t in range(3):
        assert got[t] == pytest.approx(oracle(spec, s, t), abs=1e-12)
    r = evaluate(spec, IntervalSignal.from_points(s, DT))
    assert r.interval.lo == pytest.approx(oracle(spec, s, 0), abs=1e-12)
    assert r.interval.width == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=1000)
@given(formulas(), st.integers(0, 2**31 - 1))
def test_interval_encloses_every_selection(spec, seed):
    rng = np.random.default_rng(seed)
    length = horizon(spec, DT) + 2
    lo, hi = _random_signal(rng, length)
    tr = evaluate_trace(spec, IntervalSignal.from_arrays(lo, hi, DT))
    for _ in range(20):
        u = {n: rng.uniform(size=length) for n in NAMES}
        s = {n: lo[n] + u[n] * (hi[n] - lo[n]) for n in NAMES}
        for t in range(len(tr)):
            r = oracle(spec, s, t)
            assert tr.lo[t] - 1e-12 <= r <= tr.hi[t] + 1e-12
    # the bounds themselves are attained by the all-lower and all-upper selections for negation-free parts
    assert np.all(tr.lo <= tr.hi + 1e-12)


@given(formulas(), st.integers(0, 2**31 - 1))
def test_widening_never_shrinks(spec, seed):
    rng = np.random.default_rng(seed)
    length = horizon(spec, DT) + 1
    lo, hi = _random_signal(rng, length)
    base = evaluate(spec, IntervalSignal.from_arrays(lo, hi, DT)).interval
    lo2 = {n: lo[n] - rng.exponential(0.3, length) for n in NAMES}
    hi2 = {n: hi[n] + rng.exponential(0.3, length) for n in NAMES}
    wide = evaluate(spec, IntervalSignal.from_arrays(lo2, hi2, DT)).interval
    assert base in Interval(wide.lo - 1e-12, wide.hi + 1e-12)


@given(formulas(), st.integers(0, 2**31 - 1))
def test_double_negation_is_identity(spec, seed):
    rng = np.random.default_rng(seed)
    lo, hi = _random_signal(rng, horizon(spec, DT) + 1)
    sig = IntervalSignal.from_arrays(lo, hi, DT)
    assert evaluate(Not(Not(spec)), sig) == evaluate(spec, sig)


@given(st.integers(0, 2**31 - 1), st.integers(0, 4))
def test_characteristic_points_reproduce_bounds(seed, b):
    rng = np.random.default_rng(seed)
    lo, hi = _random_signal(rng, b + 1)
    spec = And((Atomic("a"), Globally(0.0, b * DT, Atomic("a"))))
    r = evaluate(spec, IntervalSignal.from_arrays(lo, hi, DT))
    assert r.interval.lo == lo["a"][r.t_low]
    assert r.interval.hi == hi["a"][r.t_up]
