"""Interval quantitative semantics with characteristic time points."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from pacstl.errors import InputError
from pacstl.geomsets import Interval
from pacstl.istl.formula import And, Atomic, Eventually, Globally, Not, Or, SpecNode, Until, horizon, to_steps


class IntervalSignal:
    """Per-atomic interval traces on a common grid.

    Parameters
    ----------
    values : mapping
        Atomic name to a sequence of ``Interval`` or ``(lo, hi)`` pairs, or to
        a pair of arrays ``(lo_array, hi_array)`` via :meth:`from_arrays`.
    dt : float
    """

    def __init__(self, values: dict, dt: float):
        if dt <= 0:
            raise InputError("dt must be positive")
        self.dt = float(dt)
        self._lo, self._hi = {}, {}
        length = None
        for name, seq in values.items():
            pairs = [tuple(v) for v in seq]
            lo = np.array([p[0] for p in pairs], dtype=float)
            hi = np.array([p[1] for p in pairs], dtype=float)
            self._store(name, lo, hi)
            length = lo.size if length is None else length
            if lo.size != length:
                raise InputError("all atomic signals must share one length")
        self.length = length or 0

    def _store(self, name, lo, hi):
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise InputError(f"signal {name!r} has invalid intervals")
        lo.setflags(write=False)
        hi.setflags(write=False)
        self._lo[name], self._hi[name] = lo, hi

    @classmethod
    def from_arrays(cls, lo: dict, hi: dict, dt: float) -> "IntervalSignal":
        sig = cls({}, dt)
        length = None
        for name in lo:
            a = np.array(lo[name], dtype=float).reshape(-1)
            b = np.array(hi[name], dtype=float).reshape(-1)
            if a.shape != b.shape or (length is not None and a.size != length):
                raise InputError("all atomic signals must share one length")
            sig._store(name, a, b)
            length = a.size
        sig.length = length or 0
        return sig

    @classmethod
    def from_points(cls, values: dict, dt: float) -> "IntervalSignal":
        return cls.from_arrays(values, values, dt)

    @property
    def names(self) -> list:
        return list(self._lo)

    def bounds(self, name: str):
        try:
            return self._lo[name], self._hi[name]
        except KeyError:
            raise InputError(f"unknown atomic proposition {name!r}") from None

    def __getitem__(self, name: str) -> list:
        lo, hi = self.bounds(name)
        return [Interval(a, b) for a, b in zip(lo, hi)]


@dataclass(frozen=True)
class Trace:
    """Bound traces over evaluation times with the steps that attain each bound."""

    lo: np.ndarray
    hi: np.ndarray
    t_lo: np.ndarray
    t_hi: np.ndarray

    def __len__(self):
        return self.lo.size


@dataclass(frozen=True)
class EvalResult:
    interval: Interval
    t_low: int
    t_up: int


class Verdict(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDEFINED = "undefined"


def verdict(interval: Interval) -> Verdict:
    """Three-valued reading; a bound exactly at zero is undefined."""
    if interval.lo > 0:
        return Verdict.SATISFIED
    if interval.hi < 0:
        return Verdict.VIOLATED
    return Verdict.UNDEFINED


def _select(values, steps, better):
    """First candidate strictly better than all earlier ones (ties keep the earliest)."""
    best_v, best_s = values[0], steps[0]
    for v, s in zip(values[1:], steps[1:]):
        if better(v, best_v):
            best_v, best_s = v, s
    return best_v, best_s


def _lt(a, b):
    return a < b


def _gt(a, b):
    return a > b


def _combine(traces, length, op_lt):
    """Componentwise min (op_lt=True) or max of several traces of equal length."""
    better = _lt if op_lt else _gt
    lo = np.empty(length)
    hi = np.empty(length)
    tl = np.empty(length, dtype=int)
    th = np.empty(length, dtype=int)
    for t in range(length):
        lo[t], tl[t] = _select([tr.lo[t] for tr in traces], [tr.t_lo[t] for tr in traces], better)
        hi[t], th[t] = _select([tr.hi[t] for tr in traces], [tr.t_hi[t] for tr in traces], better)
    return Trace(lo, hi, tl, th)


def _window_op(tr: Trace, a: int, b: int, length: int, op_lt: bool) -> Trace:
    better = _lt if op_lt else _gt
    lo = np.empty(length)
    hi = np.empty(length)
    tl = np.empty(length, dtype=int)
    th = np.empty(length, dtype=int)
    for t in range(length):
        w = slice(t + a, t + b + 1)
        lo[t], tl[t] = _select(list(tr.lo[w]), list(tr.t_lo[w]), better)
        hi[t], th[t] = _select(list(tr.hi[w]), list(tr.t_hi[w]), better)
    return Trace(lo, hi, tl, th)


def _until_bound(lv, lt, rv, rt, t, a, b):
    """One bound of ``max_{t'} min(right(t'), min_{t''in[t,t']} left(t''))``."""
    best_v, best_s = None, None
    run_v, run_s = None, None
    for tp in range(t, t + b + 1):
        if run_v is None or lv[tp] < run_v:
            run_v, run_s = lv[tp], lt[tp]
        if tp < t + a:
            continue
        if rv[tp] < run_v:
            v, s = rv[tp], rt[tp]
        elif run_v < rv[tp]:
            v, s = run_v, run_s
        else:
            v, s = rv[tp], min(rt[tp], run_s)
        if best_v is None or v > best_v:
            best_v, best_s = v, s
    return best_v, best_s


def evaluate_trace(spec: SpecNode, sig: IntervalSignal) -> Trace:
    """Robustness traces for every evaluation time ``0 .. length - 1 - horizon``."""
    length = sig.length - horizon(spec, sig.dt)
    if length <= 0:
        raise InputError(f"signal of length {sig.length} is shorter than the formula horizon")
    return _eval(spec, sig, length)


def _eval(spec: SpecNode, sig: IntervalSignal, length: int) -> Trace:
    if isinstance(spec, Atomic):
        lo, hi = sig.bounds(spec.name)
        steps = np.arange(length)
        return Trace(lo[:length].copy(), hi[:length].copy(), steps, steps.copy())
    if isinstance(spec, Not):
        c = _eval(spec.child, sig, length)
        return Trace(-c.hi, -c.lo, c.t_hi, c.t_lo)
    if isinstance(spec, (And, Or)):
        traces = [_eval(c, sig, length) for c in spec.children]
        return _combine(traces, length, isinstance(spec, And))
    if isinstance(spec, (Globally, Eventually)):
        a, b = to_steps(spec.lo, sig.dt), to_steps(spec.hi, sig.dt)
        c = _eval(spec.child, sig, length + b)
        return _window_op(c, a, b, length, isinstance(spec, Globally))
    if isinstance(spec, Until):
        a, b = to_steps(spec.lo, sig.dt), to_steps(spec.hi, sig.dt)
        left = _eval(spec.left, sig, length + b)
        right = _eval(spec.right, sig, length + b)
        lo = np.empty(length)
        hi = np.empty(length)
        tl = np.empty(length, dtype=int)
        th = np.empty(length, dtype=int)
        for t in range(length):
            lo[t], tl[t] = _until_bound(left.lo, left.t_lo, right.lo, right.t_lo, t, a, b)
            hi[t], th[t] = _until_bound(left.hi, left.t_hi, right.hi, right.t_hi, t, a, b)
        return Trace(lo, hi, tl, th)
    raise InputError(f"unknown formula node {type(spec).__name__}")


def evaluate(spec: SpecNode, sig: IntervalSignal, t: int = 0) -> EvalResult:
    """Robustness interval of ``spec`` at step ``t`` with its characteristic steps."""
    tr = evaluate_trace(spec, sig)
    if not 0 <= t < len(tr):
        raise InputError(f"evaluation step {t} leaves the signal (valid 0..{len(tr) - 1})")
    return EvalResult(Interval(tr.lo[t], tr.hi[t]), int(tr.t_lo[t]), int(tr.t_hi[t]))
