"""Closed real intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from pacstl.errors import InputError


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with ``lo <= hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InputError("interval bounds must not be NaN")
        if lo > hi:
            raise InputError(f"interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo - other.hi, self.hi - other.lo)
        return Interval(self.lo - other, self.hi - other)

    def __mul__(self, k) -> "Interval":
        if isinstance(k, Interval):
            prods = (self.lo * k.lo, self.lo * k.hi, self.hi * k.lo, self.hi * k.hi)
            return Interval(min(prods), max(prods))
        k = float(k)
        return Interval(self.lo * k, self.hi * k) if k >= 0 else Interval(self.hi * k, self.lo * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> "Interval":
        return self * (1.0 / float(k))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def widen(self, pad: float) -> "Interval":
        return Interval(self.lo - pad, self.hi + pad)

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo:.6g}, {self.hi:.6g}]"


def imin(*intervals: Interval) -> Interval:
    """Inclusion function of ``min``: componentwise minimum of the bounds."""
    if len(intervals) == 1 and not isinstance(intervals[0], Interval):
        intervals = tuple(intervals[0])
    return Interval(min(i.lo for i in intervals), min(i.hi for i in intervals))


def imax(*intervals: Interval) -> Interval:
    """Inclusion function of ``max``."""
    if len(intervals) == 1 and not isinstance(intervals[0], Interval):
        intervals = tuple(intervals[0])
    return Interval(max(i.lo for i in intervals), max(i.hi for i in intervals))


def hull(values: Iterable[float]) -> Interval:
    vals = list(values)
    if not vals:
        raise InputError("hull of an empty collection")
    return Interval(min(vals), max(vals))
