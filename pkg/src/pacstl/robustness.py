"""Bounds of maritime atomic robustness over a convex set of other-vessel states.

The other vessel's reduced state is ``(p_x, p_y, psi, v_x, v_y, vel)`` with
world-frame velocity; :data:`POS`, :data:`PSI` and :data:`VEL` index into it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pacstl.angles import normalize_angle
from pacstl.errors import InputError
from pacstl.geomsets import Interval, norm_range

POS = (0, 1)
PSI = 2
VEL = (3, 4)
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class EgoState:
    p: np.ndarray
    psi: float
    v: np.ndarray
    vel: float

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(2))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float).reshape(2))
        object.__setattr__(self, "psi", float(normalize_angle(self.psi)))

    @classmethod
    def from_velocity(cls, p, psi, v) -> "EgoState":
        v = np.asarray(v, dtype=float)
        return cls(p, psi, v, float(np.linalg.norm(v)))

    @classmethod
    def from_reduced(cls, delta) -> "EgoState":
        d = np.asarray(delta, dtype=float)
        return cls(d[:2], d[2], d[3:5], float(np.hypot(d[3], d[4])))


@dataclass(frozen=True)
class RuleParams:
    v_max: float = 0.4
    a_max: float = 0.15
    r_max: float = 0.8
    t_h: float = 10.0

    def __post_init__(self):
        if min(self.v_max, self.a_max, self.r_max, self.t_h) <= 0:
            raise InputError("rule parameters must be positive")


@dataclass(frozen=True)
class PositionHalfplane:
    gamma: float
    sigma: int


@dataclass(frozen=True)
class TimeHorizon:
    pass


@dataclass(frozen=True)
class OrientationHalfplane:
    gamma: float
    sigma: int


AtomicKind = PositionHalfplane | TimeHorizon | OrientationHalfplane


def _check_sigma(sigma):
    if sigma not in (1, -1):
        raise InputError(f"sigma must be +1 or -1, got {sigma}")


def position_halfplane_params(ego: EgoState, gamma: float, sigma: int, v_max: float):
    """``(a, b)`` with ``h(p) = a^T p - b`` for the halfplane through the ego position."""
    _check_sigma(sigma)
    ang = ego.psi + gamma
    a = (sigma / v_max) * np.array([-math.sin(ang), math.cos(ang)])
    return a, float(a @ ego.p)


def linear_bounds(a, b: float, pset) -> Interval:
    """Exact ``[min, max]`` of ``a^T x - b`` over the set, via support functions."""
    a = np.asarray(a, dtype=float)
    return Interval(-pset.support(-a) - b, pset.support(a) - b)


def _embed(a2: np.ndarray, n: int) -> np.ndarray:
    a = np.zeros(n)
    a[list(POS)] = a2
    return a


def time_horizon_bounds(ego: EgoState, pset, params: RuleParams) -> Interval:
    """Enclosure of ``(||v_E - v_O|| - ||p_E - p_O|| / t_h) / a_max`` over the set.

    Positive values flag a collision risk within ``t_h``. The lower bound pairs
    the largest distance with the smallest relative speed, the upper bound the
    smallest distance with the largest relative speed.
    """
    D = norm_range(pset.project_plane(POS), ego.p)
    S = norm_range(pset.project_plane(VEL), ego.v)
    return Interval((S.lo - D.hi / params.t_h) / params.a_max, (S.hi - D.lo / params.t_h) / params.a_max)


def _fold(delta):
    """Triangle wave ``g(d) = arcsin(sin d)``: identity on ``[-pi/2, pi/2]``, reflected beyond."""
    d = normalize_angle(delta)
    return np.where(np.abs(d) <= HALF_PI, d, np.sign(d) * (math.pi - np.abs(d)))


def orientation_endpoint_cases(psi_int: Interval, psi_e: float, gamma: float, sigma: int, r_max: float) -> Interval:
    """Case-wise endpoint evaluation with clip flags, without interior turning points."""
    _check_sigma(sigma)
    g_rel = normalize_angle(psi_e + gamma)
    temp = []
    for psi in (psi_int.lo, psi_int.hi):
        d = normalize_angle(psi - g_rel)
        sgn = -sigma if d < 0 else sigma
        clip = False
        if abs(d) > HALF_PI:
            clip = True
            d = math.pi - abs(d)
        temp.append((sgn, sgn * abs(d), clip))
    (s_lo, v_lo, c_lo), (s_hi, v_hi, c_hi) = temp
    if (c_lo != c_hi) and s_lo == s_hi:
        if s_lo == 1:
            lo, hi = min(v_lo, v_hi), HALF_PI
        else:
            lo, hi = -HALF_PI, max(v_lo, v_hi)
    else:
        lo, hi = min(v_lo, v_hi), max(v_lo, v_hi)
    return Interval(lo / r_max, hi / r_max)


def _fold_range(d0: float, width: float) -> tuple[float, float]:
    """Exact range of the triangle wave over the unwrapped arc ``[d0, d0 + width]``."""
    a, b = d0, d0 + width
    vals = [float(_fold(a)), float(_fold(b))]
    lo, hi = min(vals), max(vals)
    k = math.ceil((a - HALF_PI) / (2 * math.pi))
    if HALF_PI + 2 * math.pi * k <= b:
        hi = HALF_PI
    k = math.ceil((a + HALF_PI) / (2 * math.pi))
    if -HALF_PI + 2 * math.pi * k <= b:
        lo = -HALF_PI
    return lo, hi


def orientation_halfplane_bounds(psi_int: Interval, psi_e: float, gamma: float, sigma: int,
                                 r_max: float) -> Interval:
    """Bounds of ``sigma g(psi_O - psi_E - gamma) / r_max`` for ``psi_O`` in ``psi_int``.

    Starts from the endpoint case analysis and widens it to the exact range of the
    triangle wave over the arc, so the bounds enclose every orientation even
    when the arc passes a turning point that the endpoint cases miss.
    """
    width = psi_int.width
    if width > math.pi + 1e-12:
        raise InputError(f"orientation interval of width {width:.4f} exceeds pi")
    base = orientation_endpoint_cases(psi_int, psi_e, gamma, sigma, r_max)
    g_rel = normalize_angle(psi_e + gamma)
    lo, hi = _fold_range(float(normalize_angle(psi_int.lo - g_rel)), width)
    if sigma == -1:
        lo, hi = -hi, -lo
    return base.hull(Interval(lo / r_max, hi / r_max))


def atomic_bounds(kind, ego: EgoState, pset, params: RuleParams) -> Interval:
    if isinstance(kind, PositionHalfplane):
        a2, b = position_halfplane_params(ego, kind.gamma, kind.sigma, params.v_max)
        return linear_bounds(_embed(a2, pset.dim), b, pset)
    if isinstance(kind, TimeHorizon):
        return time_horizon_bounds(ego, pset, params)
    if isinstance(kind, OrientationHalfplane):
        return orientation_halfplane_bounds(pset.project_coord(PSI), ego.psi, kind.gamma, kind.sigma, params.r_max)
    raise InputError(f"unknown atomic kind {kind!r}")


def atomic_value(kind, ego: EgoState, delta, params: RuleParams):
    """Scalar robustness for one or many other-vessel reduced states (last axis of size 6)."""
    d = np.asarray(delta, dtype=float)
    if isinstance(kind, PositionHalfplane):
        a, b = position_halfplane_params(ego, kind.gamma, kind.sigma, params.v_max)
        return d[..., 0] * a[0] + d[..., 1] * a[1] - b
    if isinstance(kind, TimeHorizon):
        dist = np.hypot(ego.p[0] - d[..., 0], ego.p[1] - d[..., 1])
        speed = np.hypot(ego.v[0] - d[..., 3], ego.v[1] - d[..., 4])
        return (speed - dist / params.t_h) / params.a_max
    if isinstance(kind, OrientationHalfplane):
        _check_sigma(kind.sigma)
        g_rel = normalize_angle(ego.psi + kind.gamma)
        return kind.sigma * _fold(d[..., PSI] - g_rel) / params.r_max
    raise InputError(f"unknown atomic kind {kind!r}")
