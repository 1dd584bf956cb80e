"""Lookahead line-of-sight guidance with proportional surge and heading control."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from pacstl.angles import normalize_angle
from pacstl.errors import InputError


@dataclass(frozen=True)
class LOSGains:
    """Guidance and control constants.

    Surge force is ``d_u v_des + k_u (v_des - u)`` and yaw moment
    ``k_psi e_psi - k_r r``; both are clamped to their boxes.
    """

    lookahead: float = 2.0
    accept_radius: float = 0.5
    k_u: float = 20.0
    d_u: float = 6.0
    k_psi: float = 1.0
    k_r: float = 2.0
    surge_max: float = 3.0
    surge_min: float = -1.0
    yaw_max: float = 0.5

    def __post_init__(self):
        if self.lookahead <= 0 or self.accept_radius <= 0:
            raise InputError("lookahead and acceptance radius must be positive")
        if self.surge_min > self.surge_max or self.yaw_max < 0:
            raise InputError("invalid command box")

    @classmethod
    def for_vessel(cls, kind: str) -> "LOSGains":
        """Gains tuned once per vessel type ("S" or "L")."""
        if kind == "S":
            return cls()
        if kind == "L":
            return cls(lookahead=5.2, k_u=100.0, d_u=30.0, k_psi=20.0, k_r=60.0, surge_max=15.0, surge_min=-5.0,
                       yaw_max=10.0)
        raise InputError(f"unknown vessel type {kind!r}; expected 'S' or 'L'")


def los_heading(pos, prev_wp, wp, lookahead: float) -> float:
    """Desired course toward the lookahead point on the segment ``prev_wp -> wp``."""
    pos, a, b = (np.asarray(z, dtype=float) for z in (pos, prev_wp, wp))
    seg = b - a
    if float(seg @ seg) == 0.0:
        d = b - pos
        return float(math.atan2(d[1], d[0]))
    alpha = math.atan2(seg[1], seg[0])
    rel = pos - a
    cross_track = -math.sin(alpha) * rel[0] + math.cos(alpha) * rel[1]
    return float(normalize_angle(alpha + math.atan2(-cross_track, lookahead)))


def los_command(state, prev_wp, wp, v_des: float, gains: LOSGains) -> np.ndarray:
    """Generalized force ``tau`` steering a full state toward ``wp`` along the path from ``prev_wp``.

    With no active waypoint (``wp is None``) returns zero force.
    """
    tau = np.zeros(6)
    if wp is None:
        return tau
    s = np.asarray(state, dtype=float)
    psi_d = los_heading(s[:2], prev_wp, wp, gains.lookahead)
    e_psi = float(normalize_angle(psi_d - s[5]))
    u, r = s[6], s[11]
    tau[0] = np.clip(gains.d_u * v_des + gains.k_u * (v_des - u), gains.surge_min, gains.surge_max)
    tau[5] = np.clip(gains.k_psi * e_psi - gains.k_r * r, -gains.yaw_max, gains.yaw_max)
    return tau


@dataclass
class WaypointTracker:
    """Mutable waypoint queue; switches to the next waypoint inside the acceptance radius."""

    waypoints: list
    prev: np.ndarray
    gains: LOSGains = field(default_factory=LOSGains)

    def __post_init__(self):
        self.waypoints = [np.asarray(w, dtype=float) for w in self.waypoints]
        self.prev = np.asarray(self.prev, dtype=float)

    @property
    def active(self):
        return self.waypoints[0] if self.waypoints else None

    def update(self, pos) -> bool:
        """Drop reached waypoints; returns True if any waypoint was passed."""
        passed = False
        pos = np.asarray(pos, dtype=float)
        while self.waypoints and np.linalg.norm(self.waypoints[0] - pos) <= self.gains.accept_radius:
            self.prev = self.waypoints.pop(0)
            passed = True
        return passed

    def insert_front(self, points, pos) -> None:
        self.waypoints = [np.asarray(p, dtype=float) for p in points] + self.waypoints
        self.prev = np.asarray(pos, dtype=float)

    def command(self, state, v_des: float) -> np.ndarray:
        self.update(np.asarray(state)[:2])
        return los_command(state, self.prev, self.active, v_des, self.gains)
