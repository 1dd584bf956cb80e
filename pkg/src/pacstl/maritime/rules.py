"""Encounter specifications, atomic signals and the monitoring step."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from pacstl.errors import ConfigError, InputError
from pacstl.geomsets import Interval
from pacstl.istl import And, Atomic, Globally, IntervalSignal, Not, PacRobustness, attach_guarantee, evaluate
from pacstl.robustness import (
    EgoState,
    OrientationHalfplane,
    PositionHalfplane,
    RuleParams,
    TimeHorizon,
    atomic_bounds,
)

ENCOUNTERS = ("head_on", "crossing")
TIME_HORIZON = "time_horizon"


@dataclass(frozen=True)
class EncounterParams:
    """Sector thresholds in radians relative to the ego heading, persistence window in seconds."""

    pos_lo: float
    pos_hi: float
    ori_lo: float
    ori_hi: float
    t_start: float = 1.0
    t_end: float = 2.5
    rule: RuleParams = field(default_factory=RuleParams)

    def __post_init__(self):
        if not 0 < self.t_start <= self.t_end:
            raise InputError("window needs 0 < t_start <= t_end")
        for v in (self.pos_lo, self.pos_hi, self.ori_lo, self.ori_hi):
            if not -math.pi < v <= math.pi:
                raise InputError("sector thresholds must lie in (-pi, pi]")

    @classmethod
    def head_on(cls, rule: RuleParams | None = None, **kw) -> "EncounterParams":
        return cls(math.radians(10.0), math.radians(-10.0), math.radians(170.0), math.radians(-170.0),
                   rule=rule or RuleParams(), **kw)

    @classmethod
    def crossing(cls, rule: RuleParams | None = None, **kw) -> "EncounterParams":
        return cls(math.radians(-10.0), math.radians(-112.5), math.radians(170.0), math.radians(10.0),
                   rule=rule or RuleParams(), **kw)

    @classmethod
    def default(cls, kind: str, rule: RuleParams | None = None, **kw) -> "EncounterParams":
        if kind not in ENCOUNTERS:
            raise InputError(f"unknown encounter {kind!r}; expected one of {ENCOUNTERS}")
        return getattr(cls, kind)(rule, **kw)


def encounter_atomics(kind: str, params: EncounterParams) -> dict:
    """Atomic name to kind; the time-horizon atomic is shared between encounters."""
    return {
        f"{kind}.pos_lo": PositionHalfplane(params.pos_lo, -1),
        f"{kind}.pos_hi": PositionHalfplane(params.pos_hi, 1),
        f"{kind}.ori_lo": OrientationHalfplane(params.ori_lo, 1),
        f"{kind}.ori_hi": OrientationHalfplane(params.ori_hi, -1),
        TIME_HORIZON: TimeHorizon(),
    }


def encounter_formula(kind: str):
    in_pos = And((Atomic(f"{kind}.pos_lo"), Atomic(f"{kind}.pos_hi")))
    in_ori = And((Atomic(f"{kind}.ori_lo"), Atomic(f"{kind}.ori_hi")))
    return And((in_pos, in_ori, Atomic(TIME_HORIZON)))


def build_encounter_spec(kind: str, params: EncounterParams):
    """``not enc and G[t_start, t_end] enc`` for the chosen encounter."""
    if kind not in ENCOUNTERS:
        raise InputError(f"unknown encounter {kind!r}; expected one of {ENCOUNTERS}")
    enc = encounter_formula(kind)
    return And((Not(enc), Globally(params.t_start, params.t_end, enc)))


def predict_ego(ego: EgoState, steps: int, dt: float) -> list:
    """Constant speed and heading over ``0 .. steps``."""
    return [EgoState(ego.p + ego.v * (k * dt), ego.psi, ego.v, ego.vel) for k in range(steps + 1)]


def atomic_signals(ego_pred, tube, atomics: dict, rule: RuleParams) -> IntervalSignal:
    """Interval robustness of each atomic at every tube step."""
    if len(ego_pred) != len(tube):
        raise InputError(f"ego prediction has {len(ego_pred)} states, tube has {len(tube)} sets")
    lo = {name: np.empty(len(tube)) for name in atomics}
    hi = {name: np.empty(len(tube)) for name in atomics}
    for i, (ego, s) in enumerate(zip(ego_pred, tube.sets)):
        for name, kind in atomics.items():
            iv = atomic_bounds(kind, ego, s, rule)
            lo[name][i], hi[name][i] = iv.lo, iv.hi
    return IntervalSignal.from_arrays(lo, hi, tube.dt)


def tube_frame_transform(pose, origin=(0.0, 0.0, 0.0)):
    """Affine map ``(R, t)`` on reduced states taking the tube origin pose onto ``pose``.

    Positions rotate about the tube origin and translate, headings shift and
    planar velocities rotate; speed is unchanged.
    """
    x, y, psi = (float(v) for v in pose)
    ox, oy, opsi = (float(v) for v in origin)
    dpsi = psi - opsi
    c, s = math.cos(dpsi), math.sin(dpsi)
    R2 = np.array([[c, -s], [s, c]])
    R = np.eye(6)
    R[np.ix_([0, 1], [0, 1])] = R2
    R[np.ix_([3, 4], [3, 4])] = R2
    t = np.zeros(6)
    t[:2] = np.array([x, y]) - R2 @ np.array([ox, oy])
    t[2] = dpsi
    return R, t


class TubeBank:
    """Tubes keyed by the surge-speed bucket of their initial states."""

    def __init__(self, tubes, origin=(0.0, 0.0, 0.0)):
        self.tubes = list(tubes)
        if not self.tubes:
            raise ConfigError("tube bank is empty")
        for tb in self.tubes:
            if tb.velocity_bucket is None:
                raise ConfigError("every tube in a bank needs a velocity bucket")
        self.origin = tuple(origin)

    def select(self, u: float) -> int:
        for i, tb in enumerate(self.tubes):
            if u in tb.velocity_bucket:
                return i
        dists = [min(abs(u - tb.velocity_bucket.lo), abs(u - tb.velocity_bucket.hi)) for tb in self.tubes]
        i = int(np.argmin(dists))
        warnings.warn(f"surge speed {u:.3f} outside every bucket; using {self.tubes[i].velocity_bucket}",
                      RuntimeWarning, stacklevel=2)
        return i


@dataclass(frozen=True)
class MonitorOutput:
    results: dict
    trigger: bool
    triggered_spec: list
    bucket: int
    timestamp: float

    @property
    def triggered(self) -> str | None:
        return self.triggered_spec[0] if self.triggered_spec else None


class EncounterMonitor:
    """Evaluates the persistent encounter specifications against a tube bank."""

    def __init__(self, bank: TubeBank, params: dict | None = None, mode: str = "timepoint"):
        self.bank = bank
        self.params = params or {k: EncounterParams.default(k) for k in ENCOUNTERS}
        self.mode = mode
        self.specs = {k: build_encounter_spec(k, p) for k, p in self.params.items()}

    def evaluate(self, ego: EgoState, other_pose, other_u: float, timestamp: float = 0.0) -> MonitorOutput:
        idx = self.bank.select(other_u)
        base = self.bank.tubes[idx]
        R, t = tube_frame_transform(other_pose, self.bank.origin)
        tube = base.transported(R, t)
        ego_pred = predict_ego(ego, tube.steps[-1], tube.dt)
        ego_pred = [ego_pred[s] for s in tube.steps]
        results = {}
        for kind, spec in self.specs.items():
            p = self.params[kind]
            sig = atomic_signals(ego_pred, tube, encounter_atomics(kind, p), p.rule)
            res = evaluate(spec, sig, 0)
            results[kind] = attach_guarantee(res, tube, self.mode, offset=tube.steps[0])
        fired = [k for k, r in results.items() if r.hi > 0]
        return MonitorOutput(results, bool(fired), fired, idx, float(timestamp))


def monitor_step(ego: EgoState, other_pose, other_u: float, bank: TubeBank, params: dict | None = None,
                 mode: str = "timepoint", timestamp: float = 0.0) -> MonitorOutput:
    return EncounterMonitor(bank, params, mode).evaluate(ego, other_pose, other_u, timestamp)


def evasive_waypoints(ego: EgoState, psi_turn: float = 0.8, t_turn: float = 30.0, t_parallel: float = 15.0,
                      v_des: float = 0.3):
    """Turn waypoint clockwise of the heading, then a leg parallel to the current heading."""
    d_turn = v_des * t_turn
    d_par = v_des * t_parallel
    ang = ego.psi - psi_turn
    wp1 = ego.p + d_turn * np.array([math.cos(ang), math.sin(ang)])
    wp2 = wp1 + d_par * np.array([math.cos(ego.psi), math.sin(ego.psi)])
    return wp1, wp2

