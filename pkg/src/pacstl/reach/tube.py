"""Reachable tubes: per-step convex sets with holdout accuracies."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from pacstl.errors import InputError
from pacstl.geomsets import Interval, set_from_dict
from pacstl.reach.fitting import expand_corners, fit_mvee, fit_zonotope_template, refine_zonotope
from pacstl.reach.pac import binomial_tail_inversion
from pacstl.reach.sampling import TEST_STREAM, TRAIN_STREAM, SampleSpec, sample_trajectories

log = logging.getLogger(__name__)

REPS = ("ellipsoid", "zonotope")


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray
    dt: float

    def __post_init__(self):
        s = np.asarray(self.states, dtype=float)
        if s.ndim != 2:
            raise InputError("trajectory states must be a (T+1, n) array")
        if self.dt <= 0:
            raise InputError("dt must be positive")
        object.__setattr__(self, "states", s)


@dataclass(frozen=True)
class Corners:
    """Hull rectangle used to expand planar positions; indices refer to the observed state."""

    half_len: float
    half_wid: float
    xy: tuple = (0, 1)
    heading: int = 2


@dataclass
class ReachTube:
    """Convex sets at ``steps`` (indices on the ``dt`` grid) plus PAC accuracies.

    ``eps_t[i]`` belongs to ``sets[i]``; ``eps_tube`` bounds the probability
    that a trajectory leaves any set.
    """

    sets: list
    dt: float
    eps_tube: float
    eps_t: list
    beta: float
    steps: list = field(default_factory=list)
    velocity_bucket: Interval | None = None
    corners: Corners | None = None
    k_tube: int = 0
    k_t: list = field(default_factory=list)
    n_train: int = 0
    n_test: int = 0

    def __post_init__(self):
        if not self.steps:
            self.steps = list(range(len(self.sets)))
        if len(self.eps_t) != len(self.sets) or len(self.steps) != len(self.sets):
            raise InputError("eps_t, steps and sets must have equal length")
        for e in [self.eps_tube, *self.eps_t]:
            if not 0.0 <= e <= 1.0:
                raise InputError(f"accuracy {e} outside [0, 1]")
        if not 0.0 < self.beta < 1.0:
            raise InputError("beta must lie in (0, 1)")

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def dim(self) -> int:
        return self.sets[0].dim

    def index_of(self, step: int) -> int:
        try:
            return self.steps.index(int(step))
        except ValueError:
            raise InputError(f"tube has no set at step {step}") from None

    def transported(self, R, t) -> "ReachTube":
        """Tube with every set mapped through ``x -> R x + t``; accuracies are unchanged."""
        return ReachTube(
            sets=[s.affine_transport(R, t) for s in self.sets], dt=self.dt, eps_tube=self.eps_tube,
            eps_t=list(self.eps_t), beta=self.beta, steps=list(self.steps),
            velocity_bucket=self.velocity_bucket, corners=self.corners, k_tube=self.k_tube,
            k_t=list(self.k_t), n_train=self.n_train, n_test=self.n_test,
        )

    def to_dict(self) -> dict:
        vb = self.velocity_bucket
        return {
            "dt": self.dt, "beta": self.beta, "eps_tube": self.eps_tube, "eps_t": list(self.eps_t),
            "steps": list(self.steps), "sets": [s.to_dict() for s in self.sets],
            "velocity_bucket": None if vb is None else [vb.lo, vb.hi],
            "corners": None if self.corners is None else {
                "half_len": self.corners.half_len, "half_wid": self.corners.half_wid,
                "xy": list(self.corners.xy), "heading": self.corners.heading},
            "k_tube": self.k_tube, "k_t": list(self.k_t), "n_train": self.n_train, "n_test": self.n_test,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReachTube":
        try:
            vb = d.get("velocity_bucket")
            cn = d.get("corners")
            return cls(
                sets=[set_from_dict(s) for s in d["sets"]], dt=float(d["dt"]), eps_tube=float(d["eps_tube"]),
                eps_t=[float(e) for e in d["eps_t"]], beta=float(d["beta"]), steps=[int(s) for s in d.get("steps", [])],
                velocity_bucket=None if vb is None else Interval(*vb),
                corners=None if cn is None else Corners(cn["half_len"], cn["half_wid"], tuple(cn["xy"]), cn["heading"]),
                k_tube=int(d.get("k_tube", 0)), k_t=[int(k) for k in d.get("k_t", [])],
                n_train=int(d.get("n_train", 0)), n_test=int(d.get("n_test", 0)),
            )
        except KeyError as exc:
            raise InputError(f"tube file lacks field {exc}") from None

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "ReachTube":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _as_batch(trajectories) -> np.ndarray:
    if isinstance(trajectories, (list, tuple)) and trajectories and isinstance(trajectories[0], Trajectory):
        trajectories = np.stack([t.states for t in trajectories])
    X = np.asarray(trajectories, dtype=float)
    if X.ndim != 3:
        raise InputError(f"trajectories must have shape (count, T+1, n), got {X.shape}")
    return X


def _cloud(X: np.ndarray, step: int, corners: Corners | None) -> np.ndarray:
    pts = X[:, step, :]
    if corners is None:
        return pts
    return expand_corners(pts, corners.half_len, corners.half_wid, corners.xy, corners.heading)


def step_membership(tube: ReachTube, trajectories) -> np.ndarray:
    """Boolean ``(count, len(tube))``: trajectory inside the set at each tube step (all corners if expanded)."""
    X = _as_batch(trajectories)
    if X.shape[1] <= max(tube.steps):
        raise InputError(f"trajectories have {X.shape[1]} samples, tube needs step {max(tube.steps)}")
    if X.shape[2] != tube.dim:
        raise InputError(f"state dimension {X.shape[2]} does not match tube dimension {tube.dim}")
    inside = np.empty((X.shape[0], len(tube)), dtype=bool)
    for i, (step, s) in enumerate(zip(tube.steps, tube.sets)):
        pts = _cloud(X, step, tube.corners)
        ok = s.contains(pts)
        if tube.corners is not None:
            ok = ok.reshape(X.shape[0], 4).all(axis=1)
        inside[:, i] = ok
    return inside


def count_violations(tube: ReachTube, trajectories) -> tuple[int, list]:
    """``(k_tube, k_t)``: trajectories outside at some step, and outside per step."""
    inside = step_membership(tube, trajectories)
    return int((~inside.all(axis=1)).sum()), [int(k) for k in (~inside).sum(axis=0)]


def fit_sets(X: np.ndarray, steps, rep: str = "ellipsoid", G0=None, corners: Corners | None = None,
             refine_iters: int = 0, tol: float = 1e-6) -> list:
    """Fit one set per step on the (optionally corner-expanded) training cloud."""
    if rep not in REPS:
        raise InputError(f"unknown representation {rep!r}; expected one of {REPS}")
    sets = []
    for step in steps:
        pts = _cloud(X, step, corners)
        if rep == "ellipsoid":
            sets.append(fit_mvee(pts, tol=tol))
        else:
            z = fit_zonotope_template(pts, G0=G0)
            if refine_iters:
                z = refine_zonotope(z, pts, iters=refine_iters)
            sets.append(z)
    return sets


def calibrate(sets: list, steps, X_test: np.ndarray, dt: float, beta: float, **meta) -> ReachTube:
    """Attach holdout accuracies to fitted sets."""
    M = X_test.shape[0]
    draft = ReachTube(sets=sets, dt=dt, eps_tube=1.0, eps_t=[1.0] * len(sets), beta=beta, steps=list(steps),
                      corners=meta.get("corners"))
    k_tube, k_t = count_violations(draft, X_test)
    return ReachTube(
        sets=sets, dt=dt, beta=beta, steps=list(steps),
        eps_tube=binomial_tail_inversion(k_tube, M, beta),
        eps_t=[binomial_tail_inversion(k, M, beta) for k in k_t],
        k_tube=k_tube, k_t=k_t, n_test=M, **meta,
    )


def build_tube(sim, spec: SampleSpec, rep: str = "ellipsoid", G0=None, corners: Corners | None = None,
               beta: float = 1e-9, steps=None, velocity_bucket: Interval | None = None,
               refine_iters: int = 0) -> ReachTube:
    """Sample ``N`` training and ``M`` holdout trajectories, fit per-step sets, compute accuracies.

    ``steps`` defaults to every grid step ``0..horizon``.
    """
    steps = list(range(spec.horizon + 1)) if steps is None else [int(s) for s in steps]
    X_train = sample_trajectories(sim, spec, spec.N, stream=TRAIN_STREAM)
    X_test = sample_trajectories(sim, spec, spec.M, stream=TEST_STREAM)
    sets = fit_sets(X_train, steps, rep, G0, corners, refine_iters)
    tube = calibrate(sets, steps, X_test, spec.dt, beta, corners=corners, velocity_bucket=velocity_bucket,
                     n_train=spec.N)
    k_train, _ = count_violations(tube, X_train)
    if k_train:
        raise AssertionError(f"{k_train} training trajectories escaped the fitted tube")
    log.info("tube %s: eps_tube=%.4f eps_t=%s", rep, tube.eps_tube, np.round(tube.eps_t, 4).tolist())
    return tube


class ReachTubeEstimator(BaseEstimator):
    """Scikit-learn style wrapper: ``fit`` on training trajectories, ``calibrate`` on holdout.

    Parameters
    ----------
    rep : {"ellipsoid", "zonotope"}
    G0 : array, optional
        Zonotope template; identity when omitted.
    beta : float
        Confidence parameter of the holdout bound.
    steps : sequence of int, optional
        Grid steps receiving a set; all steps when omitted.
    corners : Corners, optional
        Hull rectangle for corner expansion.
    refine_iters : int
        Full-generator refinement iterations for zonotopes (0 disables).
    dt : float
        Grid spacing stored on the tube.
    """

    def __init__(self, rep="ellipsoid", G0=None, beta=1e-9, steps=None, corners=None, refine_iters=0, dt=1.0):
        self.rep = rep
        self.G0 = G0
        self.beta = beta
        self.steps = steps
        self.corners = corners
        self.refine_iters = refine_iters
        self.dt = dt

    def fit(self, X, y=None):
        X = _as_batch(X)
        self.steps_ = list(range(X.shape[1])) if self.steps is None else [int(s) for s in self.steps]
        self.sets_ = fit_sets(X, self.steps_, self.rep, self.G0, self.corners, self.refine_iters)
        self.n_features_in_ = X.shape[2]
        self.n_train_ = X.shape[0]
        return self

    def calibrate(self, X_test):
        check_is_fitted(self, "sets_")
        X_test = _as_batch(X_test)
        self.tube_ = calibrate(self.sets_, self.steps_, X_test, self.dt, self.beta, corners=self.corners,
                               n_train=self.n_train_)
        self.eps_tube_ = self.tube_.eps_tube
        self.eps_t_ = list(self.tube_.eps_t)
        return self

    def predict(self, X):
        """True where the trajectory stays inside every set."""
        check_is_fitted(self, "sets_")
        draft = ReachTube(self.sets_, self.dt, 1.0, [1.0] * len(self.sets_), self.beta, list(self.steps_),
                          corners=self.corners)
        return step_membership(draft, X).all(axis=1)

    def score(self, X, y=None):
        return float(np.mean(self.predict(X)))
