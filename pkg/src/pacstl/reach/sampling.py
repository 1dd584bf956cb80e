"""Seeded trajectory sampling from a black-box stepper."""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from pacstl.errors import InputError

log = logging.getLogger(__name__)

TRAIN_STREAM = 0
TEST_STREAM = 1
MAX_ATTEMPTS = 50


class Stepper(Protocol):
    state_dim: int

    def step(self, states, inputs, disturbances, t, dt): ...

    def observe(self, states): ...


def _box(lo, hi, name):
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.shape != hi.shape or lo.ndim != 1:
        raise InputError(f"{name} bounds must be vectors of equal length")
    if np.any(lo > hi):
        raise InputError(f"{name} lower bound exceeds upper bound")
    return lo, hi


@dataclass(frozen=True)
class SampleSpec:
    """Uniform boxes for initial states, constant inputs and piecewise-constant disturbances.

    ``resample_period`` counts output steps between disturbance redraws.
    """

    x0_lo: np.ndarray
    x0_hi: np.ndarray
    u_lo: np.ndarray = field(default_factory=lambda: np.zeros(0))
    u_hi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    d_lo: np.ndarray = field(default_factory=lambda: np.zeros(0))
    d_hi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    resample_period: int = 2
    N: int = 1500
    M: int = 1500
    seed: int = 0
    dt: float = 0.5
    horizon: int = 5
    t0: float = 0.0

    def __post_init__(self):
        for a, b in (("x0_lo", "x0_hi"), ("u_lo", "u_hi"), ("d_lo", "d_hi")):
            lo, hi = _box(getattr(self, a), getattr(self, b), a[:-3])
            object.__setattr__(self, a, lo)
            object.__setattr__(self, b, hi)
        if self.N < 1 or self.M < 1:
            raise InputError("N and M must be at least 1")
        if self.resample_period < 1 or self.horizon < 0 or self.dt <= 0:
            raise InputError("resample_period >= 1, horizon >= 0 and dt > 0 required")

    @property
    def n_segments(self) -> int:
        return max(1, -(-self.horizon // self.resample_period))


def _draw(spec: SampleSpec, seed: int, stream: int, index: int, attempt: int):
    rng = np.random.default_rng(np.random.SeedSequence([seed, stream, index, attempt]))
    x0 = rng.uniform(spec.x0_lo, spec.x0_hi)
    u = rng.uniform(spec.u_lo, spec.u_hi)
    d = rng.uniform(spec.d_lo, spec.d_hi, size=(spec.n_segments, spec.d_lo.size))
    return x0, u, d


def _simulate(sim: Stepper, spec: SampleSpec, x0, u, d) -> np.ndarray:
    B = x0.shape[0]
    states = x0
    obs = [sim.observe(states)]
    for k in range(spec.horizon):
        dist = d[:, k // spec.resample_period]
        with np.errstate(all="ignore"):
            states = sim.step(states, u, dist, spec.t0 + k * spec.dt, spec.dt)
        obs.append(sim.observe(states))
    out = np.stack(obs, axis=1)
    return out.reshape(B, spec.horizon + 1, -1)


def sample_trajectories(sim: Stepper, spec: SampleSpec, count: int, seed: int | None = None,
                        stream: int = TRAIN_STREAM, batch: int = 500) -> np.ndarray:
    """Simulate ``count`` trajectories; returns observations of shape ``(count, horizon + 1, n)``.

    Every sample ``i`` draws from its own generator keyed by
    ``(seed, stream, i, attempt)``, so results do not depend on batching.
    Samples with non-finite states are redrawn with the next attempt index.
    """
    seed = spec.seed if seed is None else seed
    if count < 0:
        raise InputError("count must be non-negative")
    if count == 0:
        n_obs = np.asarray(sim.observe(np.asarray(spec.x0_lo)[None, :])).shape[-1]
        return np.empty((0, spec.horizon + 1, n_obs))
    chunks = []
    rejects = 0
    for start in range(0, count, batch):
        idx = np.arange(start, min(count, start + batch))
        attempts = np.zeros(idx.size, dtype=int)
        result = None
        todo = np.arange(idx.size)
        while todo.size:
            draws = [_draw(spec, seed, stream, int(idx[j]), int(attempts[j])) for j in todo]
            x0 = np.stack([a for a, _, _ in draws])
            u = np.stack([b for _, b, _ in draws])
            d = np.stack([c for _, _, c in draws])
            traj = _simulate(sim, spec, x0, u, d)
            if result is None:
                result = np.empty((idx.size,) + traj.shape[1:])
            result[todo] = traj
            bad = ~np.all(np.isfinite(traj.reshape(traj.shape[0], -1)), axis=1)
            rejects += int(bad.sum())
            todo = todo[bad]
            attempts[todo] += 1
            if np.any(attempts > MAX_ATTEMPTS):
                raise InputError("simulator diverged on every redraw of a sample")
        chunks.append(result)
    if rejects:
        log.info("sampling: %d rejected draws", rejects)
        if rejects > 0.01 * count:
            warnings.warn(f"{rejects} of {count} samples diverged and were redrawn", RuntimeWarning, stacklevel=2)
    return np.concatenate(chunks, axis=0)
