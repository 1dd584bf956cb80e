"""Direct scenario bounds on robustness values, for comparison with tube-based intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pacstl.errors import InputError
from pacstl.istl import evaluate, point_robustness
from pacstl.maritime.rules import EncounterParams, atomic_signals, build_encounter_spec, encounter_atomics
from pacstl.maritime.tubes import BUCKETS, bucket_spec
from pacstl.reach import TEST_STREAM, TRAIN_STREAM, binomial_tail_inversion, sample_trajectories
from pacstl.robustness import EgoState, atomic_value
from pacstl.sim import VesselStepper, vessel_params

# per-step ego position bounds along x, steps 0..5; step 0 extends the 0.05 m/step drift backwards
EGO_PX_LO = (4.75, 4.7, 4.65, 4.6, 4.55, 4.5)
EGO_PX_HI = (5.35, 5.3, 5.25, 5.2, 5.15, 5.1)
EGO_REST_LO = (-0.3, math.pi - 0.1, -0.15, -0.05)
EGO_REST_HI = (0.3, math.pi + 0.1, -0.05, 0.05)


def sample_ego_trajectories(n: int = 10, seed: int = 0, steps: int = 5) -> list:
    """Ego predictions drawn uniformly per step from the frozen boxes."""
    if steps + 1 > len(EGO_PX_LO):
        raise InputError(f"ego boxes cover {len(EGO_PX_LO)} steps")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 11]))
    out = []
    for _ in range(n):
        traj = []
        for k in range(steps + 1):
            px = rng.uniform(EGO_PX_LO[k], EGO_PX_HI[k])
            py, psi, vx, vy = rng.uniform(EGO_REST_LO, EGO_REST_HI)
            traj.append(EgoState.from_velocity([px, py], psi, [vx, vy]))
        out.append(traj)
    return out


def point_values(ego_traj, X: np.ndarray, atomics: dict, rule) -> dict:
    """Scalar atomic robustness of each sampled trajectory, arrays of shape ``(count, T)``."""
    if X.shape[1] != len(ego_traj):
        raise InputError(f"trajectories have {X.shape[1]} steps, ego prediction {len(ego_traj)}")
    return {name: np.stack([atomic_value(kind, ego, X[:, k, :], rule) for k, ego in enumerate(ego_traj)], axis=1)
            for name, kind in atomics.items()}


def _violations(train: np.ndarray, test: np.ndarray) -> int:
    """Test samples leaving ``[min, max]`` of training at any step (leading axis is samples)."""
    lo, hi = train.min(axis=0), train.max(axis=0)
    out = (test < lo) | (test > hi)
    return int(out.reshape(out.shape[0], -1).any(axis=1).sum())


@dataclass(frozen=True)
class BaselineRow:
    name: str
    direct: np.ndarray
    pac: np.ndarray
    eps_direct: float
    eps_pac: float

    @property
    def contained(self) -> bool:
        """Direct bounds inside the tube-based bounds at every step."""
        return bool(np.all(self.pac[:, 0] <= self.direct[:, 0]) and np.all(self.direct[:, 1] <= self.pac[:, 1]))

    def to_dict(self) -> dict:
        return {"name": self.name, "direct": self.direct.tolist(), "pac": self.pac.tolist(),
                "eps_direct": self.eps_direct, "eps_pac": self.eps_pac, "contained": self.contained}


def compare(tube, ego_traj, X_train: np.ndarray, X_test: np.ndarray, kind: str = "head_on",
            params: EncounterParams | None = None) -> list:
    """Per-atomic and per-spec direct intervals against tube-based intervals for one ego prediction.

    Atomic rows hold one ``[lo, hi]`` per tube step; the spec row holds one
    interval at step 0. Direct accuracies invert the count of test samples
    outside the training range; tube accuracies are per-step (atomics) and
    time-point (spec).
    """
    params = params or EncounterParams.default(kind)
    atomics = encounter_atomics(kind, params)
    if len(ego_traj) <= max(tube.steps):
        raise InputError(f"ego prediction has {len(ego_traj)} states, tube needs step {max(tube.steps)}")
    ego = [ego_traj[s] for s in tube.steps]
    Xtr, Xte = X_train[:, tube.steps, :], X_test[:, tube.steps, :]
    v_tr = point_values(ego, Xtr, atomics, params.rule)
    v_te = point_values(ego, Xte, atomics, params.rule)
    sig = atomic_signals(ego, tube, atomics, params.rule)
    M = X_test.shape[0]
    rows = []
    for name in atomics:
        pac = np.stack(sig.bounds(name), axis=1)
        direct = np.stack([v_tr[name].min(axis=0), v_tr[name].max(axis=0)], axis=1)
        eps_d = binomial_tail_inversion(_violations(v_tr[name], v_te[name]), M, tube.beta)
        rows.append(BaselineRow(name, direct, pac, eps_d, tube.eps_tube))
    spec = build_encounter_spec(kind, params)
    r_tr = point_robustness(spec, v_tr, tube.dt)
    r_te = point_robustness(spec, v_te, tube.dt)
    res = evaluate(spec, sig, 0)
    i_lo, i_up = tube.index_of(res.t_low + tube.steps[0]), tube.index_of(res.t_up + tube.steps[0])
    rows.append(BaselineRow(
        kind, np.array([[r_tr.min(), r_tr.max()]]), np.array([[res.interval.lo, res.interval.hi]]),
        binomial_tail_inversion(_violations(r_tr, r_te), M, tube.beta), max(tube.eps_t[i_lo], tube.eps_t[i_up]),
    ))
    return rows


def run_baseline(tube, vessel: str, bucket: int, n_ego: int = 10, seed: int = 0, N: int = 1500, M: int = 1500,
                 kind: str = "head_on") -> dict:
    """Regenerate the tube's own training and holdout samples and compare for ``n_ego`` ego predictions.

    ``seed``, ``N`` and ``M`` must match the values the tube was built with so
    that both paths share their samples.
    """
    spec = bucket_spec(bucket, N, M, seed + 1000 * bucket, tube.dt, max(tube.steps), BUCKETS)
    sim = VesselStepper(vessel_params(vessel))
    X_train = sample_trajectories(sim, spec, N, stream=TRAIN_STREAM)
    X_test = sample_trajectories(sim, spec, M, stream=TEST_STREAM)
    egos = sample_ego_trajectories(n_ego, seed, max(tube.steps))
    per_ego = [compare(tube, e, X_train, X_test, kind) for e in egos]
    names = [r.name for r in per_ego[0]]
    summary = {}
    for j, name in enumerate(names):
        rows = [rs[j] for rs in per_ego]
        summary[name] = {
            "all_contained": all(r.contained for r in rows),
            "mean_eps_direct": float(np.mean([r.eps_direct for r in rows])),
            "mean_eps_pac": float(np.mean([r.eps_pac for r in rows])),
            "mean_gap_lo": float(np.mean([np.mean(r.direct[:, 0] - r.pac[:, 0]) for r in rows])),
            "mean_gap_hi": float(np.mean([np.mean(r.pac[:, 1] - r.direct[:, 1]) for r in rows])),
        }
    return {"vessel": vessel, "bucket": bucket, "n_ego": n_ego, "summary": summary,
            "runs": [[r.to_dict() for r in rs] for rs in per_ego]}
