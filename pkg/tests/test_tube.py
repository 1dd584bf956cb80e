import json

import numpy as np
import pytest
from sklearn.base import clone

from pacstl.errors import InputError
from pacstl.geomsets import Interval
from pacstl.reach import (
    Corners,
    ReachTube,
    ReachTubeEstimator,
    SampleSpec,
    Trajectory,
    binomial_tail_inversion,
    build_tube,
    count_violations,
)


class Identity:
    state_dim = 2

    def step(self, states, inputs, disturbances, t, dt):
        return states

    def observe(self, states):
        return states


class Rotor:
    """Planar rotation of the initial point, one radian per second."""

    state_dim = 2

    def step(self, states, inputs, disturbances, t, dt):
        c, s = np.cos(dt), np.sin(dt)
        return states @ np.array([[c, s], [-s, c]])

    def observe(self, states):
        return states


def _cloud(seed, count, T=4):
    rng = np.random.default_rng(seed)
    base = rng.normal(size=(count, 1, 2))
    drift = np.arange(T + 1)[None, :, None] * np.array([1.0, 0.5])
    return base + drift


def test_trivial_simulator_point_sets():
    spec = SampleSpec(x0_lo=[1.0, 2.0], x0_hi=[1.0, 2.0], N=1, M=1, horizon=2, dt=1.0)
    with pytest.warns(RuntimeWarning, match="degenerate"):
        tube = build_tube(Identity(), spec)
    assert tube.k_tube == 0 and tube.k_t == [0, 0, 0]
    assert np.allclose(tube.sets[0].center, [1.0, 2.0])
    assert tube.sets[0].project_coord(0).width < 1e-6


def test_training_trajectories_are_inside_and_eps_ordering():
    spec = SampleSpec(x0_lo=[0.5, -0.2], x0_hi=[1.5, 0.2], N=300, M=300, seed=2, horizon=4, dt=0.5)
    tube = build_tube(Rotor(), spec)
    assert all(e <= tube.eps_tube + 1e-12 for e in tube.eps_t)
    assert tube.eps_tube == pytest.approx(binomial_tail_inversion(tube.k_tube, 300, tube.beta))


def test_all_inside_gives_zero_counts():
    X = _cloud(0, 100)
    est = ReachTubeEstimator(dt=0.5).fit(X)
    k_tube, k_t = count_violations(est.calibrate(X).tube_, X)
    assert (k_tube, k_t) == (0, [0] * 5)


def test_one_trajectory_out_at_one_step():
    X = _cloud(1, 100)
    tube = ReachTubeEstimator().fit(X).calibrate(X).tube_
    Y = X[:3].copy()
    Y[1, 2] += 50.0
    assert count_violations(tube, Y) == (1, [0, 0, 1, 0, 0])


def test_planted_outliers_counted_exactly():
    X = _cloud(2, 400)
    tube = ReachTubeEstimator(rep="zonotope").fit(X).calibrate(X).tube_
    Y = _cloud(3, 200)
    inside = np.array([[s.contains(Y[i, st]) for st, s in zip(tube.steps, tube.sets)] for i in range(len(Y))])
    Y = Y[inside.all(axis=1)]
    planted = [0, 5, 9, 13, 21, 34, 55]
    for j, i in enumerate(planted):
        Y[i, j % 5] += [100.0, -100.0]
    k_tube, k_t = count_violations(tube, Y)
    assert k_tube == 7
    assert sum(k_t) == 7


def test_corner_expanded_membership_needs_all_corners():
    rng = np.random.default_rng(4)
    X = np.concatenate([rng.normal(size=(200, 3, 2)), rng.uniform(-0.3, 0.3, (200, 3, 1))], axis=2)
    corners = Corners(0.5, 0.2)
    tube = ReachTubeEstimator(corners=corners).fit(X).calibrate(X).tube_
    assert count_violations(tube, X)[0] == 0
    # a centre inside the set whose corners poke out is a violation
    Y = X[:1].copy()
    Y[0, :, :2] = tube.sets[0].center[:2]
    Y[0, :, 2] = 0.0
    big = Corners(50.0, 50.0)
    tube_big = ReachTube(tube.sets, 1.0, 1.0, [1.0] * 3, 0.1, corners=big)
    assert count_violations(tube_big, Y)[0] == 1


def test_horizon_and_dimension_mismatch_raise():
    X = _cloud(5, 50)
    tube = ReachTubeEstimator().fit(X).calibrate(X).tube_
    with pytest.raises(InputError):
        count_violations(tube, X[:, :3])
    with pytest.raises(InputError):
        count_violations(tube, np.zeros((3, 5, 3)))


def test_trajectory_objects_accepted():
    X = _cloud(6, 50)
    est = ReachTubeEstimator().fit([Trajectory(x, 0.5) for x in X])
    assert est.predict(X).all()


def test_roundtrip_json(tmp_path):
    X = _cloud(7, 80)
    for rep in ("ellipsoid", "zonotope"):
        tube = ReachTubeEstimator(rep=rep, corners=Corners(0.1, 0.1, (0, 1), 1)).fit(X).calibrate(X).tube_
        tube.velocity_bucket = Interval(0.1, 0.3)
        path = tmp_path / f"{rep}.json"
        tube.save(path)
        back = ReachTube.load(path)
        assert back.eps_t == tube.eps_t and back.steps == tube.steps and back.corners == tube.corners
        assert back.velocity_bucket == tube.velocity_bucket
        Y = _cloud(8, 30)
        assert count_violations(back, Y) == count_violations(tube, Y)
        assert json.loads(path.read_text())["sets"][0]["type"] == rep


def test_from_dict_missing_field():
    with pytest.raises(InputError, match="lacks"):
        ReachTube.from_dict({"dt": 1.0})


def test_estimator_follows_sklearn_conventions():
    est = ReachTubeEstimator(rep="zonotope", beta=1e-3)
    params = est.get_params()
    assert params["rep"] == "zonotope" and params["beta"] == 1e-3
    c = clone(est)
    assert c.get_params() == params and not hasattr(c, "sets_")
    X = _cloud(9, 100)
    est.fit(X)
    assert est.n_features_in_ == 2
    assert est.score(X) == 1.0
    est.calibrate(_cloud(10, 100))
    assert 0.0 <= est.eps_tube_ <= 1.0 and len(est.eps_t_) == 5


def test_unfitted_estimator_raises():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        ReachTubeEstimator().predict(_cloud(0, 3))


def test_invalid_tube_accuracy_rejected():
    X = _cloud(11, 20)
    est = ReachTubeEstimator().fit(X)
    with pytest.raises(InputError):
        ReachTube(est.sets_, 1.0, 1.5, [0.0] * 5, 0.1)
    with pytest.raises(InputError):
        ReachTube(est.sets_, 1.0, 0.5, [0.0] * 4, 0.1)


def test_unknown_representation():
    with pytest.raises(InputError):
        ReachTubeEstimator(rep="polytope").fit(_cloud(0, 10))


def test_transport_keeps_accuracies():
    X = _cloud(12, 60)
    tube = ReachTubeEstimator().fit(X).calibrate(X).tube_
    moved = tube.transported(np.array([[0.0, -1.0], [1.0, 0.0]]), [3.0, 4.0])
    assert moved.eps_t == tube.eps_t
    Y = X @ np.array([[0.0, 1.0], [-1.0, 0.0]]) + [3.0, 4.0]
    assert count_violations(moved, Y)[0] == 0
