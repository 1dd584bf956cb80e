import numpy as np
import pytest

from pacstl.errors import InputError
from pacstl.reach import TEST_STREAM, TRAIN_STREAM, SampleSpec, sample_trajectories
from pacstl.sim import DuffingStepper, duffing_sample_spec


class Drift:
    """x' = x + dt (u + d); records nothing else."""

    state_dim = 1

    def step(self, states, inputs, disturbances, t, dt):
        return states + dt * (inputs + disturbances)

    def observe(self, states):
        return states


class Exploding(Drift):
    """Diverges whenever the drawn input is positive."""

    def step(self, states, inputs, disturbances, t, dt):
        return np.where(inputs > 0, np.inf, states + dt * inputs)


def _spec(**kw):
    base = dict(x0_lo=[0.0], x0_hi=[1.0], u_lo=[-1.0], u_hi=[1.0], d_lo=[-0.1], d_hi=[0.1],
                resample_period=2, N=50, M=50, seed=4, dt=0.5, horizon=5)
    base.update(kw)
    return SampleSpec(**base)


def test_count_zero_is_empty():
    X = sample_trajectories(Drift(), _spec(), 0)
    assert X.shape == (0, 6, 1)


def test_same_seed_is_bitwise_identical():
    a = sample_trajectories(Drift(), _spec(), 30)
    b = sample_trajectories(Drift(), _spec(), 30, batch=7)
    assert np.array_equal(a, b)


def test_streams_and_seeds_differ():
    a = sample_trajectories(Drift(), _spec(), 10, stream=TRAIN_STREAM)
    b = sample_trajectories(Drift(), _spec(), 10, stream=TEST_STREAM)
    c = sample_trajectories(Drift(), _spec(seed=5), 10)
    assert not np.allclose(a, b) and not np.allclose(a, c)


def test_inputs_constant_and_disturbances_piecewise_constant():
    X = sample_trajectories(Drift(), _spec(x0_lo=[0.0], x0_hi=[0.0]), 20)[:, :, 0]
    rate = np.diff(X, axis=1) / 0.5
    # resample every two steps: steps (0,1), (2,3), (4) share a disturbance
    assert np.allclose(rate[:, 0], rate[:, 1]) and np.allclose(rate[:, 2], rate[:, 3])
    assert not np.allclose(rate[:, 1], rate[:, 2])
    assert np.all(np.abs(rate) <= 1.1 + 1e-12)


def test_initial_states_inside_box():
    X = sample_trajectories(Drift(), _spec(), 200)
    assert X[:, 0, 0].min() >= 0.0 and X[:, 0, 0].max() <= 1.0


def test_divergent_samples_are_redrawn_with_warning():
    spec = _spec(u_lo=[-1.0], u_hi=[1.0])
    with pytest.warns(RuntimeWarning, match="diverged"):
        X = sample_trajectories(Exploding(), spec, 40)
    assert np.all(np.isfinite(X))


def test_always_divergent_raises():
    with pytest.raises(InputError):
        sample_trajectories(Exploding(), _spec(u_lo=[0.5], u_hi=[1.0]), 3)


def test_spec_validation():
    with pytest.raises(InputError):
        _spec(x0_lo=[1.0], x0_hi=[0.0])
    with pytest.raises(InputError):
        _spec(N=0)
    with pytest.raises(InputError):
        _spec(dt=0.0)


def test_duffing_spec_shapes():
    spec = duffing_sample_spec(N=20, M=20, seed=1)
    X = sample_trajectories(DuffingStepper(), spec, 20)
    assert X.shape == (20, 2, 2)
    assert np.all((X[:, 0, 0] >= 0.95) & (X[:, 0, 0] <= 1.05))
    assert np.all(np.abs(X[:, 0, 1]) <= 0.05)
