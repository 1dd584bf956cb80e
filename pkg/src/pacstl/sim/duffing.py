"""Forced Duffing oscillator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pacstl.reach.sampling import SampleSpec
from pacstl.sim.integrate import advance

ALPHA, GAMMA, OMEGA = 0.05, 0.4, 1.3


def duffing_derivative(x, y, t, alpha=ALPHA, gamma=GAMMA, omega=OMEGA):
    """``(dx/dt, dy/dt)`` with ``dx/dt = y`` and ``dy/dt = -alpha y + x - x^3 + gamma cos(omega t)``."""
    return y, -alpha * y + x - x**3 + gamma * np.cos(omega * t)


@dataclass(frozen=True)
class DuffingStepper:
    """Black-box stepper over batches of ``(x, y)`` states; inputs and disturbances are unused."""

    alpha: float = ALPHA
    gamma: float = GAMMA
    omega: float = OMEGA
    dt_internal: float = 0.05

    state_dim = 2

    def rhs(self, t, s):
        dx, dy = duffing_derivative(s[..., 0], s[..., 1], t, self.alpha, self.gamma, self.omega)
        return np.stack([dx, dy], axis=-1)

    def step(self, states, inputs, disturbances, t, dt):
        return advance(self.rhs, t, np.asarray(states, dtype=float), dt, self.dt_internal, check=False)

    def observe(self, states):
        return states


X0_LO = (0.95, -0.05)
X0_HI = (1.05, 0.05)
T_FINAL = 100.0
R2 = 2.0 ** 0.5
G0_FOUR = np.array([[0.0, 1.0, R2, R2], [1.0, 0.0, R2, -R2]])
G0_IDENTITY = np.eye(2)


def duffing_sample_spec(N: int = 1500, M: int = 1500, seed: int = 0, t_final: float = T_FINAL):
    """Uniform initial box, one output step of length ``t_final``."""
    return SampleSpec(x0_lo=X0_LO, x0_hi=X0_HI, N=N, M=M, seed=seed, dt=t_final, horizon=1)
