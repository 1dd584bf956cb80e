"""Fixed-step classical Runge-Kutta integration."""
from __future__ import annotations

from typing import Callable

import numpy as np

from pacstl.errors import DivergenceError, InputError

Deriv = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(f: Deriv, t: float, x: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def substeps(dt_out: float, dt_internal: float) -> int:
    """Number of internal steps per output step; ``dt_out`` must be a multiple of ``dt_internal``."""
    if dt_out <= 0 or dt_internal <= 0:
        raise InputError("time steps must be positive")
    k = dt_out / dt_internal
    n = int(round(k))
    if n < 1 or abs(k - n) > 1e-9 * max(1.0, k):
        raise InputError(f"dt_out={dt_out} is not an integer multiple of dt_internal={dt_internal}")
    return n


def advance(f: Deriv, t: float, x: np.ndarray, dt_out: float, dt_internal: float = 0.05,
            check: bool = True) -> np.ndarray:
    """Integrate from ``t`` to ``t + dt_out`` with RK4 at ``dt_internal``."""
    n = substeps(dt_out, dt_internal)
    h = dt_out / n
    for i in range(n):
        x = rk4_step(f, t + i * h, x, h)
    if check and not np.all(np.isfinite(x)):
        raise DivergenceError(f"non-finite state after integrating to t={t + dt_out:g}")
    return x


def integrate(f: Deriv, x0, t0: float, n_out: int, dt_out: float, dt_internal: float = 0.05) -> np.ndarray:
    """Trajectory sampled every ``dt_out``; returns shape ``(n_out + 1,) + x0.shape``."""
    x = np.asarray(x0, dtype=float)
    out = np.empty((n_out + 1,) + x.shape)
    out[0] = x
    for k in range(n_out):
        x = advance(f, t0 + k * dt_out, x, dt_out, dt_internal)
        out[k + 1] = x
    return out
