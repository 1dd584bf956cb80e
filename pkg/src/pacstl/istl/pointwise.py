"""Standard quantitative robustness on point-valued signals, batched over leading axes."""
from __future__ import annotations

import numpy as np

from pacstl.errors import InputError
from pacstl.istl.formula import And, Atomic, Eventually, Globally, Not, Or, SpecNode, Until, horizon, to_steps


def point_trace(spec: SpecNode, values: dict, dt: float) -> np.ndarray:
    """Robustness at every valid evaluation step.

    Parameters
    ----------
    values : dict
        Atomic name to an array of shape ``(..., T)``.
    dt : float

    Returns
    -------
    ndarray of shape ``(..., T - horizon)``
    """
    arrays = {k: np.asarray(v, dtype=float) for k, v in values.items()}
    if not arrays:
        raise InputError("no atomic signals given")
    T = next(iter(arrays.values())).shape[-1]
    length = T - horizon(spec, dt)
    if length <= 0:
        raise InputError(f"signal of length {T} is shorter than the formula horizon")
    return _eval(spec, arrays, dt, length)


def point_robustness(spec: SpecNode, values: dict, dt: float, t: int = 0) -> np.ndarray:
    tr = point_trace(spec, values, dt)
    if not 0 <= t < tr.shape[-1]:
        raise InputError(f"evaluation step {t} leaves the signal")
    return tr[..., t]


def _eval(spec, arrays, dt, length):
    if isinstance(spec, Atomic):
        try:
            return arrays[spec.name][..., :length]
        except KeyError:
            raise InputError(f"unknown atomic proposition {spec.name!r}") from None
    if isinstance(spec, Not):
        return -_eval(spec.child, arrays, dt, length)
    if isinstance(spec, (And, Or)):
        parts = np.stack([_eval(c, arrays, dt, length) for c in spec.children])
        return parts.min(axis=0) if isinstance(spec, And) else parts.max(axis=0)
    if isinstance(spec, (Globally, Eventually)):
        a, b = to_steps(spec.lo, dt), to_steps(spec.hi, dt)
        c = _eval(spec.child, arrays, dt, length + b)
        win = np.stack([c[..., a + k: a + k + length] for k in range(b - a + 1)])
        return win.min(axis=0) if isinstance(spec, Globally) else win.max(axis=0)
    if isinstance(spec, Until):
        a, b = to_steps(spec.lo, dt), to_steps(spec.hi, dt)
        left = _eval(spec.left, arrays, dt, length + b)
        right = _eval(spec.right, arrays, dt, length + b)
        best = np.full(left.shape[:-1] + (length,), -np.inf)
        run = np.full_like(best, np.inf)
        for k in range(b + 1):
            run = np.minimum(run, left[..., k: k + length])
            if k >= a:
                best = np.maximum(best, np.minimum(right[..., k: k + length], run))
        return best
    raise InputError(f"unknown formula node {type(spec).__name__}")
