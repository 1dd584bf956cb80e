"""Angle wrapping shared by every module."""
from __future__ import annotations

import numpy as np


def normalize_angle(a):
    """Wrap to ``(-pi, pi]``; ``pi`` maps to itself and ``-pi`` to ``pi``."""
    arr = np.asarray(a, dtype=float)
    out = np.pi - np.mod(np.pi - arr, 2.0 * np.pi)
    if out.ndim == 0:
        return float(out)
    return out
