"""Attach tube accuracies to specification robustness intervals."""
from __future__ import annotations

from dataclasses import dataclass

from pacstl.errors import InputError
from pacstl.geomsets import Interval
from pacstl.istl.semantics import EvalResult

MODES = ("tube", "timepoint")


@dataclass(frozen=True)
class PacRobustness:
    """Robustness interval, characteristic steps and the ``(eps, beta)`` pair it inherits.

    With probability at least ``1 - beta`` over the sampled data, the
    robustness of an unseen trajectory lies in ``interval`` with probability
    at least ``1 - eps``.
    """

    interval: Interval
    t_low: int
    t_up: int
    eps: float
    beta: float
    mode: str

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise InputError(f"eps {self.eps} outside [0, 1]")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}")

    @property
    def lo(self) -> float:
        return self.interval.lo

    @property
    def hi(self) -> float:
        return self.interval.hi


def attach_guarantee(result: EvalResult, tube, mode: str = "tube", offset: int = 0) -> PacRobustness:
    """Tube mode uses ``eps_tube``; time-point mode the worse accuracy of the two characteristic sets.

    ``offset`` is the tube step that signal step 0 corresponds to.
    """
    if mode == "tube":
        eps = tube.eps_tube
    elif mode == "timepoint":
        try:
            i_lo = tube.index_of(result.t_low + offset)
            i_up = tube.index_of(result.t_up + offset)
        except InputError as exc:
            raise InputError(f"characteristic step out of tube range: {exc}") from None
        eps = max(tube.eps_t[i_lo], tube.eps_t[i_up])
    else:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    return PacRobustness(result.interval, result.t_low, result.t_up, float(eps), tube.beta, mode)
