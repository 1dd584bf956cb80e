"""Interval signal temporal logic."""
from pacstl.istl.formula import (
    And,
    Atomic,
    Eventually,
    Globally,
    Not,
    Or,
    SpecNode,
    Until,
    horizon,
    parse,
    to_steps,
)
from pacstl.istl.guarantee import MODES, PacRobustness, attach_guarantee
from pacstl.istl.pointwise import point_robustness, point_trace
from pacstl.istl.semantics import (
    EvalResult,
    IntervalSignal,
    Trace,
    Verdict,
    evaluate,
    evaluate_trace,
    verdict,
)

__all__ = [
    "And", "Atomic", "EvalResult", "Eventually", "Globally", "IntervalSignal", "MODES", "Not", "Or",
    "PacRobustness", "SpecNode", "Trace", "Until", "Verdict", "attach_guarantee", "evaluate",
    "evaluate_trace", "horizon", "parse", "point_robustness", "point_trace", "to_steps", "verdict",
]
