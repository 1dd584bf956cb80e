"""PAC-bounded reachable tubes and interval signal temporal logic monitoring."""
from pacstl.errors import ConfigError, DivergenceError, InputError, NumericalError, PacStlError
from pacstl.geomsets import Ellipsoid, Interval, Zonotope
from pacstl.istl import IntervalSignal, PacRobustness, attach_guarantee, evaluate, parse
from pacstl.reach import ReachTube, ReachTubeEstimator, SampleSpec, binomial_tail_inversion, build_tube

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DivergenceError", "Ellipsoid", "InputError", "Interval", "IntervalSignal", "NumericalError",
    "PacRobustness", "PacStlError", "ReachTube", "ReachTubeEstimator", "SampleSpec", "Zonotope",
    "attach_guarantee", "binomial_tail_inversion", "build_tube", "evaluate", "parse",
]
