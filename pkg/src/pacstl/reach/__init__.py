"""Sampled reachable tubes with holdout accuracy bounds."""
from pacstl.reach.fitting import expand_corners, fit_mvee, fit_zonotope_template, khachiyan, refine_zonotope
from pacstl.reach.pac import binomial_tail_inversion, log_binomial_cdf
from pacstl.reach.sampling import TEST_STREAM, TRAIN_STREAM, SampleSpec, sample_trajectories
from pacstl.reach.tube import (
    Corners,
    ReachTube,
    ReachTubeEstimator,
    Trajectory,
    build_tube,
    calibrate,
    count_violations,
    fit_sets,
    step_membership,
)

__all__ = [
    "Corners", "ReachTube", "TEST_STREAM", "TRAIN_STREAM", "ReachTubeEstimator", "SampleSpec", "Trajectory", "binomial_tail_inversion",
    "build_tube", "calibrate", "count_violations", "expand_corners", "fit_mvee", "fit_sets",
    "fit_zonotope_template", "khachiyan", "log_binomial_cdf", "refine_zonotope", "sample_trajectories",
    "step_membership",
]
