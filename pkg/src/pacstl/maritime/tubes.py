"""Reachable tube banks for the other vessel, one per surge-speed bucket."""
from __future__ import annotations

import numpy as np

from pacstl.errors import InputError
from pacstl.geomsets import Interval
from pacstl.reach import Corners, SampleSpec, build_tube
from pacstl.sim import VesselStepper, vessel_params

BUCKETS = ((-0.1, 0.1), (0.1, 0.3), (0.3, 0.5), (0.5, 0.7))
TAU_LO = (0.7, -0.1, 0.0, 0.0, 0.0, -0.1)
TAU_HI = (1.2, 0.1, 0.0, 0.0, 0.0, 0.1)
B_LO = (-1.102, 0.00764, 0.0, 0.0, 0.0, -0.0941)
B_HI = (0.438, 0.230, 0.0, 0.0, 0.0, 0.0263)
# eta = (x, y, z, phi, theta, psi); the tube frame starts at the origin heading along +x
ETA_LO = (0.0, -0.1, -0.092, -0.092, -0.079, -0.1)
ETA_HI = (0.0, 0.1, 0.0111, 0.0, 0.0, 0.1)


def bucket_spec(bucket: int, N: int = 1500, M: int = 1500, seed: int = 0, dt: float = 0.5,
                horizon: int = 5, buckets=BUCKETS) -> SampleSpec:
    """Sampling boxes for bucket ``1..len(buckets)``: surge speed boxed, other velocities zero."""
    if not 1 <= bucket <= len(buckets):
        raise InputError(f"bucket must be in 1..{len(buckets)}, got {bucket}")
    u_lo, u_hi = buckets[bucket - 1]
    x0_lo = np.r_[ETA_LO, u_lo, np.zeros(5)]
    x0_hi = np.r_[ETA_HI, u_hi, np.zeros(5)]
    return SampleSpec(x0_lo=x0_lo, x0_hi=x0_hi, u_lo=TAU_LO, u_hi=TAU_HI, d_lo=B_LO, d_hi=B_HI,
                      resample_period=2, N=N, M=M, seed=seed, dt=dt, horizon=horizon)


def build_bucket_tube(vessel: str, bucket: int, rep: str = "ellipsoid", N: int = 1500, M: int = 1500,
                      seed: int = 0, beta: float = 1e-9, dt: float = 0.5, horizon: int = 5,
                      buckets=BUCKETS, refine_iters: int = 0):
    p = vessel_params(vessel)
    spec = bucket_spec(bucket, N, M, seed + 1000 * bucket, dt, horizon, buckets)
    return build_tube(VesselStepper(p), spec, rep=rep, corners=Corners(p.half_length, p.half_width), beta=beta,
                      velocity_bucket=Interval(*buckets[bucket - 1]), refine_iters=refine_iters)


def build_bank_tubes(vessel: str, rep: str = "ellipsoid", **kw) -> list:
    buckets = kw.get("buckets", BUCKETS)
    return [build_bucket_tube(vessel, b, rep, **kw) for b in range(1, len(buckets) + 1)]
