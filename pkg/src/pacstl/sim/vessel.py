"""Six degree of freedom surface vessel model.

State layout: ``eta = (x, y, z, phi, theta, psi)`` in the world frame and
``nu = (u, v, w, p, q, r)`` in the body frame. Batches put these 12 values on
the last axis.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from pacstl.angles import normalize_angle
from pacstl.errors import InputError, NumericalError
from pacstl.sim.integrate import advance

log = logging.getLogger(__name__)

GIMBAL_LIMIT = math.radians(80.0)


def skew(a: np.ndarray) -> np.ndarray:
    """``S(a)`` with ``S(a) b = a x b``."""
    a = np.asarray(a, dtype=float)
    return np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])


@dataclass(frozen=True)
class VesselParams:
    """Hull geometry, effective mass, added mass and linear damping of one vessel.

    ``m`` and ``inertia`` form the rigid-body part used inside the Coriolis
    matrix; the dynamics themselves use the effective mass ``M`` as given.
    """

    name: str
    L: float
    B: float
    T_draft: float
    M: np.ndarray
    M_A_lin: np.ndarray
    M_A_rot: np.ndarray
    D: np.ndarray
    rho: float = field(default=math.nan)

    def __post_init__(self):
        for key in ("M", "M_A_lin", "M_A_rot", "D"):
            arr = np.array(getattr(self, key), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, key, arr)
        if self.M.shape != (6, 6) or self.D.shape != (6, 6):
            raise InputError("M and D must be 6x6")
        if np.linalg.eigvalsh(0.5 * (self.M + self.M.T))[0] <= 0:
            raise InputError("effective mass matrix must be positive definite")
        if np.count_nonzero(self.D - np.diag(np.diag(self.D))) or np.any(np.diag(self.D) < 0):
            raise InputError("damping must be diagonal and non-negative")
        if math.isnan(self.rho):
            # density that makes rho L B T plus the surge added mass equal M[0, 0]
            rho = (self.M[0, 0] - self.M_A_lin[0, 0]) / (self.L * self.B * self.T_draft)
            object.__setattr__(self, "rho", float(rho))
            log.info("vessel %s: back-solved density %.4g kg/m^3", self.name, rho)
        object.__setattr__(self, "_Minv", np.linalg.inv(self.M))

    @property
    def m(self) -> float:
        return self.rho * self.L * self.B * self.T_draft

    @property
    def inertia(self) -> np.ndarray:
        """Principal moments of a uniform rectangular solid."""
        L, B, T = self.L, self.B, self.T_draft
        return self.m / 12.0 * np.array([B**2 + T**2, L**2 + T**2, L**2 + B**2])

    @property
    def half_length(self) -> float:
        return 0.5 * self.L

    @property
    def half_width(self) -> float:
        return 0.5 * self.B

    @property
    def Minv(self) -> np.ndarray:
        return self._Minv


def large_vessel() -> VesselParams:
    return VesselParams(
        name="L", L=2.6, B=0.4, T_draft=0.02,
        M=np.diag([132.0, 144.0, 240.0, 1.9, 99.1, 100.76]),
        M_A_lin=np.diag([12.0, 24.0, 120.0]),
        M_A_rot=np.diag([0.17, 9.01, 9.16]),
        D=np.diag([30.0, 30.0, 30.0, 0.425, 22.525, 22.90]),
    )


def small_vessel() -> VesselParams:
    return VesselParams(
        name="S", L=1.0, B=0.3, T_draft=0.08,
        M=np.diag([26.4, 28.8, 48.0, 0.212, 2.214, 2.398]),
        M_A_lin=np.diag([2.4, 4.8, 2.4]),
        M_A_rot=np.diag([1.92, 2.013, 2.18]),
        D=np.diag([6.0, 6.0, 6.0, 0.0482, 0.5032, 0.545]),
    )


VESSELS = {"S": small_vessel, "L": large_vessel}


def vessel_params(kind: str) -> VesselParams:
    try:
        return VESSELS[kind]()
    except KeyError:
        raise InputError(f"unknown vessel type {kind!r}; expected one of {sorted(VESSELS)}") from None


@dataclass(frozen=True)
class FullState:
    eta: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        eta = np.array(self.eta, dtype=float).reshape(6)
        eta[3:] = normalize_angle(eta[3:])
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "nu", np.array(self.nu, dtype=float).reshape(6))

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.eta, self.nu])

    @classmethod
    def from_array(cls, s) -> "FullState":
        s = np.asarray(s, dtype=float)
        return cls(s[:6], s[6:])


def coriolis_matrix(nu, p: VesselParams) -> np.ndarray:
    """``C(nu) = C_RB(nu) + C_A(nu)`` assembled from skew-symmetric blocks."""
    nu = np.asarray(nu, dtype=float)
    v, w = nu[:3], nu[3:]
    m = p.m
    Iw = p.inertia * w
    Av = p.M_A_lin @ v
    Bw = p.M_A_rot @ w
    C = np.zeros((6, 6))
    C[:3, 3:] = -m * skew(w) - skew(Av)
    C[3:, :3] = -m * skew(v) - skew(Av)
    C[3:, 3:] = -skew(Iw) - skew(Bw)
    return C


def _coriolis_times_nu(nu: np.ndarray, p: VesselParams) -> np.ndarray:
    """Batched ``C(nu) nu`` without forming the matrix."""
    v, w = nu[..., :3], nu[..., 3:]
    Av = v * np.diag(p.M_A_lin)
    Bw = w * np.diag(p.M_A_rot)
    Iw = w * p.inertia
    # -m S(w) w and -m S(v) v vanish
    top = -np.cross(Av, w)
    bottom = -np.cross(Iw, w) - np.cross(Av, v) - np.cross(Bw, w)
    return np.concatenate([top, bottom], axis=-1)


def kinematics(eta: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """``J(eta) nu`` with the full Euler-angle rotation and rate transforms (batched)."""
    phi, theta, psi = eta[..., 3], eta[..., 4], eta[..., 5]
    if np.any(np.abs(theta) > GIMBAL_LIMIT):
        raise NumericalError("pitch exceeds 80 degrees; Euler-angle kinematics near gimbal lock")
    cphi, sphi = np.cos(phi), np.sin(phi)
    cth, sth = np.cos(theta), np.sin(theta)
    cpsi, spsi = np.cos(psi), np.sin(psi)
    u, v, w, p, q, r = (nu[..., i] for i in range(6))
    xd = cpsi * cth * u + (-spsi * cphi + cpsi * sth * sphi) * v + (spsi * sphi + cpsi * cphi * sth) * w
    yd = spsi * cth * u + (cpsi * cphi + sphi * sth * spsi) * v + (-cpsi * sphi + sth * spsi * cphi) * w
    zd = -sth * u + cth * sphi * v + cth * cphi * w
    tth = sth / cth
    phid = p + sphi * tth * q + cphi * tth * r
    thd = cphi * q - sphi * r
    psid = (sphi * q + cphi * r) / cth
    return np.stack([xd, yd, zd, phid, thd, psid], axis=-1)


def vessel_derivative(state, tau, b, p: VesselParams) -> np.ndarray:
    """Time derivative of ``(eta, nu)``; accepts a ``FullState`` or a (..., 12) array."""
    s = state.to_array() if isinstance(state, FullState) else np.asarray(state, dtype=float)
    eta, nu = s[..., :6], s[..., 6:]
    tau = np.asarray(tau, dtype=float)
    b = np.asarray(b, dtype=float)
    force = tau - _coriolis_times_nu(nu, p) - nu * np.diag(p.D) + b
    nud = force @ p.Minv.T
    return np.concatenate([kinematics(eta, nu), nud], axis=-1)


def reduced_state(s) -> np.ndarray:
    """``(p_x, p_y, psi, v_x, v_y, vel)`` with world-frame planar velocity."""
    s = np.asarray(s, dtype=float)
    d = kinematics(s[..., :6], s[..., 6:])
    vx, vy = d[..., 0], d[..., 1]
    return np.stack([s[..., 0], s[..., 1], normalize_angle(s[..., 5]), vx, vy, np.hypot(vx, vy)], axis=-1)


@dataclass(frozen=True)
class VesselStepper:
    """Black-box stepper: constant ``tau`` and ``b`` over one output step, RK4 inside."""

    params: VesselParams
    dt_internal: float = 0.05

    state_dim = 12

    def step(self, states, inputs, disturbances, t, dt):
        tau = np.asarray(inputs, dtype=float)
        b = np.asarray(disturbances, dtype=float)

        def rhs(_t, s):
            return vessel_derivative(s, tau, b, self.params)

        out = advance(rhs, t, np.asarray(states, dtype=float), dt, self.dt_internal, check=False)
        out[..., 3:6] = normalize_angle(out[..., 3:6])
        return out

    def observe(self, states):
        return reduced_state(states)
