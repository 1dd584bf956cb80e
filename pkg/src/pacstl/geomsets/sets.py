"""Ellipsoids and zonotopes used as time-point reachable sets.

Both classes are immutable after construction. Vector arguments may be a
single point of shape ``(n,)`` or a batch of shape ``(m, n)``.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.special import gammaln

from pacstl.errors import InputError, NumericalError
from pacstl.geomsets.interval import Interval

PD_TOL = 1e-10
PINV_RCOND = 1e-10
COND_LIMIT = 1e12
MEMBER_TOL = 1e-9


def _as_points(x, n: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.ndim != 2 or pts.shape[1] != n:
        raise InputError(f"expected points of dimension {n}, got shape {x.shape}")
    return pts, single


def _direction(a, n: int) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (n,):
        raise InputError(f"direction must have shape ({n},), got {a.shape}")
    return a


def _axis(axis: int, n: int) -> int:
    if not 0 <= int(axis) < n:
        raise InputError(f"axis {axis} out of range for dimension {n}")
    return int(axis)


def unit_ball_volume(n: int) -> float:
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


class Ellipsoid:
    """Ellipsoid ``{x : ||A x - b||_2 <= 1}`` with symmetric positive definite ``A``.

    Parameters
    ----------
    A : (n, n) array_like
        Symmetric positive definite shape matrix.
    b : (n,) array_like
        Offset; the center is ``A^{-1} b``.
    """

    kind = "ellipsoid"

    def __init__(self, A, b):
        A = np.array(A, dtype=float, ndmin=2)
        b = np.array(b, dtype=float).reshape(-1)
        n = A.shape[0]
        if A.shape != (n, n) or b.shape != (n,):
            raise InputError(f"incompatible ellipsoid shapes A{A.shape}, b{b.shape}")
        if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
            raise InputError("ellipsoid parameters must be finite")
        if not np.allclose(A, A.T, rtol=1e-9, atol=1e-12 * max(1.0, np.abs(A).max())):
            raise InputError("ellipsoid matrix A must be symmetric")
        A = 0.5 * (A + A.T)
        eig = np.linalg.eigvalsh(A)
        if eig[0] <= PD_TOL:
            raise InputError(f"ellipsoid matrix A is not positive definite (min eigenvalue {eig[0]:.3e})")
        self._A = A
        self._b = b
        self._eig = eig
        self._A.setflags(write=False)
        self._b.setflags(write=False)
        self._center = np.linalg.solve(A, b)
        self._center.setflags(write=False)

    @classmethod
    def from_center_shape(cls, center, shape) -> "Ellipsoid":
        """Build from ``{x : (x-c)^T shape^{-1} (x-c) <= 1}``."""
        center = np.asarray(center, dtype=float)
        shape = np.asarray(shape, dtype=float)
        w, V = np.linalg.eigh(0.5 * (shape + shape.T))
        if w[0] <= 0:
            raise InputError("shape matrix must be positive definite")
        A = (V / np.sqrt(w)) @ V.T
        return cls(A, A @ center)

    @classmethod
    def ball(cls, center, radius: float = 1.0) -> "Ellipsoid":
        center = np.asarray(center, dtype=float)
        n = center.size
        return cls(np.eye(n) / radius, center / radius)

    @property
    def A(self) -> np.ndarray:
        return self._A

    @property
    def b(self) -> np.ndarray:
        return self._b

    @property
    def dim(self) -> int:
        return self._b.size

    @property
    def center(self) -> np.ndarray:
        return self._center

    @property
    def shape_matrix(self) -> np.ndarray:
        """``Q = (A^T A)^{-1}``, so the set is ``{x : (x-c)^T Q^{-1} (x-c) <= 1}``."""
        Ainv = np.linalg.inv(self._A)
        return Ainv @ Ainv.T

    @property
    def condition_number(self) -> float:
        return float(self._eig[-1] / self._eig[0])

    def volume(self) -> float:
        return unit_ball_volume(self.dim) / float(np.prod(self._eig))

    def log_volume(self) -> float:
        return math.log(unit_ball_volume(self.dim)) - float(np.sum(np.log(self._eig)))

    def membership(self, x) -> np.ndarray | float:
        """``||A x - b||_2`` for each point; values ``<= 1`` are members."""
        pts, single = _as_points(x, self.dim)
        r = np.linalg.norm(pts @ self._A.T - self._b, axis=1)
        return float(r[0]) if single else r

    def contains(self, x):
        r = self.membership(x)
        return bool(r <= 1.0) if np.isscalar(r) else r <= 1.0

    def support(self, a) -> float:
        a = _direction(a, self.dim)
        if self.condition_number > COND_LIMIT:
            raise NumericalError(
                f"ellipsoid matrix is ill-conditioned (condition number {self.condition_number:.3e})"
            )
        return float(a @ self._center + np.linalg.norm(np.linalg.solve(self._A, a)))

    def project_coord(self, axis: int) -> Interval:
        axis = _axis(axis, self.dim)
        e = np.zeros(self.dim)
        e[axis] = 1.0
        return Interval(-self.support(-e), self.support(e))

    def project_plane(self, axes):
        from pacstl.geomsets.planar import PlanarEllipse

        i, j = (_axis(k, self.dim) for k in axes)
        if i == j:
            raise InputError("projection axes must be distinct")
        Q = self.shape_matrix
        idx = [i, j]
        return PlanarEllipse(self._center[idx], Q[np.ix_(idx, idx)])

    def scaled(self, factor: float) -> "Ellipsoid":
        """Same center, every semi-axis multiplied by ``factor``."""
        A = self._A / factor
        return Ellipsoid(A, A @ self._center)

    def affine_transport(self, R, t) -> "Ellipsoid":
        """Image under ``x -> R x + t`` for orthogonal ``R``.

        Uses ``A' = R A R^T`` and ``b' = R b + A' t`` so that ``A'`` stays symmetric.
        """
        R = np.asarray(R, dtype=float)
        t = np.asarray(t, dtype=float)
        A2 = R @ self._A @ R.T
        A2 = 0.5 * (A2 + A2.T)
        return Ellipsoid(A2, R @ self._b + A2 @ t)

    def sample(self, rng: np.random.Generator, size: int, surface_fraction: float = 0.0) -> np.ndarray:
        """Uniform samples inside; optionally a fraction placed exactly on the boundary."""
        n = self.dim
        z = rng.standard_normal((size, n))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        radii = rng.random(size) ** (1.0 / n)
        n_surf = int(round(surface_fraction * size))
        radii[:n_surf] = 1.0
        u = z * radii[:, None]
        return np.linalg.solve(self._A, (u + self._b).T).T

    def to_dict(self) -> dict:
        return {"type": self.kind, "A": self._A.tolist(), "b": self._b.tolist()}

    def __repr__(self) -> str:
        return f"Ellipsoid(dim={self.dim}, center={np.round(self._center, 4).tolist()})"


class Zonotope:
    """Zonotope ``{c + G alpha : ||alpha||_inf <= 1}``.

    Membership uses the pseudoinverse test ``||G^+ (x - c)||_inf <= 1``, which is
    sufficient but not necessary for true membership. Support and projection
    queries are exact for the full zonotope, hence conservative for the tested set.
    """

    kind = "zonotope"

    def __init__(self, c, G):
        c = np.array(c, dtype=float).reshape(-1)
        G = np.array(G, dtype=float, ndmin=2)
        if G.shape[0] != c.size:
            raise InputError(f"generator matrix has {G.shape[0]} rows, center has {c.size}")
        if not np.all(np.isfinite(G)) or not np.all(np.isfinite(c)):
            raise InputError("zonotope parameters must be finite")
        self._c = c
        self._G = G
        self._Gpinv = np.linalg.pinv(G, rcond=PINV_RCOND)
        for arr in (self._c, self._G, self._Gpinv):
            arr.setflags(write=False)

    @property
    def c(self) -> np.ndarray:
        return self._c

    @property
    def center(self) -> np.ndarray:
        return self._c

    @property
    def G(self) -> np.ndarray:
        return self._G

    @property
    def Gpinv(self) -> np.ndarray:
        return self._Gpinv

    @property
    def dim(self) -> int:
        return self._c.size

    @property
    def n_generators(self) -> int:
        return self._G.shape[1]

    def volume(self) -> float:
        """Exact volume ``2^n sum |det|`` over all n-subsets of generators."""
        n, g = self._G.shape
        if g < n:
            return 0.0
        total = 0.0
        for cols in itertools.combinations(range(g), n):
            total += abs(np.linalg.det(self._G[:, cols]))
        return (2.0 ** n) * total

    def log_det_gram(self) -> float:
        sign, logdet = np.linalg.slogdet(self._G @ self._G.T)
        return logdet if sign > 0 else -math.inf

    def membership(self, x):
        """``||G^+ (x - c)||_inf`` for each point."""
        pts, single = _as_points(x, self.dim)
        r = np.abs((pts - self._c) @ self._Gpinv.T).max(axis=1)
        return float(r[0]) if single else r

    def contains(self, x):
        r = self.membership(x)
        return bool(r <= 1.0) if np.isscalar(r) else r <= 1.0

    def support(self, a) -> float:
        a = _direction(a, self.dim)
        return float(a @ self._c + np.abs(a @ self._G).sum())

    def project_coord(self, axis: int) -> Interval:
        axis = _axis(axis, self.dim)
        r = float(np.abs(self._G[axis]).sum())
        return Interval(self._c[axis] - r, self._c[axis] + r)

    def project_plane(self, axes):
        from pacstl.geomsets.planar import PlanarPolygon

        i, j = (_axis(k, self.dim) for k in axes)
        if i == j:
            raise InputError("projection axes must be distinct")
        idx = [i, j]
        return PlanarPolygon.from_zonotope(self._c[idx], self._G[idx])

    def scaled(self, factor: float) -> "Zonotope":
        return Zonotope(self._c, self._G * factor)

    def affine_transport(self, R, t) -> "Zonotope":
        R = np.asarray(R, dtype=float)
        return Zonotope(R @ self._c + np.asarray(t, dtype=float), R @ self._G)

    def sample(self, rng: np.random.Generator, size: int, surface_fraction: float = 0.0) -> np.ndarray:
        """Samples of members passing the pseudoinverse test.

        Generator weights are drawn in the unit box and then mapped to
        ``c + G G^+ G alpha``; when ``G`` has full row rank this is ``c + G alpha``.
        A ``surface_fraction`` of the weights is pushed to box vertices.
        """
        alpha = rng.uniform(-1.0, 1.0, (size, self.n_generators))
        n_surf = int(round(surface_fraction * size))
        if n_surf:
            alpha[:n_surf] = np.sign(alpha[:n_surf])
        x = self._c + alpha @ self._G.T
        # rounding pushes exact vertices to membership 1 + O(1e-16); keep them
        keep = self.membership(x) <= 1.0 + MEMBER_TOL
        return x[keep]

    def to_dict(self) -> dict:
        return {"type": self.kind, "G": self._G.tolist(), "c": self._c.tolist()}

    def __repr__(self) -> str:
        return f"Zonotope(dim={self.dim}, generators={self.n_generators})"


ConvexSet = Ellipsoid | Zonotope


def set_from_dict(data: dict) -> ConvexSet:
    kind = data.get("type")
    if kind == "ellipsoid":
        return Ellipsoid(data["A"], data["b"])
    if kind == "zonotope":
        return Zonotope(data["c"], data["G"])
    raise InputError(f"unknown set type {kind!r}")


def contains(s: ConvexSet, x):
    return s.contains(x)


def support(s: ConvexSet, a) -> float:
    return s.support(a)


def project_coord(s: ConvexSet, axis: int) -> Interval:
    return s.project_coord(axis)


def project_plane(s: ConvexSet, axes):
    return s.project_plane(axes)
