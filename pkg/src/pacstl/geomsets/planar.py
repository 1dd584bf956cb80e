"""Planar projections of convex sets and distance ranges to a point."""
from __future__ import annotations

import math

import numpy as np

from pacstl.errors import InputError, NumericalError
from pacstl.geomsets.interval import Interval

MAX_ITER = 100
LAMBDA_TOL = 1e-10
# relative outward padding absorbing rounding in the root-finder
PAD = 1e-12


class PlanarEllipse:
    """Ellipse ``{x : (x-c)^T S^{-1} (x-c) <= 1}`` given by center and shape ``S``.

    A singular ``S`` describes a segment or a point.
    """

    def __init__(self, center, shape):
        self.center = np.asarray(center, dtype=float).reshape(2)
        S = np.asarray(shape, dtype=float).reshape(2, 2)
        self.shape = 0.5 * (S + S.T)
        w, U = np.linalg.eigh(self.shape)
        scale = max(abs(w[-1]), 1e-300)
        w = np.where(w < 1e-14 * scale, 0.0, w)
        # order semi-axes descending
        self.axes = np.sqrt(w[::-1])
        self.rotation = U[:, ::-1]

    @property
    def degenerate(self) -> bool:
        return bool(self.axes[1] == 0.0)

    def local(self, p) -> np.ndarray:
        return self.rotation.T @ (np.asarray(p, dtype=float) - self.center)

    def contains(self, p) -> bool:
        y = self.local(p)
        a = self.axes
        if self.degenerate:
            if a[0] == 0.0:
                return bool(np.allclose(y, 0.0, atol=1e-12))
            return bool(abs(y[1]) <= 1e-12 and abs(y[0]) <= a[0])
        return bool((y[0] / a[0]) ** 2 + (y[1] / a[1]) ** 2 <= 1.0)

    def boundary(self, m: int = 720) -> np.ndarray:
        th = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
        loc = np.stack([self.axes[0] * np.cos(th), self.axes[1] * np.sin(th)], axis=1)
        return loc @ self.rotation.T + self.center

    def norm_range(self, p) -> Interval:
        y = self.local(p)
        a = self.axes
        if self.degenerate:
            seg = np.array([[-a[0], 0.0], [a[0], 0.0]])
            lo, hi = _segment_range(y, seg[0], seg[1])
            return _padded(lo, hi)
        hi = _ellipse_max_distance(y, a)
        lo = 0.0 if self.contains(p) else _ellipse_min_distance(y, a)
        return _padded(lo, hi)


class PlanarPolygon:
    """Convex polygon given by counter-clockwise vertices (may be a segment or point)."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if v.shape[0] == 0:
            raise InputError("polygon needs at least one vertex")
        self.vertices = v

    @classmethod
    def from_zonotope(cls, c, G) -> "PlanarPolygon":
        """Vertex enumeration of a 2D zonotope by sorting generators by angle."""
        c = np.asarray(c, dtype=float).reshape(2)
        G = np.asarray(G, dtype=float).reshape(2, -1)
        norms = np.linalg.norm(G, axis=0)
        tiny = 1e-14 * max(norms.max(initial=0.0), 1e-300)
        G = G[:, norms > tiny]
        if G.shape[1] == 0:
            return cls(c[None, :])
        # flip generators into the upper half plane, angles in [0, pi)
        flip = (G[1] < 0) | ((G[1] == 0) & (G[0] < 0))
        G = np.where(flip, -G, G)
        order = np.argsort(np.arctan2(G[1], G[0]), kind="stable")
        G = G[:, order]
        start = c - G.sum(axis=1)
        steps = np.concatenate([2.0 * G.T, -2.0 * G.T])
        verts = start + np.concatenate([np.zeros((1, 2)), np.cumsum(steps, axis=0)[:-1]])
        return cls(_dedupe(verts))

    @property
    def degenerate(self) -> bool:
        if self.vertices.shape[0] < 3:
            return True
        return abs(_area(self.vertices)) <= 1e-14 * max(1.0, np.ptp(self.vertices, axis=0).max() ** 2)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float).reshape(2)
        v = self.vertices
        if self.degenerate:
            if v.shape[0] == 1:
                return bool(np.allclose(p, v[0], atol=1e-12))
            lo, _ = _segment_range(p, *_extreme_pair(v))
            return lo <= 1e-12
        e = np.roll(v, -1, axis=0) - v
        w = p - v
        cross = e[:, 0] * w[:, 1] - e[:, 1] * w[:, 0]
        return bool(np.all(cross >= -1e-12 * max(1.0, np.abs(v).max())))

    def norm_range(self, p) -> Interval:
        p = np.asarray(p, dtype=float).reshape(2)
        v = self.vertices
        hi = float(np.linalg.norm(v - p, axis=1).max())
        if self.contains(p) and not self.degenerate:
            return _padded(0.0, hi)
        if v.shape[0] == 1:
            d = float(np.linalg.norm(v[0] - p))
            return _padded(d, d)
        if self.degenerate:
            lo, _ = _segment_range(p, *_extreme_pair(v))
            return _padded(lo, hi)
        w = np.roll(v, -1, axis=0)
        lo = min(_segment_range(p, a, b)[0] for a, b in zip(v, w))
        return _padded(lo, hi)

    def boundary(self) -> np.ndarray:
        return self.vertices


def norm_range(pset, p) -> Interval:
    """Range ``[min ||p - x||, max ||p - x||]`` over members ``x`` of a planar set."""
    return pset.norm_range(p)


def _padded(lo: float, hi: float) -> Interval:
    return Interval(max(0.0, lo * (1.0 - PAD) - PAD), hi * (1.0 + PAD) + PAD)


def _area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _dedupe(v: np.ndarray) -> np.ndarray:
    keep = [0]
    scale = max(1.0, float(np.abs(v).max()))
    for k in range(1, len(v)):
        if np.linalg.norm(v[k] - v[keep[-1]]) > 1e-13 * scale:
            keep.append(k)
    if len(keep) > 1 and np.linalg.norm(v[keep[-1]] - v[keep[0]]) <= 1e-13 * scale:
        keep.pop()
    return v[keep]


def _extreme_pair(v: np.ndarray):
    d = np.linalg.norm(v[:, None, :] - v[None, :, :], axis=2)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    return v[i], v[j]


def _segment_range(p, a, b) -> tuple[float, float]:
    p, a, b = (np.asarray(z, dtype=float) for z in (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    lo = float(np.linalg.norm(a + t * ab - p))
    hi = max(float(np.linalg.norm(a - p)), float(np.linalg.norm(b - p)))
    return lo, hi


def _secular_root(y2a2: np.ndarray, a2: np.ndarray, lo: float, hi: float) -> float:
    """Root of ``sum y_i^2 a_i^2 / (a_i^2 + lam)^2 = 1`` on ``(lo, hi)``, ``lo >= 0``.

    The secular function decreases there. Safeguarded Newton with bisection fallback.
    """
    lam = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        d = a2 + lam
        val = float(np.sum(y2a2 / d**2) - 1.0)
        der = float(-2.0 * np.sum(y2a2 / d**3))
        if val == 0.0:
            return lam
        if val > 0.0:
            lo = lam
        else:
            hi = lam
        step = lam - val / der if der != 0.0 else math.nan
        new = step if (np.isfinite(step) and lo < step < hi) else 0.5 * (lo + hi)
        if abs(new - lam) <= LAMBDA_TOL * max(1.0, abs(lam)):
            return new
        lam = new
    raise NumericalError("secular equation did not converge in 100 iterations")


def _ellipse_min_distance(y: np.ndarray, a: np.ndarray) -> float:
    """Distance from an exterior point ``y`` (local frame) to the ellipse with semi-axes ``a``."""
    a2 = a**2
    y2a2 = y**2 * a2
    # f(0) > 0 outside and f decreases to -1; bracket an upper end
    hi = max(1.0, float(np.sqrt(y2a2.sum())))
    while float(np.sum(y2a2 / (a2 + hi) ** 2)) - 1.0 > 0.0:
        hi *= 2.0
    lam = _secular_root(y2a2, a2, 0.0, hi)
    x = a2 * y / (a2 + lam)
    return float(np.linalg.norm(x - y))


def _ellipse_max_distance(y: np.ndarray, a: np.ndarray) -> float:
    """Largest distance from ``y`` (local frame) to the ellipse with semi-axes ``a``."""
    a2 = a**2
    candidates = [np.array([a[0], 0.0]), np.array([-a[0], 0.0]), np.array([0.0, a[1]]), np.array([0.0, -a[1]])]
    y2a2 = y**2 * a2
    if y2a2[0] > 0.0:
        # f -> +inf as lam -> -a0^2 from below, f -> -1 as lam -> -inf
        lo = -a2[0] - max(1.0, float(np.sqrt(y2a2.sum())))
        while float(np.sum(y2a2 / (a2 + lo) ** 2)) - 1.0 > 0.0:
            lo = -a2[0] - 2.0 * (-a2[0] - lo)
        hi = -a2[0]
        lam = _secular_root_left(y2a2, a2, lo, hi)
        candidates.append(a2 * y / (a2 + lam))
    elif a[0] > a[1]:
        # point on the minor axis: multiplier sits at -a0^2, x0 free
        x1 = a2[1] * y[1] / (a2[1] - a2[0])
        if abs(x1) <= a[1]:
            x0 = a[0] * math.sqrt(max(0.0, 1.0 - (x1 / a[1]) ** 2))
            candidates.extend([np.array([x0, x1]), np.array([-x0, x1])])
    else:
        # circle
        r = float(np.linalg.norm(y))
        if r > 0:
            candidates.append(-a[0] * y / r)
    return max(float(np.linalg.norm(c - y)) for c in candidates)


def _secular_root_left(y2a2, a2, lo, hi) -> float:
    """Root on ``(-inf, -a0^2)`` where the secular function increases."""
    lam = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        d = a2 + lam
        val = float(np.sum(y2a2 / d**2) - 1.0)
        der = float(-2.0 * np.sum(y2a2 / d**3))
        if val == 0.0:
            return lam
        if val < 0.0:
            lo = lam
        else:
            hi = lam
        step = lam - val / der if der != 0.0 else math.nan
        new = step if (np.isfinite(step) and lo < step < hi) else 0.5 * (lo + hi)
        if abs(new - lam) <= LAMBDA_TOL * max(1.0, abs(lam)):
            return new
        lam = new
    raise NumericalError("secular equation did not converge in 100 iterations")
