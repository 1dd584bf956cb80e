"""Minimum-volume ellipsoids and template zonotopes covering a point cloud."""
from __future__ import annotations

import logging
import math
import warnings

import numpy as np

from pacstl.errors import InputError, NumericalError
from pacstl.geomsets import Ellipsoid, Zonotope

log = logging.getLogger(__name__)

# radial safety factor so boundary points stay members after rounding
INFLATE = 1.0 + 1e-9
JITTER = 1e-9
LAMBDA_FLOOR = 1e-9


def _check_cloud(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise InputError(f"point cloud must be a non-empty (m, n) array, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InputError("point cloud contains non-finite values")
    return P


def expand_corners(points, half_len: float, half_wid: float, xy=(0, 1), heading: int = 2) -> np.ndarray:
    """Replace every state by the four hull corners of a rectangle rotated by its heading.

    Parameters
    ----------
    points : (m, n) array
        States holding planar position at ``xy`` and heading at ``heading``.
    half_len, half_wid : float
        Half length (along the heading) and half width of the rectangle.

    Returns
    -------
    (4 m, n) array
        Corners ordered per state as (+l,+w), (+l,-w), (-l,+w), (-l,-w);
        non-position coordinates are copied.
    """
    P = _check_cloud(points)
    ix, iy = xy
    psi = P[:, heading]
    c, s = np.cos(psi), np.sin(psi)
    out = np.repeat(P, 4, axis=0)
    offsets = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float) * [half_len, half_wid]
    dl = np.tile(offsets[:, 0], P.shape[0])
    dw = np.tile(offsets[:, 1], P.shape[0])
    c4, s4 = np.repeat(c, 4), np.repeat(s, 4)
    out[:, ix] += c4 * dl - s4 * dw
    out[:, iy] += s4 * dl + c4 * dw
    return out


def _affine_frame(P: np.ndarray):
    """Mean, orthonormal basis of the affine span, its orthogonal complement, and the rank."""
    mean = P.mean(axis=0)
    centered = P - mean
    _, sv, Vt = np.linalg.svd(centered, full_matrices=True)
    tol = 1e-12 * max(1.0, float(np.abs(P).max())) * max(P.shape)
    rank = int((sv > tol).sum())
    return mean, Vt[:rank].T, Vt[rank:].T, rank


def khachiyan(points, tol: float = 1e-6, max_iter: int = 100_000):
    """Barycentric-coordinate ascent for the minimum-volume enclosing ellipsoid.

    Uses Khachiyan's algorithm with Todd-Yildirim away steps and rank-one
    updates of the lifted moment matrix.

    Returns
    -------
    center : (n,) array
    shape_inv : (n, n) array
        Matrix ``H`` with the ellipsoid ``{x : (x-c)^T H (x-c) <= 1}``.
    u : (m,) array
        Final barycentric weights.
    n_iter : int
    """
    P = _check_cloud(points)
    m, n = P.shape
    d = n + 1
    Q = np.hstack([P, np.ones((m, 1))])
    u = np.full(m, 1.0 / m)
    X = (Q * u[:, None]).T @ Q
    Xinv = np.linalg.inv(X)
    M = np.einsum("ij,jk,ik->i", Q, Xinv, Q)
    it = 0
    for it in range(1, max_iter + 1):
        j = int(np.argmax(M))
        Mj = M[j]
        support = u > 0
        k = int(np.flatnonzero(support)[np.argmin(M[support])])
        Mk = M[k]
        if Mj <= d * (1.0 + tol) and Mk >= d * (1.0 - tol):
            break
        if Mj - d >= d - Mk:
            idx, Mi = j, Mj
            lam = (Mi - d) / (d * (Mi - 1.0))
        else:
            idx, Mi = k, Mk
            lam = (Mi - d) / (d * (Mi - 1.0))
            if u[k] < 1.0:
                lam = max(lam, -u[k] / (1.0 - u[k]))
        if lam == 0.0:
            break
        q = Q[idx]
        Xq = Xinv @ q
        w = Q @ Xq
        denom = (1.0 - lam) + lam * Mi
        Xinv = (Xinv - lam * np.outer(Xq, Xq) / denom) / (1.0 - lam)
        M = (M - lam * w**2 / denom) / (1.0 - lam)
        u *= 1.0 - lam
        u[idx] += lam
        u[idx] = max(u[idx], 0.0)
        if it % 500 == 0:
            X = (Q * u[:, None]).T @ Q
            Xinv = np.linalg.inv(X)
            M = np.einsum("ij,jk,ik->i", Q, Xinv, Q)
    else:
        warnings.warn(f"MVEE did not reach tolerance {tol} in {max_iter} iterations", RuntimeWarning,
                      stacklevel=2)
    c = P.T @ u
    S = (P * u[:, None]).T @ P - np.outer(c, c)
    try:
        H = np.linalg.inv(S) / n
    except np.linalg.LinAlgError as exc:
        raise NumericalError("MVEE moment matrix is singular") from exc
    return c, H, u, it


def fit_mvee(points, tol: float = 1e-6, max_iter: int = 100_000) -> Ellipsoid:
    """Minimum-volume ellipsoid ``{x : ||A x - b|| <= 1}`` covering every point.

    The iterate is rescaled so that every input point is a member, then
    inflated radially by ``1 + 1e-9`` to absorb rounding. A cloud whose
    affine span has rank ``r < n`` is fitted inside that span and padded
    with semi-axes of length ``1e-9`` (relative to the cloud scale) in the
    missing directions.
    """
    P = _check_cloud(points)
    n = P.shape[1]
    mean, U, V, rank = _affine_frame(P)
    if rank == n and P.shape[0] > n:
        c, shape = _mvee_full(P, tol, max_iter)
        return Ellipsoid.from_center_shape(c, shape)
    warnings.warn(f"degenerate point cloud (affine rank {rank} < {n}); padding with semi-axes {JITTER}",
                  RuntimeWarning, stacklevel=2)
    pad = JITTER * max(1.0, float(np.abs(P).max()))
    # assemble A = shape^{-1/2} blockwise so the tiny semi-axes never meet the large ones in one eigensolve
    A = (V @ V.T) / pad
    c = mean
    if rank:
        Y = (P - mean) @ U
        if rank == 1:
            lo, hi = Y.min(), Y.max()
            cy, sy = np.array([(lo + hi) / 2]), np.array([[max((hi - lo) / 2 * INFLATE, pad) ** 2]])
        else:
            cy, sy = _mvee_full(Y, tol, max_iter)
        w, R = np.linalg.eigh(sy)
        c = mean + U @ cy
        A = A + U @ ((R / np.sqrt(w)) @ R.T) @ U.T
    A = 0.5 * (A + A.T)
    return Ellipsoid(A, A @ c)


def _mvee_full(P: np.ndarray, tol: float, max_iter: int):
    c, H, _, n_iter = khachiyan(P, tol=tol, max_iter=max_iter)
    diff = P - c
    r = np.einsum("ij,jk,ik->i", diff, H, diff).max()
    H = H / (r * INFLATE**2)
    log.debug("mvee: %d points, %d iterations", P.shape[0], n_iter)
    return c, np.linalg.inv(0.5 * (H + H.T))


def _is_diagonal(G0: np.ndarray) -> bool:
    return G0.shape[0] == G0.shape[1] and np.count_nonzero(G0 - np.diag(np.diag(G0))) == 0


def _max_log_barrier(B: np.ndarray, n: int, max_outer: int = 40) -> np.ndarray:
    """Maximize ``sum log w`` subject to ``|B w| <= 1`` with a log-barrier Newton method."""
    w = np.ones(n)
    s = np.abs(B @ w).max()
    w *= 0.5 / s if s > 0 else 1.0
    t = 1.0
    m = B.shape[0]

    def phi(w):
        r = B @ w
        if np.any(w <= 0) or np.any(np.abs(r) >= 1):
            return math.inf
        return -t * np.log(w).sum() - np.log1p(-r).sum() - np.log1p(r).sum()

    for _ in range(max_outer):
        for _ in range(50):
            r = B @ w
            a, b = 1.0 / (1.0 - r), 1.0 / (1.0 + r)
            grad = -t / w + B.T @ (a - b)
            hess = np.diag(t / w**2) + (B.T * (a**2 + b**2)) @ B
            step = np.linalg.solve(hess, -grad)
            dec = -grad @ step
            if dec / 2.0 <= 1e-12:
                break
            f0, alpha = phi(w), 1.0
            while phi(w + alpha * step) > f0 - 0.25 * alpha * dec:
                alpha *= 0.5
                if alpha < 1e-14:
                    break
            w = w + alpha * step
        if 2.0 * m / t < 1e-10:
            break
        t *= 10.0
    return w


def fit_zonotope_template(points, c=None, G0=None) -> Zonotope:
    """Zonotope ``c + diag(Lambda) G0 alpha`` of minimal ``sum log Lambda`` covering the cloud.

    Parameters
    ----------
    points : (m, n) array
    c : (n,) array, optional
        Center; defaults to the centroid of ``points``.
    G0 : (n, g) array, optional
        Template generator matrix with full row rank; defaults to the identity.

    Notes
    -----
    Each row of the template is scaled. With the substitution ``w = 1/Lambda``
    the pseudoinverse constraint is linear in ``w``, so the problem is convex.
    For a diagonal template the optimum is ``Lambda_j = max_i |(G0^{-1}(x_i - c))_j|``.
    """
    P = _check_cloud(points)
    n = P.shape[1]
    c = P.mean(axis=0) if c is None else np.asarray(c, dtype=float).reshape(n)
    G0 = np.eye(n) if G0 is None else np.asarray(G0, dtype=float)
    if G0.ndim != 2 or G0.shape[0] != n or np.linalg.matrix_rank(G0) < n:
        raise InputError(f"template must be an ({n}, g) matrix of full row rank")
    Y = P - c
    if _is_diagonal(G0):
        lam = np.abs(Y / np.diag(G0)).max(axis=0)
    else:
        Gp = np.linalg.pinv(G0)  # (g, n)
        # row (i, k): sum_j Gp[k, j] * y_ij * w_j
        B = (Gp[None, :, :] * Y[:, None, :]).reshape(-1, n)
        active = np.abs(Y).max(axis=0) > 0
        lam = np.full(n, LAMBDA_FLOOR)
        if active.any():
            w = _max_log_barrier(B[:, active], int(active.sum()))
            w /= np.abs(B[:, active] @ w).max()
            lam[active] = 1.0 / w
    if np.any(lam <= LAMBDA_FLOOR):
        warnings.warn("zonotope scale collapsed (points on a hyperplane); flooring at 1e-9",
                      RuntimeWarning, stacklevel=2)
        lam = np.maximum(lam, LAMBDA_FLOOR)
    return Zonotope(c, (lam * INFLATE)[:, None] * G0)


def _scale_needed(G: np.ndarray, Y: np.ndarray) -> float:
    return float(np.abs(Y @ np.linalg.pinv(G, rcond=1e-10).T).max())


def refine_zonotope(z: Zonotope, points, iters: int = 200, p_norm: float = 32.0) -> Zonotope:
    """Local descent of ``log det(G G^T)`` over the full generator matrix.

    Feasibility is folded into the objective: any ``G`` is rescaled by the
    largest pseudoinverse coordinate of the cloud, giving
    ``log det(G G^T) + 2 n log r(G)``. The max inside ``r`` is smoothed by a
    ``p_norm`` soft-max and minimized with L-BFGS. The candidate is accepted
    only when both ``log det(G G^T)`` and the exact volume decrease; the
    result always contains every point under the pseudoinverse test.
    """
    from scipy.optimize import minimize

    P = _check_cloud(points)
    if iters <= 0:
        return z
    c = z.c
    n, g = z.G.shape
    Y = P - c
    scale = float(np.abs(z.G).max()) or 1.0

    def objective(theta):
        G = theta.reshape(n, g) * scale
        sign, ld = np.linalg.slogdet(G @ G.T)
        if sign <= 0:
            return 1e6
        a = np.abs(Y @ np.linalg.pinv(G, rcond=1e-10).T).ravel()
        amax = a.max()
        if amax == 0.0:
            return ld
        soft = amax * np.sum((a / amax) ** p_norm) ** (1.0 / p_norm)
        return ld + 2.0 * n * math.log(soft)

    res = minimize(objective, (z.G / scale).ravel(), method="L-BFGS-B", options={"maxiter": iters})
    G = res.x.reshape(n, g) * scale
    sign, _ = np.linalg.slogdet(G @ G.T)
    if not np.all(np.isfinite(G)) or sign <= 0:
        return z
    cand = Zonotope(c, G * (_scale_needed(G, Y) * INFLATE))
    if cand.log_det_gram() < z.log_det_gram() and cand.volume() <= z.volume():
        return cand
    return z
