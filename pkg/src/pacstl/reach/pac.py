"""Holdout accuracy bound by binomial tail inversion."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, logsumexp

from pacstl.errors import InputError

BISECT_TOL = 1e-12


def log_binomial_cdf(k: int, M: int, e: float) -> float:
    """``log sum_{j<=k} C(M, j) e^j (1-e)^(M-j)`` for ``0 < e < 1``."""
    j = np.arange(k + 1)
    terms = (
        gammaln(M + 1) - gammaln(j + 1) - gammaln(M - j + 1)
        + j * math.log(e) + (M - j) * math.log1p(-e)
    )
    return float(logsumexp(terms))


def binomial_tail_inversion(k: int, M: int, beta: float) -> float:
    """Largest ``e`` in [0, 1] whose binomial CDF at ``k`` violations is still ``>= beta``.

    Parameters
    ----------
    k : int
        Observed violations among ``M`` holdout samples.
    M : int
        Holdout sample count.
    beta : float
        Confidence parameter in (0, 1).

    Returns
    -------
    float
        Accuracy ``eps``; the true violation probability is below ``eps``
        with confidence ``1 - beta``.
    """
    k, M = int(k), int(M)
    beta = float(beta)
    if M < 1 or not 0 <= k <= M:
        raise InputError(f"need 0 <= k <= M and M >= 1, got k={k}, M={M}")
    if not 0.0 < beta < 1.0:
        raise InputError(f"beta must lie in (0, 1), got {beta}")
    if k == M:
        return 1.0
    log_beta = math.log(beta)
    lo, hi = 0.0, 1.0
    # the CDF decreases in e; keep lo feasible
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or mid >= 1.0:
            break
        if log_binomial_cdf(k, M, mid) >= log_beta:
            lo = mid
        else:
            hi = mid
    return lo
