"""Pure-numpy implementations of the sampler hot kernels.

Drop-in fallback for the compiled extension (gltshrink._core): identical
signatures, identical uniform-draw consumption.  All randomness is passed in
as pre-drawn uniforms so a chain consumes the same stream under either
backend.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

LOG_HALF = math.log(0.5)

name = "python"


def lambda_sweep(lam, m, a, tau, xi, u1, u2):
    """Slice-update every local scale in place; returns the skip count.

    For each j: u ~ U(0, g(lam_j^2)) with g(t) = (xi + tau t^-1/2)^-(1/xi+1),
    then lam_j^2 ~ IG(a, m_j) truncated to (g^-1(u), inf) by inverting the
    gamma CDF of 1/lam_j^2.  Entries whose truncated mass underflows are left
    unchanged and counted.
    """
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        g = (xi + tau / lam) ** (-(1.0 / xi + 1.0))
        u = u1 * g
        denom = u ** (-xi / (1.0 + xi)) - xi
        lo = (tau / denom) ** 2
        p_max = sp.gammainc(a, m / lo)
        w = u2 * p_max
        y = sp.gammaincinv(a, w) / m
        gam = 1.0 / y
        ok = (
            (denom > 0.0)
            & (p_max > 0.0)
            & np.isfinite(gam)
            & (gam > 0.0)
        )
    lam[ok] = np.sqrt(gam[ok])
    return int(lam.size - int(ok.sum()))


def tau_upper_bound(lam, tau, xi, uv):
    """min_j g_j^-1(v_j) with v_j ~ U(0, g_j(tau)); always > tau."""
    with np.errstate(over="ignore", divide="ignore"):
        g = (tau + xi * lam) ** (-(1.0 / xi + 1.0))
        v = uv * g
        bound = v ** (-xi / (1.0 + xi)) - xi * lam
        bound[v == 0.0] = np.inf
    return float(bound.min())


def xi_log_lik(eta, lam, tau):
    """Transformed shape-update log-likelihood at eta = log(xi).

    -log Gamma(p/xi + 1) + (p/2) log pi - (1/xi + 1) sum_j log(tau + xi l_j),
    with -inf below the support boundary eta = log(1/2).
    """
    if eta <= LOG_HALF:
        return -np.inf
    if eta > 700.0:
        return -np.inf
    xi = math.exp(eta)
    p = lam.size
    s = float(np.log(tau + xi * lam).sum())
    return -float(sp.gammaln(p / xi + 1.0)) + 0.5 * p * math.log(math.pi) - (1.0 / xi + 1.0) * s
