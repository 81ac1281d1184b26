# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampler hot kernels; mirrors gltshrink._kernels_py exactly."""

from libc.math cimport exp, log, pow, sqrt, INFINITY, isfinite, M_PI

from scipy.special.cython_special cimport gammainc, gammaincinv, gammaln

name = "compiled"

LOG_HALF = log(0.5)
cdef double _LOG_HALF = log(0.5)


def lambda_sweep(double[::1] lam, double[::1] m, double a, double tau,
                 double xi, double[::1] u1, double[::1] u2):
    """Slice-update every local scale in place; returns the skip count."""
    cdef Py_ssize_t j, p = lam.shape[0]
    cdef int skipped = 0
    cdef double neg_exp = -(1.0 / xi + 1.0)
    cdef double slice_exp = -xi / (1.0 + xi)
    cdef double g, u, denom, lo, p_max, w, y, gam
    for j in range(p):
        g = pow(xi + tau / lam[j], neg_exp)
        u = u1[j] * g
        if u <= 0.0:
            lo = 0.0
        else:
            denom = pow(u, slice_exp) - xi
            if denom <= 0.0:
                skipped += 1
                continue
            lo = (tau / denom) * (tau / denom)
        if lo == 0.0:
            p_max = 1.0
        else:
            p_max = gammainc(a, m[j] / lo)
        if p_max <= 0.0:
            skipped += 1
            continue
        w = u2[j] * p_max
        y = gammaincinv(a, w) / m[j]
        gam = 1.0 / y
        if not isfinite(gam) or gam <= 0.0:
            skipped += 1
            continue
        lam[j] = sqrt(gam)
    return skipped


def tau_upper_bound(double[::1] lam, double tau, double xi, double[::1] uv):
    """min_j g_j^-1(v_j) with v_j ~ U(0, g_j(tau)); always > tau."""
    cdef Py_ssize_t j, p = lam.shape[0]
    cdef double neg_exp = -(1.0 / xi + 1.0)
    cdef double slice_exp = -xi / (1.0 + xi)
    cdef double best = INFINITY
    cdef double g, v, bound
    for j in range(p):
        g = pow(tau + xi * lam[j], neg_exp)
        v = uv[j] * g
        if v <= 0.0:
            continue
        bound = pow(v, slice_exp) - xi * lam[j]
        if bound < best:
            best = bound
    return best


def xi_log_lik(double eta, double[::1] lam, double tau):
    """Transformed shape-update log-likelihood at eta = log(xi)."""
    cdef Py_ssize_t j, p = lam.shape[0]
    cdef double xi, s
    if eta <= _LOG_HALF or eta > 700.0:
        return -INFINITY
    xi = exp(eta)
    s = 0.0
    for j in range(p):
        s += log(tau + xi * lam[j])
    return -gammaln(p / xi + 1.0) + 0.5 * p * log(M_PI) - (1.0 / xi + 1.0) * s
