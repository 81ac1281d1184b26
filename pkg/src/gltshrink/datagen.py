"""Synthetic data: the equicorrelated high-dimensional generator, the
normal-means quantile transform, and the Gaussian kernel design builder."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chains import RegressionData
from .errors import DomainError
from .specfun import normal_quantile, student_t_cdf

Z_CLAMP = 40.0


@dataclass(frozen=True)
class SimEnv:
    """Simulation environment (n, p, q, rho, snr).

    Rows of the raw design are N_p(0, rho J + (1 - rho) I); q leading unit
    signals; noise scaled so the realized signal-to-noise ratio is exact.
    """

    n: int
    p: int
    q: int
    rho: float = 0.0
    snr: float = 5.0

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"n must be >= 3 (sample variance), got {self.n}")
        if self.p < 1:
            raise DomainError(f"p must be positive, got {self.p}")
        if not (0 <= self.q <= self.p):
            raise DomainError(f"q must lie in [0, p], got {self.q}")
        if not (0.0 <= self.rho < 1.0):
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")
        if not (self.snr > 0.0):
            raise DomainError(f"snr must be positive, got {self.snr}")


def _sample_var(z: np.ndarray) -> float:
    return float(np.sum((z - z.mean()) ** 2) / (z.size - 1))


def simulate(env: SimEnv, rng: np.random.Generator):
    """Draw (data, beta0, sigma0) from the equicorrelated generator.

    The raw rows use the rank-1 decomposition sqrt(rho) * shared +
    sqrt(1-rho) * independent; columns are then centered exactly and scaled
    to unit Euclidean norm.  sigma0^2 = var(X beta0) / (snr * var(eps)) with
    the realized sample variances, so the generated signal-to-noise ratio is
    exact by construction.
    """
    n, p, q = env.n, env.p, env.q
    shared = rng.standard_normal(n)
    X = np.sqrt(env.rho) * shared[:, None] + np.sqrt(1.0 - env.rho) * rng.standard_normal((n, p))
    for _ in range(100):
        degenerate = np.flatnonzero(X.std(axis=0) == 0.0)
        if degenerate.size == 0:
            break
        X[:, degenerate] = np.sqrt(env.rho) * shared[:, None] + np.sqrt(
            1.0 - env.rho
        ) * rng.standard_normal((n, degenerate.size))
    else:
        raise DomainError("could not draw a design free of constant columns")

    X = X - X.mean(axis=0)
    X = X / np.linalg.norm(X, axis=0)

    beta0 = np.zeros(p)
    beta0[:q] = 1.0
    eps = rng.standard_normal(n)
    signal = X @ beta0
    sigma0_sq = _sample_var(signal) / (env.snr * _sample_var(eps))
    sigma0 = float(np.sqrt(sigma0_sq))
    y = signal + sigma0 * eps
    return RegressionData(y=y, X=X), beta0, sigma0


def quantile_transform(t, df: float = 100.0):
    """Map t-statistics to z-values through Phi^-1(F_df(t)).

    Strictly increasing and antisymmetric; clamped to |z| <= 40 where the
    t CDF saturates in double precision.
    """
    if df <= 0.0:
        raise DomainError(f"df must be positive, got {df}")
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("t contains non-finite entries")
    flat = np.atleast_1d(t)
    z = np.empty_like(flat)
    for i, ti in enumerate(flat):
        prob = student_t_cdf(ti, df)
        if prob <= 0.0:
            z[i] = -Z_CLAMP
        elif prob >= 1.0:
            z[i] = Z_CLAMP
        else:
            z[i] = np.clip(normal_quantile(prob), -Z_CLAMP, Z_CLAMP)
    return float(z[0]) if t.ndim == 0 else z.reshape(t.shape)


def gaussian_kernel_design(x, bandwidth: float = 1.0) -> np.ndarray:
    """n x n Gaussian kernel matrix exp(-(x_i - x_j)^2 / (2 h^2)).

    Unit diagonal, exactly symmetric.  Response centering stands in for the
    intercept of the kernel expansion.
    """
    if bandwidth <= 0.0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DomainError("x must be a 1-d vector")
    diff = x[:, None] - x[None, :]
    return np.exp(-(diff * diff) / (2.0 * bandwidth * bandwidth))
