"""Hill estimator of the local-scale tail shape and the derived ESS center.

The whole estimator family over k = 2..p is computed in one sort plus a
prefix sum of logs, cheap enough to run inside every Gibbs iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MU_FLOOR = 1e-8


@dataclass(frozen=True)
class HillWindow:
    """Inclusive k-range over which the Hill estimates are averaged."""

    k_lo: int
    k_hi: int

    def __post_init__(self):
        if not (2 <= self.k_lo <= self.k_hi):
            raise DomainError(f"need 2 <= k_lo <= k_hi, got ({self.k_lo}, {self.k_hi})")


def default_window(p: int) -> HillWindow:
    """p/10 .. 9p/10 window, clamped so it stays valid for small p."""
    k_lo = max(2, p // 10)
    k_hi = min(max(k_lo, (9 * p) // 10), p)
    return HillWindow(k_lo, k_hi)


def hill_estimates(lambdas) -> np.ndarray:
    """Tail-shape estimates from the k upper order statistics, k = 2..p.

    Entry i is the estimate at k = i + 2: the mean of
    log(lambda_(j) / lambda_(k)) over the j < k descending order statistics.
    Scale invariant, permutation invariant, and nonnegative.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size < 2:
        raise DomainError("need a 1-d vector with at least two entries")
    if np.any(~np.isfinite(lam)) or np.any(lam <= 0.0):
        raise DomainError("all entries must be finite and strictly positive")
    logs = np.log(np.sort(lam)[::-1])
    k = np.arange(2, lam.size + 1)
    estimates = np.cumsum(logs[:-1]) / (k - 1) - logs[1:]
    return np.maximum(estimates, 0.0)


def calibrated_mu(lambdas, window: HillWindow | None = None) -> float:
    """log of the window-averaged Hill estimate, floored at log(1e-8).

    The floor keeps the slice-sampler center finite when the scales are all
    (numerically) equal and every log-ratio vanishes.
    """
    lam = np.asarray(lambdas, dtype=float)
    if window is None:
        window = default_window(lam.size)
    if window.k_hi > lam.size:
        raise DomainError(f"window {window} exceeds p = {lam.size}")
    estimates = hill_estimates(lam)
    mean = float(np.mean(estimates[window.k_lo - 2 : window.k_hi - 1]))
    if mean <= MU_FLOOR:
        return float(np.log(MU_FLOOR))
    return float(np.log(mean))
