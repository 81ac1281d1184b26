"""Posterior summarization and the evaluation metrics of the experiments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import ChainOutput
from .errors import DomainError, InsufficientDrawsError

COLLAPSE_TAU = 1e-6
COLLAPSE_BETA_FRACTION = 0.01
MIN_DRAWS = 20


@dataclass
class PosteriorSummary:
    """Per-coefficient posterior summaries plus scalar parameter means.

    ``collapse`` flags the pathological regime where the posterior mean of
    the coefficient block is numerically null and the global scale has
    crashed (max_j |mean beta_j| < 0.01 sd(y) and mean tau < 1e-6).
    """

    beta_mean: np.ndarray
    beta_lo: np.ndarray
    beta_hi: np.ndarray
    sigma2_mean: float
    tau_mean: float
    xi_mean: float | None
    cor_lambda_tau: np.ndarray
    cor_lambda_xi: np.ndarray | None
    collapse: bool
    degenerate_correlations: bool
    n_draws: int
    diagnostics: dict = field(default_factory=dict)


def _safe_corr(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, bool]:
    """Columnwise Pearson correlation of a (d, p) block with a (d,) vector.

    Zero-variance columns yield 0 with a degeneracy flag instead of nan.
    """
    a = a - a.mean(axis=0)
    b = b - b.mean()
    sa = np.sqrt(np.sum(a * a, axis=0))
    sb = np.sqrt(np.sum(b * b))
    degenerate = (sa == 0.0) | (sb == 0.0)
    denom = np.where(degenerate, 1.0, sa * sb)
    cor = (a.T @ b) / denom
    cor[degenerate] = 0.0
    return cor, bool(degenerate.any())


def summarize(chain: ChainOutput) -> PosteriorSummary:
    """Means, 95% equal-tailed intervals, and posterior scale correlations.

    Quantiles use linear interpolation of the order statistics; the result
    is invariant to the order of the kept draws.
    """
    if chain.n_draws < MIN_DRAWS:
        raise InsufficientDrawsError(
            f"need at least {MIN_DRAWS} kept draws, got {chain.n_draws}"
        )
    beta_mean = chain.beta.mean(axis=0)
    beta_lo, beta_hi = np.quantile(chain.beta, [0.025, 0.975], axis=0, method="linear")
    cor_lt, degen_t = _safe_corr(chain.lam, chain.tau)
    if chain.xi is not None:
        cor_lx, degen_x = _safe_corr(chain.lam, chain.xi)
        xi_mean = float(chain.xi.mean())
    else:
        cor_lx, degen_x = None, False
        xi_mean = None
    tau_mean = float(chain.tau.mean())
    collapse = bool(
        np.max(np.abs(beta_mean)) < COLLAPSE_BETA_FRACTION * chain.y_sd
        and tau_mean < COLLAPSE_TAU
    )
    return PosteriorSummary(
        beta_mean=beta_mean,
        beta_lo=beta_lo,
        beta_hi=beta_hi,
        sigma2_mean=float(chain.sigma2.mean()),
        tau_mean=tau_mean,
        xi_mean=xi_mean,
        cor_lambda_tau=cor_lt,
        cor_lambda_xi=cor_lx,
        collapse=collapse,
        degenerate_correlations=degen_t or degen_x,
        n_draws=chain.n_draws,
        diagnostics=dict(chain.diagnostics),
    )


def mse_metrics(beta_hat, truth, q: int) -> tuple[float, float, float]:
    """(mse, mse_signal, mse_noise) against a q-ones-then-zeros truth.

    mse = (q * mse_s + (p - q) * mse_n) / p holds exactly.
    """
    beta_hat = np.asarray(beta_hat, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if beta_hat.shape != truth.shape or beta_hat.ndim != 1:
        raise DomainError("beta_hat and truth must be 1-d vectors of equal length")
    p = truth.size
    if not (0 <= q <= p):
        raise DomainError(f"q must lie in [0, p], got {q}")
    if np.any(truth[:q] != 1.0) or np.any(truth[q:] != 0.0):
        raise DomainError("truth must be q leading ones followed by zeros")
    mse = float(np.mean((beta_hat - truth) ** 2))
    mse_s = float(np.mean((beta_hat[:q] - 1.0) ** 2)) if q > 0 else 0.0
    mse_n = float(np.mean(beta_hat[q:] ** 2)) if q < p else 0.0
    return mse, mse_s, mse_n


def shrinkage_pairs(y, beta_hat) -> np.ndarray:
    """(y_j, beta_hat_j) pairs sorted by y_j, for the reversed-S plot."""
    y = np.asarray(y, dtype=float)
    beta_hat = np.asarray(beta_hat, dtype=float)
    if y.shape != beta_hat.shape or y.ndim != 1:
        raise DomainError("y and beta_hat must be 1-d vectors of equal length")
    order = np.argsort(y, kind="stable")
    return np.column_stack([y[order], beta_hat[order]])


def rank_coefficients(summary: PosteriorSummary, top_k: int) -> list[dict]:
    """Top coefficients by |posterior mean|, ties broken by index.

    Rows carry the (0-based) index, mean, interval, and sign; the ranking is
    invariant under positive rescaling of the means.
    """
    p = summary.beta_mean.size
    if not (0 <= top_k <= p):
        raise DomainError(f"top_k must lie in [0, p], got {top_k}")
    order = np.lexsort((np.arange(p), -np.abs(summary.beta_mean)))
    rows = []
    for idx in order[:top_k]:
        mean = float(summary.beta_mean[idx])
        rows.append(
            {
                "index": int(idx),
                "mean": mean,
                "lo": float(summary.beta_lo[idx]),
                "hi": float(summary.beta_hi[idx]),
                "sign": "-" if mean < 0 else "+",
            }
        )
    return rows
