"""Baseline horseshoe Gibbs sampler (auxiliary inverse-gamma mixture scheme).

Each unit half-Cauchy scale is represented as an inverse-gamma mixture
(x^2 | v ~ IG(1/2, 1/v), v ~ IG(1/2, 1)), giving closed-form conditionals
for the local scales, the global scale, and both auxiliaries.  The optional
truncated variant restricts the global scale to tau > 1/p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import backend_name
from .chains import ChainConfig, ChainOutput, RegressionData, gaussian_loglik
from .distributions import (
    invgamma_sample,
    invgamma_sample_truncated,
    make_rng,
    mvn_sample_posterior,
)
from .errors import DegenerateMassError, InvalidStateError, SamplerAbort

_RATE_FLOOR = 1e-300


@dataclass
class HsState:
    """Sampler state: coefficient block, scales, and IG-mixture auxiliaries."""

    beta: np.ndarray
    sigma2: float
    lam: np.ndarray
    tau: float
    nu: np.ndarray
    zeta: float

    def validate(self) -> None:
        if not np.all(np.isfinite(self.beta)):
            raise InvalidStateError("beta contains non-finite entries")
        for name, value in (("sigma2", self.sigma2), ("tau", self.tau), ("zeta", self.zeta)):
            if not (value > 0.0 and np.isfinite(value)):
                raise InvalidStateError(f"{name} must be positive, got {value}")
        if np.any(self.lam <= 0.0) or np.any(self.nu <= 0.0):
            raise InvalidStateError("scales and auxiliaries must be positive")


def init_hs_state(data: RegressionData) -> HsState:
    p = data.p
    var_y = float(np.var(data.y)) if data.n > 1 else 1.0
    return HsState(
        beta=np.zeros(p),
        sigma2=var_y if var_y > 0.0 else 1.0,
        lam=np.ones(p),
        tau=1.0,
        nu=np.ones(p),
        zeta=1.0,
    )


def hs_scan(
    state: HsState,
    data: RegressionData,
    rng: np.random.Generator,
    *,
    truncated_tau: bool = False,
    sigma2_prior: tuple[float, float] | None = None,
    xtx=None,
    xty=None,
    diag: dict | None = None,
) -> HsState:
    """One full conditional-conjugate scan; returns the new state."""
    p = data.p
    lam2 = state.lam * state.lam
    tau2 = state.tau * state.tau

    # coefficients: prior variance sigma2 * tau2 * lam2
    try:
        if data.identity_design:
            s = tau2 * lam2
            with np.errstate(over="ignore"):
                w = 1.0 / (1.0 + 1.0 / s)
            beta = data.y * w + np.sqrt(state.sigma2 * w) * rng.standard_normal(p)
        else:
            beta = mvn_sample_posterior(
                data.X, data.y, tau2 * lam2, state.sigma2, rng, xtx=xtx, xty=xty
            )
    except np.linalg.LinAlgError:
        if diag is not None:
            diag["factorization_failures"] = diag.get("factorization_failures", 0) + 1
        beta = state.beta

    # noise variance
    resid = data.y - data.predict(beta)
    with np.errstate(over="ignore", divide="ignore"):
        quad_form = float(np.sum(beta * beta / (tau2 * lam2)))
    shape = 0.5 * (data.n + p)
    rate = 0.5 * (float(resid @ resid) + quad_form)
    if sigma2_prior is not None:
        shape += sigma2_prior[0]
        rate += sigma2_prior[1]
    if rate < _RATE_FLOOR:
        rate = _RATE_FLOOR
        if diag is not None:
            diag["sigma2_rate_floored"] = diag.get("sigma2_rate_floored", 0) + 1
    sigma2 = invgamma_sample(shape, rate, rng)

    # local scales and their auxiliaries (IG(1, .) draws, vectorized)
    rate_lam = 1.0 / state.nu + beta * beta / (2.0 * tau2 * sigma2)
    lam2 = rate_lam / rng.standard_exponential(p)
    nu = (1.0 + 1.0 / lam2) / rng.standard_exponential(p)

    # global scale and its auxiliary
    rate_tau = 1.0 / state.zeta + float(np.sum(beta * beta / lam2)) / (2.0 * sigma2)
    if truncated_tau:
        try:
            tau2 = invgamma_sample_truncated(
                0.5 * (p + 1.0), rate_tau, 1.0 / (p * p), np.inf, rng
            )
        except DegenerateMassError:
            tau2 = state.tau * state.tau
            if diag is not None:
                diag["tau_degenerate"] = diag.get("tau_degenerate", 0) + 1
    else:
        tau2 = invgamma_sample(0.5 * (p + 1.0), rate_tau, rng)
    zeta = (1.0 + 1.0 / tau2) / rng.standard_exponential()

    return HsState(beta, sigma2, np.sqrt(lam2), np.sqrt(tau2), nu, zeta)


def run_hs_chain(
    data: RegressionData, config: ChainConfig, truncated_tau: bool = False
) -> ChainOutput:
    """Thinned posterior draws of (beta, sigma2, lambda, tau); seeded."""
    rng = make_rng(config.seed)
    state = init_hs_state(data)
    p = data.p
    xtx = xty = None
    if not data.identity_design and p <= 2 * data.n:
        xtx = data.X.T @ data.X
        xty = data.X.T @ data.y

    n_draws = config.n_draws
    beta_d = np.empty((n_draws, p))
    sigma2_d = np.empty(n_draws)
    lam_d = np.empty((n_draws, p))
    tau_d = np.empty(n_draws)
    ll_d = np.empty(n_draws)
    diag: dict = {"backend": backend_name()}

    total = config.burn + config.keep
    stored = 0
    for it in range(total):
        state = hs_scan(
            state, data, rng,
            truncated_tau=truncated_tau, xtx=xtx, xty=xty, diag=diag,
        )
        failures = diag.get("factorization_failures", 0)
        if failures > max(1, 0.01 * total):
            raise SamplerAbort(
                f"aborting: {failures} factorization failures in {it + 1} iterations"
            )
        if it >= config.burn and (it - config.burn + 1) % config.thin == 0:
            beta_d[stored] = state.beta
            sigma2_d[stored] = state.sigma2
            lam_d[stored] = state.lam
            tau_d[stored] = state.tau
            ll_d[stored] = gaussian_loglik(data, state.beta, state.sigma2)
            stored += 1
    assert stored == n_draws

    return ChainOutput(
        prior="horseshoe-truncated" if truncated_tau else "horseshoe",
        beta=beta_d,
        sigma2=sigma2_d,
        lam=lam_d,
        tau=tau_d,
        xi=None,
        loglik=ll_d,
        config=config,
        y_sd=float(np.std(data.y)),
        diagnostics=diag,
    )
