"""Shared chain plumbing: data container, configuration, and output."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass
class RegressionData:
    """Response y and design X for y = X beta + sigma eps.

    ``identity_design=True`` marks the normal-means model (X implicit, n = p)
    which the samplers update in O(p) per iteration.
    """

    y: np.ndarray
    X: np.ndarray | None = None
    identity_design: bool = False

    def __post_init__(self):
        self.y = np.ascontiguousarray(self.y, dtype=float)
        if self.y.ndim != 1 or self.y.size < 1:
            raise DomainError("y must be a non-empty 1-d vector")
        if not np.all(np.isfinite(self.y)):
            raise DomainError("y contains non-finite entries")
        if self.identity_design:
            if self.X is not None:
                raise DomainError("identity_design data must not carry an explicit X")
        else:
            if self.X is None:
                raise DomainError("X is required unless identity_design is set")
            self.X = np.ascontiguousarray(self.X, dtype=float)
            if self.X.ndim != 2 or self.X.shape[0] != self.y.size:
                raise DomainError(
                    f"X must be n x p with n = len(y); got {self.X.shape} vs n = {self.y.size}"
                )
            if not np.all(np.isfinite(self.X)):
                raise DomainError("X contains non-finite entries")

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def p(self) -> int:
        return self.y.size if self.identity_design else self.X.shape[1]

    def predict(self, beta: np.ndarray) -> np.ndarray:
        return beta if self.identity_design else self.X @ beta


@dataclass(frozen=True)
class ChainConfig:
    """MCMC run settings; the defaults mirror the reference protocol."""

    burn: int = 10000
    keep: int = 10000
    thin: int = 100
    seed: int = 0
    rho2: float = 0.001
    xi_floor: float = 0.5

    def __post_init__(self):
        if self.burn < 0:
            raise DomainError(f"burn must be >= 0, got {self.burn}")
        if self.keep < 1 or self.thin < 1:
            raise DomainError("keep and thin must be positive")
        if self.keep % self.thin != 0:
            raise DomainError(
                f"keep ({self.keep}) must be a multiple of thin ({self.thin})"
            )
        if not (self.rho2 > 0.0):
            raise DomainError(f"rho2 must be positive, got {self.rho2}")
        if not (0 <= self.seed < 2**64):
            raise DomainError("seed must fit in 64 unsigned bits")

    @property
    def n_draws(self) -> int:
        return self.keep // self.thin


@dataclass
class ChainOutput:
    """Thinned draws plus per-draw log-likelihood and run diagnostics."""

    prior: str
    beta: np.ndarray
    sigma2: np.ndarray
    lam: np.ndarray
    tau: np.ndarray
    xi: np.ndarray | None
    loglik: np.ndarray
    config: ChainConfig
    y_sd: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_draws(self) -> int:
        return self.beta.shape[0]

    @property
    def p(self) -> int:
        return self.beta.shape[1]


def gaussian_loglik(data: RegressionData, beta: np.ndarray, sigma2: float) -> float:
    resid = data.y - data.predict(beta)
    n = data.n
    return -0.5 * n * math.log(2.0 * math.pi * sigma2) - float(resid @ resid) / (2.0 * sigma2)
