"""Elliptical slice sampling for a scalar with a Gaussian prior.

Rejection-free: a rejected angle shrinks the bracket towards the current
state instead of repeating it, so every call moves (up to the pathological
bracket-collapse fallback, which is counted rather than fatal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, InvalidStateError


@dataclass(frozen=True)
class EllipseSpec:
    """Gaussian prior N(center, variance) defining the ellipse."""

    center: float
    variance: float = 0.001

    def __post_init__(self):
        if not (self.variance > 0.0 and np.isfinite(self.variance)):
            raise DomainError(f"variance must be positive, got {self.variance}")


class EssStepResult(NamedTuple):
    eta: float
    loops: int
    collapsed: bool


def ess_step(
    eta_current: float,
    spec: EllipseSpec,
    log_lik: Callable[[float], float],
    rng: np.random.Generator,
    max_shrink: int = 1000,
) -> EssStepResult:
    """One slice move on the ellipse through eta_current and a prior draw.

    The threshold u is drawn once and fixed; the angle bracket starts at
    (-pi, pi] and each rejection pins the side of the failed angle.  After
    ``max_shrink`` rejections the bracket has collapsed numerically and the
    current state is returned with ``collapsed=True``.
    """
    ll_current = log_lik(eta_current)
    if not np.isfinite(ll_current):
        raise InvalidStateError(
            f"log-likelihood at the current state is not finite ({ll_current})"
        )
    mu = spec.center
    nu = mu + math.sqrt(spec.variance) * rng.standard_normal()
    u = rng.random()
    log_u = math.log(u) if u > 0.0 else -math.inf
    theta = rng.uniform(-math.pi, math.pi)
    theta_min, theta_max = -math.pi, math.pi

    for loops in range(1, max_shrink + 1):
        eta_star = (eta_current - mu) * math.cos(theta) + (nu - mu) * math.sin(theta) + mu
        if log_u < log_lik(eta_star) - ll_current:
            return EssStepResult(eta_star, loops, False)
        if theta > 0.0:
            theta_max = theta
        else:
            theta_min = theta
        theta = rng.uniform(theta_min, theta_max)
    return EssStepResult(eta_current, max_shrink, True)
