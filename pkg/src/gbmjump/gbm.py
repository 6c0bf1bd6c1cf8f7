"""Geometric Brownian motion: exact transition density, closed-form MLE, simulation.

Parameterization is (theta, sigma2) with theta = mu - sigma2/2, so log-increments
over a step dt are Normal(theta*dt, sigma2*dt) and the price solution is
x0 * exp(theta*t + sigma*B_t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rngs import as_generator
from .series import IncrementSeries

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GbmParams:
    """Drift (log-scale) and squared volatility, both per year.

    sigma2 == 0 is permitted so the degenerate MLE of a noise-free series can be
    represented; densities refuse it, simulation treats it as a deterministic path.
    """

    theta: float
    sigma2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.sigma2)):
            raise ValueError("parameters must be finite")
        if self.sigma2 < 0.0:
            raise ValueError(f"sigma2 must be >= 0, got {self.sigma2}")

    @property
    def mu(self) -> float:
        """Arithmetic drift mu = theta + sigma2/2."""
        return self.theta + 0.5 * self.sigma2

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def degenerate(self) -> bool:
        return self.sigma2 == 0.0


def transition_logpdf(d, dt, params: GbmParams):
    """Exact log-density of a log-increment d over duration dt.

    Vectorizes over d and dt. Requires sigma2 > 0 and dt > 0.
    """
    if params.degenerate:
        raise ValueError("transition density undefined for sigma2 == 0")
    d = np.asarray(d, dtype=float)
    dt = np.asarray(dt, dtype=float)
    if np.any(dt <= 0.0):
        raise ValueError("dt must be positive")
    var = params.sigma2 * dt
    resid = d - params.theta * dt
    return -0.5 * (LOG_2PI + np.log(var)) - 0.5 * resid * resid / var


def log_likelihood(inc: IncrementSeries, params: GbmParams) -> float:
    """Sum of transition log-densities over a non-empty increment series."""
    if inc.n == 0:
        raise ValueError("log_likelihood needs at least one increment")
    return float(np.sum(transition_logpdf(inc.d, inc.dt, params)))


def mle_fit(inc: IncrementSeries) -> GbmParams:
    """Closed-form maximizer of the exact likelihood.

    theta_hat = (y_n - y_0) / (t_n - t_0)
    sigma2_hat = (1/n) * [ sum d_i^2/dt_i - (y_n - y_0)^2 / (t_n - t_0) ]

    The 1/n divisor is the plain MLE, no bias correction. A series whose
    increments are exactly proportional to dt yields sigma2_hat == 0; the
    result carries params.degenerate == True rather than raising.
    """
    n = inc.n
    if n < 2:
        raise ValueError(f"MLE needs n >= 2 increments, got {n}")
    sd = float(np.sum(inc.d))
    st = float(np.sum(inc.dt))
    sdd = float(np.sum(inc.d * inc.d / inc.dt))
    theta = sd / st
    sigma2 = (sdd - sd * sd / st) / n
    if sigma2 < 0.0:  # roundoff from cancellation; the true value is >= 0
        sigma2 = 0.0
    return GbmParams(theta=theta, sigma2=sigma2)


def simulate_gbm_path(x0: float, params: GbmParams, grid, rng=None) -> np.ndarray:
    """Sample one exact path on an increasing time grid, anchored at grid[0].

    Returns an array of len(grid) values with path[0] == x0. With sigma2 == 0
    the path is the deterministic x0 * exp(theta * (t - grid[0])).
    """
    if x0 <= 0.0:
        raise ValueError("x0 must be positive")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 1:
        raise ValueError("grid must be a non-empty 1-d array")
    steps = np.diff(grid)
    if np.any(steps <= 0.0):
        raise ValueError("grid must be strictly increasing")
    incs = params.theta * steps
    if params.sigma2 > 0.0:
        gen = as_generator(rng)
        incs = incs + np.sqrt(params.sigma2 * steps) * gen.standard_normal(len(steps))
    y = math.log(x0) + np.concatenate(([0.0], np.cumsum(incs)))
    return np.exp(y)
