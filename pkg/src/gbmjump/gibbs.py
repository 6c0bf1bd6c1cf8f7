"""Conjugate Gibbs sampling for the no-jump model.

Conditionals under d_i ~ Normal(theta*dt_i, sigma2*dt_i) with a Normal prior on
theta and an inverse-gamma prior on sigma2 (IG(a, b) has density proportional
to x^{-a-1} exp(-b/x), mean b/(a-1) for a > 1):

  theta | sigma2  ~  Normal(m, v),
      1/v = 1/theta_var + sum(dt)/sigma2
      m   = v * (theta_mean/theta_var + sum(d)/sigma2)
  sigma2 | theta  ~  IG(ig_shape + n/2, ig_scale + 0.5 * sum (d - theta*dt)^2 / dt)

With theta_mean = 0, theta_var = 100 the first reduces to the familiar
m = sum(d) / (0.01*sigma2 + sum(dt)), v = sigma2 / (0.01*sigma2 + sum(dt)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .gbm import mle_fit
from .rngs import as_generator
from .series import IncrementSeries


@dataclass(frozen=True)
class GbmPrior:
    theta_mean: float = 0.0
    theta_var: float = 100.0
    ig_shape: float = 2.0
    ig_scale: float = 0.001

    def __post_init__(self) -> None:
        if self.theta_var <= 0.0 or self.ig_shape <= 0.0 or self.ig_scale <= 0.0:
            raise ValueError("prior variance, shape and scale must be positive")

    def sigma2_center(self) -> float:
        """Prior mean of sigma2 when it exists, else the scale."""
        if self.ig_shape > 1.0:
            return self.ig_scale / (self.ig_shape - 1.0)
        return self.ig_scale


class _SuffStats(NamedTuple):
    """Everything the conditionals need: n, sum d, sum dt, sum d^2/dt."""

    n: int
    sd: float
    st: float
    sdd: float

    @classmethod
    def of(cls, inc: IncrementSeries) -> "_SuffStats":
        return cls(
            n=inc.n,
            sd=float(np.sum(inc.d)),
            st=float(np.sum(inc.dt)),
            sdd=float(np.sum(inc.d * inc.d / inc.dt)) if inc.n else 0.0,
        )


def _theta_conditional(stats: _SuffStats, sigma2: float, prior: GbmPrior):
    if sigma2 <= 0.0:
        raise ValueError("sigma2 must be positive")
    prec = 1.0 / prior.theta_var + stats.st / sigma2
    mean = (prior.theta_mean / prior.theta_var + stats.sd / sigma2) / prec
    return mean, 1.0 / prec


def _sigma2_conditional(stats: _SuffStats, theta: float, prior: GbmPrior):
    rss = stats.sdd - 2.0 * theta * stats.sd + theta * theta * stats.st
    return prior.ig_shape + 0.5 * stats.n, prior.ig_scale + 0.5 * rss


def theta_conditional(inc: IncrementSeries, sigma2: float, prior: GbmPrior = GbmPrior()):
    """(mean, variance) of theta | sigma2, data."""
    return _theta_conditional(_SuffStats.of(inc), sigma2, prior)


def sigma2_conditional(inc: IncrementSeries, theta: float, prior: GbmPrior = GbmPrior()):
    """(shape, scale) of the inverse-gamma sigma2 | theta, data."""
    return _sigma2_conditional(_SuffStats.of(inc), theta, prior)


def sample_inverse_gamma(shape: float, scale: float, rng=None) -> float:
    """One draw from IG(shape, scale), via the reciprocal of a gamma draw."""
    if shape <= 0.0 or scale <= 0.0:
        raise ValueError("shape and scale must be positive")
    gen = as_generator(rng)
    return float(scale / gen.gamma(shape))


def sample_theta_given_sigma2(
    inc: IncrementSeries, sigma2: float, prior: GbmPrior = GbmPrior(), rng=None
) -> float:
    mean, var = theta_conditional(inc, sigma2, prior)
    return float(mean + math.sqrt(var) * as_generator(rng).standard_normal())


def sample_sigma2_given_theta(
    inc: IncrementSeries, theta: float, prior: GbmPrior = GbmPrior(), rng=None
) -> float:
    shape, scale = sigma2_conditional(inc, theta, prior)
    return sample_inverse_gamma(shape, scale, rng)


@dataclass(frozen=True)
class ChainMeta:
    model: str
    n_keep: int
    burn_in: int
    seed: int | None


_DERIVED = {
    "mu": ("theta", "sigma2"),
    "sigma": ("sigma2",),
    "sigma_z": ("sigma2_z",),
}


@dataclass
class PosteriorChain:
    """Retained Gibbs draws, one row per sweep after burn-in.

    column() also serves the derived names mu = theta + sigma2/2,
    sigma = sqrt(sigma2) and sigma_z = sqrt(sigma2_z).
    """

    columns: tuple[str, ...]
    draws: np.ndarray
    meta: ChainMeta
    jump_probs: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.draws = np.asarray(self.draws, dtype=float)
        if self.draws.ndim != 2 or self.draws.shape[1] != len(self.columns):
            raise ValueError("draws must be (n_keep, len(columns))")
        if self.draws.shape[0] != self.meta.n_keep:
            raise ValueError("row count does not match meta.n_keep")
        if "sigma2" in self.columns and np.any(self.column("sigma2") <= 0.0):
            raise ValueError("non-positive sigma2 draw")

    def __len__(self) -> int:
        return self.draws.shape[0]

    def column(self, name: str) -> np.ndarray:
        if name in self.columns:
            return self.draws[:, self.columns.index(name)]
        if name == "mu":
            return self.column("theta") + 0.5 * self.column("sigma2")
        if name == "sigma":
            return np.sqrt(self.column("sigma2"))
        if name == "sigma_z":
            return np.sqrt(self.column("sigma2_z"))
        raise KeyError(name)


def run_gibbs(
    inc: IncrementSeries,
    prior: GbmPrior = GbmPrior(),
    n_keep: int = 5000,
    burn_in: int = 1000,
    seed: int | None = None,
) -> PosteriorChain:
    """Systematic-scan Gibbs for (theta, sigma2), initialized at the MLE.

    Draws theta | sigma2 then sigma2 | theta each sweep; records n_keep sweeps
    after burn_in. Empty or single-increment data fall back to a prior-centered
    start (the conditionals then reproduce the prior exactly when n == 0).
    """
    if n_keep < 1 or burn_in < 0:
        raise ValueError("need n_keep >= 1 and burn_in >= 0")
    if inc.n >= 2:
        start = mle_fit(inc)
        if start.degenerate:
            raise ValueError("degenerate data: sample volatility is zero")
        theta, sigma2 = start.theta, start.sigma2
    else:
        theta, sigma2 = prior.theta_mean, prior.sigma2_center()
    stats = _SuffStats.of(inc)
    gen = as_generator(seed)
    draws = np.empty((n_keep, 2))
    for sweep in range(burn_in + n_keep):
        mean, var = _theta_conditional(stats, sigma2, prior)
        theta = mean + math.sqrt(var) * gen.standard_normal()
        shape, scale = _sigma2_conditional(stats, theta, prior)
        sigma2 = scale / gen.gamma(shape)
        if sweep >= burn_in:
            draws[sweep - burn_in] = (theta, sigma2)
    meta = ChainMeta(model="gbm", n_keep=n_keep, burn_in=burn_in, seed=seed)
    return PosteriorChain(columns=("theta", "sigma2"), draws=draws, meta=meta)


def to_drift_diffusion(chain: PosteriorChain) -> np.ndarray:
    """Map draws to (mu, sigma) rows: mu = theta + sigma2/2, sigma = sqrt(sigma2)."""
    return np.column_stack((chain.column("mu"), chain.column("sigma")))


_EXPORT_COLUMNS = {
    "gbm": ("theta", "sigma2", "mu", "sigma"),
    "gbm-jump": (
        "theta", "sigma2", "mu", "sigma",
        "mu_z", "sigma_z", "lambda_star", "n_jumps",
    ),
}


def write_chain_csv(chain: PosteriorChain, path) -> None:
    """One row per draw with a '# key: value' metadata header block."""
    cols = _EXPORT_COLUMNS[chain.meta.model]
    header = [
        f"# model: {chain.meta.model}",
        f"# n_keep: {chain.meta.n_keep}",
        f"# burn_in: {chain.meta.burn_in}",
        f"# seed: {chain.meta.seed}",
    ]
    body = np.column_stack([chain.column(c) for c in cols])
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(header) + "\n")
        fh.write(",".join(cols) + "\n")
        for row in body:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_chain_csv(path) -> PosteriorChain:
    """Inverse of write_chain_csv; reconstructs sigma2_z from sigma_z."""
    meta_raw: dict[str, str] = {}
    with open(path) as fh:
        line = fh.readline()
        while line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta_raw[key.strip()] = value.strip()
            line = fh.readline()
        cols = tuple(line.strip().split(","))
        body = np.loadtxt(fh, delimiter=",", ndmin=2)
    model = meta_raw.get("model", "gbm")
    seed_raw = meta_raw.get("seed", "None")
    meta = ChainMeta(
        model=model,
        n_keep=body.shape[0],
        burn_in=int(meta_raw.get("burn_in", 0)),
        seed=None if seed_raw == "None" else int(seed_raw),
    )
    take = {c: body[:, i] for i, c in enumerate(cols)}
    stored = ["theta", "sigma2"]
    if model == "gbm-jump":
        take["sigma2_z"] = take["sigma_z"] ** 2
        stored += ["mu_z", "sigma2_z", "lambda_star", "n_jumps"]
    draws = np.column_stack([take[c] for c in stored])
    return PosteriorChain(columns=tuple(stored), draws=draws, meta=meta)
