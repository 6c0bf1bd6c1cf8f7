"""Chain summaries and convergence diagnostics."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .gibbs import PosteriorChain

DEFAULT_PARAMS = {
    "gbm": ("mu", "sigma"),
    "gbm-jump": ("mu", "sigma", "mu_z", "sigma_z", "lambda_star"),
}


@dataclass(frozen=True)
class ParamSummary:
    mean: float
    sd: float
    q2_5: float
    q50: float
    q97_5: float


@dataclass(frozen=True)
class Summary:
    """Per-parameter posterior summary table."""

    rows: dict[str, ParamSummary]

    def __getitem__(self, name: str) -> ParamSummary:
        return self.rows[name]


def summarize_draws(draws) -> ParamSummary:
    """Mean, SD (n-1 divisor) and linear-interpolation quantiles of one chain."""
    x = np.asarray(draws, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-d sample of at least two draws")
    q = np.quantile(x, [0.025, 0.5, 0.975])
    return ParamSummary(
        mean=float(x.mean()),
        sd=float(x.std(ddof=1)),
        q2_5=float(q[0]),
        q50=float(q[1]),
        q97_5=float(q[2]),
    )


def summarize(chain: PosteriorChain, parameters=None) -> Summary:
    """Summary of selected (possibly derived) chain columns.

    Defaults to the reporting set for the chain's model: (mu, sigma) for gbm,
    plus (mu_z, sigma_z, lambda_star) for gbm-jump.
    """
    if parameters is None:
        parameters = DEFAULT_PARAMS[chain.meta.model]
    return Summary(rows={p: summarize_draws(chain.column(p)) for p in parameters})


def pacf(series, max_lag: int) -> np.ndarray:
    """Partial autocorrelations at lags 1..max_lag via Durbin-Levinson.

    Runs the standard recursion on sample autocorrelations (autocovariances with
    the 1/n divisor). Requires len(series) > max_lag + 1 and nonzero variance.
    """
    x = np.asarray(series, dtype=float)
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    n = x.size
    if n <= max_lag + 1:
        raise ValueError(f"series of length {n} too short for max_lag {max_lag}")
    centered = x - x.mean()
    acov = np.array(
        [np.dot(centered[: n - k], centered[k:]) / n for k in range(max_lag + 1)]
    )
    if acov[0] <= 0.0:
        raise ValueError("series has zero variance")
    rho = acov / acov[0]
    out = np.empty(max_lag)
    phi_prev = np.empty(max_lag)  # phi_{k-1, 1..k-1}
    for k in range(1, max_lag + 1):
        if k == 1:
            phi_kk = rho[1]
        else:
            head = phi_prev[: k - 1]
            num = rho[k] - np.dot(head, rho[k - 1 : 0 : -1])
            den = 1.0 - np.dot(head, rho[1:k])
            phi_kk = num / den
        out[k - 1] = phi_kk
        if k > 1:
            phi_prev[: k - 1] = phi_prev[: k - 1] - phi_kk * phi_prev[k - 2 :: -1]
        phi_prev[k - 1] = phi_kk
    return out


def coefficient_of_variation(draws) -> float:
    """SD (n-1 divisor) over |mean|; rejects mean == 0."""
    x = np.asarray(draws, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-d sample of at least two draws")
    mean = float(x.mean())
    if mean == 0.0:
        raise ValueError("coefficient of variation undefined for zero mean")
    return float(x.std(ddof=1) / abs(mean))


def summary_to_dict(summary: Summary) -> dict:
    return {name: asdict(row) for name, row in summary.rows.items()}


def write_summary_csv(summary: Summary, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("parameter,mean,sd,q2_5,q50,q97_5\n")
        for name, row in summary.rows.items():
            cells = (name, *(repr(v) for v in (row.mean, row.sd, row.q2_5, row.q50, row.q97_5)))
            fh.write(",".join(cells) + "\n")


def write_summary_json(summary: Summary, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary_to_dict(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
