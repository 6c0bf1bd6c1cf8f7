"""Run the full daily-close study on the bundled dataset.

Fits both models to the training window, writes every artifact the analysis
produces (chains, summaries, PACF tables, jump probabilities, fitted and
forecast bands) under --out, and prints a compact report including holdout
band coverage.

Usage: python3 scripts/run_study.py [--out results] [--seed 42]
                                    [--iters 5000] [--burnin 1000]
                                    [--level 0.90]
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gbmjump import (  # noqa: E402
    credible_band,
    fitted_realizations,
    forecast,
    load_price_series,
    mle_fit,
    pacf,
    run_gibbs,
    run_jump_gibbs,
    summarize,
    to_increments,
    write_band_csv,
    write_chain_csv,
)
from gbmjump.diagnostics import summary_to_dict, write_summary_csv  # noqa: E402
from gbmjump.rngs import derived_generator  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"


def print_summary(title: str, summary) -> None:
    print(f"\n{title}")
    print(f"{'parameter':<12}{'mean':>12}{'sd':>12}{'q2.5':>12}{'q50':>12}{'q97.5':>12}")
    for name, row in summary.rows.items():
        print(
            f"{name:<12}{row.mean:>12.4f}{row.sd:>12.4f}"
            f"{row.q2_5:>12.4f}{row.q50:>12.4f}{row.q97_5:>12.4f}"
        )


def band_coverage(band, prices) -> float:
    prices = np.asarray(prices, dtype=float)
    return float(np.mean((prices >= band.lower) & (prices <= band.upper)))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--iters", type=int, default=5000)
    parser.add_argument("--burnin", type=int, default=1000)
    parser.add_argument("--level", type=float, default=0.90)
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    train = load_price_series(DATA / "sp500_synthetic.csv")
    holdout = load_price_series(DATA / "sp500_synthetic_holdout.csv")
    inc = to_increments(train)
    print(
        f"training window: {len(train.prices)} closes "
        f"{train.dates[0]} .. {train.dates[-1]}"
    )

    fit = mle_fit(inc)
    print(
        f"closed-form MLE: mu_hat {fit.mu:.4f}  sigma_hat {fit.sigma:.4f} "
        f"(theta_hat {fit.theta:.4f}, sigma2_hat {fit.sigma2:.6f})"
    )

    report = {
        "seed": args.seed,
        "mle": {"mu": fit.mu, "sigma": fit.sigma},
        "models": {},
    }
    chains = {}
    for model, runner in (("gbm", run_gibbs), ("gbm-jump", run_jump_gibbs)):
        tag = model.replace("-", "_")
        t0 = time.perf_counter()
        chain = runner(inc, n_keep=args.iters, burn_in=args.burnin, seed=args.seed)
        elapsed = time.perf_counter() - t0
        chains[model] = chain
        summary = summarize(chain)
        print_summary(f"{model} posterior ({elapsed:.1f}s)", summary)
        write_chain_csv(chain, out / f"chain_{tag}.csv")
        write_summary_csv(summary, out / f"summary_{tag}.csv")
        lags = pacf(chain.column("mu"), max_lag=min(30, len(chain) - 2))
        with open(out / f"pacf_{tag}.csv", "w", newline="") as fh:
            fh.write("lag,pacf\n")
            for lag, value in enumerate(lags, start=1):
                fh.write(f"{lag},{float(value)!r}\n")
        report["models"][model] = {
            "seconds": elapsed,
            "summary": summary_to_dict(summary),
            "pacf_lag1": float(lags[0]),
        }

    jump_probs = chains["gbm-jump"].jump_probs
    with open(out / "jump_probs_gbm_jump.csv", "w", newline="") as fh:
        fh.write("date,probability\n")
        for date, p in zip(train.dates[1:], jump_probs):
            fh.write(f"{date.isoformat()},{float(p)!r}\n")
    flagged = int(np.sum(jump_probs > 0.5))
    print(f"\nincrements with posterior jump probability > 0.5: {flagged}")

    s_last = float(train.prices[-1])
    horizon = len(holdout.prices)
    for model, chain in chains.items():
        tag = model.replace("-", "_")
        ens = fitted_realizations(
            chain, inc, x0=float(train.prices[0]),
            rng=derived_generator(args.seed, stream=2),
        )
        band = credible_band(ens, level=args.level)
        write_band_csv(band, out / f"fitted_band_{tag}.csv", dates=train.dates)
        fitted_cov = band_coverage(band, train.prices)

        ens = forecast(
            chain, s_last=s_last, horizon_steps=horizon,
            rng=derived_generator(args.seed, stream=1),
        )
        band = credible_band(ens, level=args.level)
        write_band_csv(band, out / f"forecast_band_{tag}.csv", dates=holdout.dates)
        holdout_cov = band_coverage(band, holdout.prices)
        print(
            f"{model}: {args.level:.0%} band coverage, fitted {fitted_cov:.3f}, "
            f"{horizon}-day holdout {holdout_cov:.3f}"
        )
        report["models"][model]["fitted_coverage"] = fitted_cov
        report["models"][model]["holdout_coverage"] = holdout_cov

    with open(out / "study.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"\nartifacts written to {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
