"""Command-line interface: mle, fit, and forecast subcommands.

Option precedence is flags > GBMJUMP_* environment variables > --config JSON
file > built-in defaults. Identical configuration plus identical seed yields
byte-identical output files.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .diagnostics import pacf, summarize, write_summary_csv, write_summary_json
from .gbm import mle_fit
from .gibbs import read_chain_csv, run_gibbs, write_chain_csv
from .jumps import run_jump_gibbs
from .predict import credible_band, fitted_realizations, forecast, write_band_csv
from .rngs import derived_generator
from .series import load_price_series, to_increments

ENV_PREFIX = "GBMJUMP_"
MODELS = ("gbm", "gbm-jump")
FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    input: str | None = None
    model: str = "gbm"
    iters: int = 5000
    burnin: int = 1000
    seed: int | None = None
    days_per_year: int = 252
    horizon: int = 40
    level: float = 0.90
    out: str | None = None
    format: str = "csv"
    chain: str | None = None
    fitted_band: bool = False

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}, expected one of {MODELS}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}, expected one of {FORMATS}")
        if self.iters < 1:
            raise ValueError("iters must be >= 1")
        if self.burnin < 0:
            raise ValueError("burnin must be >= 0")
        if self.days_per_year < 1:
            raise ValueError("days-per-year must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie strictly in (0, 1)")


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_INT_FIELDS = {"iters", "burnin", "seed", "days_per_year", "horizon"}
_FLOAT_FIELDS = {"level"}
_BOOL_FIELDS = {"fitted_band"}


def _coerce(name: str, raw):
    if isinstance(raw, str):
        if name in _INT_FIELDS:
            return int(raw)
        if name in _FLOAT_FIELDS:
            return float(raw)
        if name in _BOOL_FIELDS:
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes"):
                return True
            if lowered in ("0", "false", "no"):
                return False
            raise ValueError(f"bad boolean for {name}: {raw!r}")
    return raw


def _load_config_file(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = set(data) - set(_FIELD_TYPES)
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    return data


def build_config(flag_values: dict, config_path: str | None, env=None) -> RunConfig:
    """Layer defaults < config file < environment < explicit flags."""
    env = os.environ if env is None else env
    cfg = RunConfig()
    if config_path is not None:
        for key, value in _load_config_file(config_path).items():
            setattr(cfg, key, _coerce(key, value))
    for name in _FIELD_TYPES:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            setattr(cfg, name, _coerce(name, raw))
    for name, value in flag_values.items():
        if value is not None:
            setattr(cfg, name, value)
    cfg.validate()
    return cfg


def _load_increments(cfg: RunConfig):
    if cfg.input is None:
        raise ValueError("--input is required")
    series = load_price_series(cfg.input)
    return series, to_increments(series, days_per_year=cfg.days_per_year)


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out if cfg.out is not None else ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _run_fit(inc, cfg: RunConfig):
    if cfg.model == "gbm":
        return run_gibbs(inc, n_keep=cfg.iters, burn_in=cfg.burnin, seed=cfg.seed)
    return run_jump_gibbs(inc, n_keep=cfg.iters, burn_in=cfg.burnin, seed=cfg.seed)


def cmd_mle(cfg: RunConfig) -> int:
    _, inc = _load_increments(cfg)
    params = mle_fit(inc)
    if params.degenerate:
        print("warning: degenerate fit, sample volatility is zero", file=sys.stderr)
    print(
        f"theta_hat={params.theta:.6f} sigma2_hat={params.sigma2:.6f} "
        f"mu_hat={params.mu:.6f} sigma_hat={params.sigma:.6f}"
    )
    if cfg.out is not None:
        out = _out_dir(cfg)
        values = {
            "theta_hat": params.theta,
            "sigma2_hat": params.sigma2,
            "mu_hat": params.mu,
            "sigma_hat": params.sigma,
            "degenerate": params.degenerate,
        }
        if cfg.format == "json":
            with open(out / "mle.json", "w") as fh:
                json.dump(values, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            with open(out / "mle.csv", "w", newline="") as fh:
                fh.write("quantity,value\n")
                for key, val in values.items():
                    fh.write(f"{key},{val!r}\n")
    return 0


def _print_summary(summary) -> None:
    print(f"{'parameter':<12}{'mean':>12}{'sd':>12}{'q2.5':>12}{'q50':>12}{'q97.5':>12}")
    for name, row in summary.rows.items():
        print(
            f"{name:<12}{row.mean:>12.4f}{row.sd:>12.4f}"
            f"{row.q2_5:>12.4f}{row.q50:>12.4f}{row.q97_5:>12.4f}"
        )


def cmd_fit(cfg: RunConfig) -> int:
    _, inc = _load_increments(cfg)
    chain = _run_fit(inc, cfg)
    summary = summarize(chain)
    _print_summary(summary)
    out = _out_dir(cfg)
    tag = cfg.model.replace("-", "_")
    write_chain_csv(chain, out / f"chain_{tag}.csv")
    if cfg.format == "json":
        write_summary_json(summary, out / f"summary_{tag}.json")
    else:
        write_summary_csv(summary, out / f"summary_{tag}.csv")
    max_lag = min(30, len(chain) - 2)
    if max_lag >= 1:
        lags = pacf(chain.column("mu"), max_lag=max_lag)
        with open(out / f"pacf_{tag}.csv", "w", newline="") as fh:
            fh.write("lag,pacf\n")
            for lag, value in enumerate(lags, start=1):
                fh.write(f"{lag},{float(value)!r}\n")
    if chain.jump_probs is not None:
        with open(out / f"jump_probs_{tag}.csv", "w", newline="") as fh:
            fh.write("index,probability\n")
            for i, p in enumerate(chain.jump_probs):
                fh.write(f"{i},{float(p)!r}\n")
    return 0


def _next_weekdays(start: dt.date, count: int) -> list[dt.date]:
    """Trading-style date stamps for forecast rows: weekdays after start."""
    days = []
    cursor = start
    while len(days) < count:
        cursor += dt.timedelta(days=1)
        if cursor.weekday() < 5:
            days.append(cursor)
    return days


def cmd_forecast(cfg: RunConfig) -> int:
    series, inc = _load_increments(cfg)
    if cfg.chain is not None:
        chain = read_chain_csv(cfg.chain)
        if chain.meta.model != cfg.model:
            raise ValueError(
                f"chain file holds model {chain.meta.model!r}, requested {cfg.model!r}"
            )
    else:
        chain = _run_fit(inc, cfg)
    out = _out_dir(cfg)
    tag = cfg.model.replace("-", "_")
    rng = derived_generator(cfg.seed, stream=1)
    ens = forecast(
        chain,
        s_last=float(series.prices[-1]),
        horizon_steps=cfg.horizon,
        dt=1.0 / cfg.days_per_year,
        rng=rng,
    )
    band = credible_band(ens, level=cfg.level)
    dates = _next_weekdays(series.dates[-1], cfg.horizon)
    write_band_csv(band, out / f"forecast_band_{tag}.csv", dates=dates)
    print(
        f"forecast written: {cfg.horizon} steps, level {cfg.level}, "
        f"final mean {band.mean[-1]:.2f}"
    )
    if cfg.fitted_band:
        rng = derived_generator(cfg.seed, stream=2)
        fitted = fitted_realizations(chain, inc, x0=float(series.prices[0]), rng=rng)
        fitted_band = credible_band(fitted, level=cfg.level)
        write_band_csv(fitted_band, out / f"fitted_band_{tag}.csv", dates=series.dates)
    return 0


def _add_common(parser: argparse.ArgumentParser, forecast_opts: bool) -> None:
    parser.add_argument("--input", help="price CSV with date and close columns")
    parser.add_argument("--config", help="JSON file of option defaults")
    parser.add_argument("--days-per-year", dest="days_per_year", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=FORMATS)
    parser.add_argument("--model", choices=MODELS)
    parser.add_argument("--iters", type=int, help="retained draws")
    parser.add_argument("--burnin", type=int, help="discarded initial sweeps")
    parser.add_argument("--seed", type=int)
    if forecast_opts:
        parser.add_argument("--horizon", type=int, help="forecast steps")
        parser.add_argument("--level", type=float, help="credible level in (0, 1)")
        parser.add_argument("--chain", help="reuse a previously written chain CSV")
        parser.add_argument(
            "--fitted-band", dest="fitted_band", action="store_const", const=True,
            help="also write the fitted-window band",
        )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbmjump",
        description="Fit GBM or GBM-with-jumps to daily closes and forecast.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("mle", help="closed-form maximum likelihood"), False)
    _add_common(sub.add_parser("fit", help="Gibbs posterior sampling"), False)
    _add_common(sub.add_parser("forecast", help="posterior predictive band"), True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"mle": cmd_mle, "fit": cmd_fit, "forecast": cmd_forecast}
    flag_values = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = build_config(flag_values, args.config)
        return handlers[args.command](cfg)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
