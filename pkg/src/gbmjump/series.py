"""Price series loading and conversion to log-increments.

The observation model downstream works on d_i = y_i - y_{i-1} (log closes) with
per-step durations dt_i expressed in years. By default every consecutive pair
of rows counts as one trading step of 1/days_per_year years, so weekends and
holidays carry no extra time.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Raised for unusable input data (bad rows, bad ordering, bad values)."""


@dataclass(frozen=True)
class PriceSeries:
    """Daily closes: strictly increasing dates, strictly positive prices."""

    dates: tuple[dt.date, ...]
    prices: np.ndarray

    def __post_init__(self) -> None:
        prices = np.asarray(self.prices, dtype=float)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != len(prices):
            raise DataError(
                f"{len(self.dates)} dates but {len(prices)} prices"
            )
        if len(prices) < 2:
            raise DataError("need at least two observations")
        if not np.all(np.isfinite(prices)):
            raise DataError("non-finite price")
        if np.any(prices <= 0.0):
            i = int(np.argmax(prices <= 0.0))
            raise DataError(f"non-positive price {prices[i]} at {self.dates[i]}")
        for a, b in zip(self.dates, self.dates[1:]):
            if b <= a:
                raise DataError(f"dates not strictly increasing at {b}")

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class IncrementSeries:
    """Log-increments d with per-step durations dt (years) and the start point.

    Empty series (n = 0) are allowed so samplers can be run against the bare
    prior; series derived from price data always have n >= 1.
    """

    d: np.ndarray
    dt: np.ndarray
    y0: float = 0.0
    t0: float = 0.0

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=float)
        step = np.asarray(self.dt, dtype=float)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "dt", step)
        if d.shape != step.shape or d.ndim != 1:
            raise DataError("d and dt must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(step))):
            raise DataError("non-finite increment or duration")
        if np.any(step <= 0.0):
            raise DataError("durations must be positive")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def total_time(self) -> float:
        return float(np.sum(self.dt))


def load_price_series(
    path,
    date_column: str = "date",
    price_column: str = "close",
) -> PriceSeries:
    """Read a delimited file with header into a PriceSeries.

    Errors carry the 1-based line number of the offending row.
    """
    dates: list[dt.date] = []
    prices: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file")
        for col in (date_column, price_column):
            if col not in reader.fieldnames:
                raise DataError(f"{path}: missing column {col!r}")
        for row in reader:
            line = reader.line_num
            raw_date = row.get(date_column)
            raw_price = row.get(price_column)
            if raw_date is None or raw_price is None:
                raise DataError(f"{path}:{line}: short row")
            try:
                dates.append(dt.date.fromisoformat(raw_date.strip()))
            except ValueError as exc:
                raise DataError(f"{path}:{line}: bad date {raw_date!r}") from exc
            try:
                price = float(raw_price)
            except ValueError as exc:
                raise DataError(f"{path}:{line}: bad price {raw_price!r}") from exc
            if not math.isfinite(price) or price <= 0.0:
                raise DataError(f"{path}:{line}: non-positive price {raw_price!r}")
            prices.append(price)
    if len(prices) < 2:
        raise DataError(f"{path}: need at least two rows, got {len(prices)}")
    return PriceSeries(tuple(dates), np.array(prices))


def to_increments(
    series: PriceSeries,
    days_per_year: int = 252,
    scale_by_calendar_days: bool = False,
) -> IncrementSeries:
    """Convert closes to log-increments with durations in years.

    Default: each consecutive pair is one trading step, dt_i = 1/days_per_year.
    With scale_by_calendar_days=True, dt_i = calendar-day gap / days_per_year
    (so a weekend contributes 3/days_per_year).
    """
    if days_per_year <= 0:
        raise ValueError("days_per_year must be positive")
    y = np.log(series.prices)
    d = np.diff(y)
    if scale_by_calendar_days:
        gaps = np.array(
            [(b - a).days for a, b in zip(series.dates, series.dates[1:])],
            dtype=float,
        )
        step = gaps / days_per_year
    else:
        step = np.full(len(d), 1.0 / days_per_year)
    return IncrementSeries(d=d, dt=step, y0=float(y[0]), t0=0.0)
