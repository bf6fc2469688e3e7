"""Uniformly sampled series, aggregation, additive trends, CSV round trip.

``UniformSeries`` is the common currency of every analysis stage: real-valued
samples on a uniform time grid with step ``delta``.  Values are frozen after
construction so series can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ParseError

# All emitted floats are rounded to 9 significant digits; this keeps report
# bytes stable and makes the CSV round trip exact after one write/read cycle.
FLOAT_FMT = "%.9g"


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class UniformSeries:
    """Real samples on a uniform grid: sample k sits at ``t0 + k * delta``."""

    values: np.ndarray
    delta: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.values.ndim != 1 or self.values.size == 0:
            raise ParameterError("series values must be a non-empty 1-d array")
        if not np.isfinite(self.values).all():
            raise ParameterError("series values must all be finite")
        if not (self.delta > 0):
            raise ParameterError(f"sampling step must be positive, got {self.delta}")

    def __len__(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.delta * np.arange(self.values.size)

    @property
    def duration(self) -> float:
        return self.delta * self.values.size

    def with_values(self, values) -> "UniformSeries":
        return UniformSeries(values, delta=self.delta, t0=self.t0)

    def slice(self, lo: int, hi: int) -> "UniformSeries":
        """Sub-series of samples ``lo..hi-1`` (keeps absolute start time)."""
        if not (0 <= lo < hi <= len(self)):
            raise ParameterError(f"invalid slice [{lo}, {hi}) for n={len(self)}")
        return UniformSeries(self.values[lo:hi], delta=self.delta, t0=self.t0 + lo * self.delta)


def aggregate(series: UniformSeries) -> UniformSeries:
    """Cumulative-sum path of the series (same grid).

    Convention: the implicit partial sum before the first sample is 0, so
    ``difference(aggregate(s)) == s`` exactly.
    """
    return series.with_values(np.cumsum(series.values))


def difference(series: UniformSeries) -> UniformSeries:
    """Inverse of :func:`aggregate`: first-order differences with the leading
    sample kept as-is."""
    return series.with_values(np.diff(series.values, prepend=0.0))


@dataclass(frozen=True)
class PolynomialTrend:
    """Polynomial in normalized time u = (t - t0) / duration, u in [0, 1).

    ``coefficients[k]`` multiplies u**k.  Normalizing by the series duration
    keeps a trend specification meaningful across series lengths.
    """

    coefficients: tuple = field(default=(0.0,))

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(self.coefficients))
        if len(coeffs) == 0:
            raise ParameterError("polynomial trend needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    def evaluate(self, n: int) -> np.ndarray:
        u = np.arange(n) / n
        return np.polynomial.polynomial.polyval(u, np.asarray(self.coefficients))


@dataclass(frozen=True)
class PiecewiseConstantTrend:
    """Step function of normalized time: ``levels[j]`` on [breaks[j-1], breaks[j])."""

    levels: tuple
    breaks: tuple

    def __post_init__(self):
        levels = tuple(float(v) for v in np.atleast_1d(self.levels))
        breaks = tuple(float(b) for b in np.atleast_1d(self.breaks))
        if len(levels) != len(breaks) + 1:
            raise ParameterError("need exactly one more level than break fractions")
        if any(not 0.0 < b < 1.0 for b in breaks) or list(breaks) != sorted(set(breaks)):
            raise ParameterError("break fractions must be strictly increasing in (0, 1)")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "breaks", breaks)

    def evaluate(self, n: int) -> np.ndarray:
        u = np.arange(n) / n
        idx = np.searchsorted(np.asarray(self.breaks), u, side="right")
        return np.asarray(self.levels)[idx]


TrendSpec = PolynomialTrend | PiecewiseConstantTrend


def add_trend(series: UniformSeries, trend: TrendSpec) -> UniformSeries:
    """Pointwise sum of the series and the trend evaluated on its grid."""
    return series.with_values(series.values + trend.evaluate(len(series)))


def write_csv(series: UniformSeries, path) -> None:
    """Write ``t,value`` rows; floats carry 9 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,value\n")
        for t, v in zip(series.times, series.values):
            fh.write(f"{FLOAT_FMT % t},{FLOAT_FMT % v}\n")


def read_csv(path) -> UniformSeries:
    """Read a ``t,value`` file written by :func:`write_csv`.

    The step and start time are recovered from the ``t`` column.
    """
    times = []
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "t,value":
            raise ParseError(f"expected header 't,value', got {header!r}", line=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(f"expected two comma-separated fields, got {line!r}", line=lineno)
            try:
                times.append(float(parts[0]))
                values.append(float(parts[1]))
            except ValueError:
                raise ParseError(f"non-numeric row {line!r}", line=lineno) from None
    if len(values) < 2:
        raise ParseError("need at least two samples to recover the sampling step")
    delta = times[1] - times[0]
    if delta <= 0:
        raise ParseError("time column must be strictly increasing")
    return UniformSeries(values, delta=delta, t0=times[0])
