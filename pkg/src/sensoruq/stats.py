"""Fixed-window moment statistics.

All functions take a one-dimensional sequence of finite floats and use a
two-pass algorithm in double precision. Standard deviation uses the N-1
denominator; skewness and kurtosis are the plain standardized central moments
``m3 / m2**1.5`` and ``m4 / m2**2`` (kurtosis is *not* excess, so a Gaussian
sits at 3).

Every elementwise arithmetic operation is reported to an optional
:class:`OpCounter`, which is how the pipeline's linear cost in N is checked.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DegenerateWindow, InvalidWindow, ShapeError

__all__ = [
    "OpCounter",
    "count_operations",
    "as_window",
    "mean",
    "sample_std",
    "skewness",
    "kurtosis",
    "pearson_correlation",
    "WindowMoments",
    "window_moments",
]


class OpCounter:
    """Tally of scalar arithmetic operations (add, sub, mul, div, sqrt)."""

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        self.count += int(n)


_active_counter: contextvars.ContextVar[OpCounter | None] = contextvars.ContextVar(
    "sensoruq_op_counter", default=None
)


@contextmanager
def count_operations() -> Iterator[OpCounter]:
    """Count arithmetic performed by this module inside the ``with`` block.

    >>> with count_operations() as ops:
    ...     _ = mean([1.0, 2.0, 3.0])
    >>> ops.count
    3
    """
    counter = OpCounter()
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)


def _tally(n: int) -> None:
    counter = _active_counter.get()
    if counter is not None:
        counter.add(n)


def as_window(values: Sequence[float] | np.ndarray, min_len: int = 1) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidWindow(f"window must be one-dimensional, got shape {x.shape}")
    if x.size < min_len:
        raise InvalidWindow(f"window needs at least {min_len} values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InvalidWindow("window contains NaN or infinite values")
    return x


def _is_constant(x: np.ndarray) -> bool:
    # exact test; a computed variance of a constant window may be a rounding residue
    return bool(np.all(x == x[0]))


def _mean(x: np.ndarray) -> float:
    _tally(x.size)  # n-1 additions, one division
    return float(np.sum(x) / x.size)


def _central_sums(x: np.ndarray, mu: float) -> tuple[np.ndarray, float, float, float]:
    n = x.size
    d = x - mu
    d2 = d * d
    s2 = float(np.sum(d2))
    s3 = float(np.sum(d2 * d))
    s4 = float(np.sum(d2 * d2))
    # subtract, square, cube, fourth power, three reductions
    _tally(4 * n + 3 * (n - 1))
    return d, s2, s3, s4


def mean(w: Sequence[float] | np.ndarray) -> float:
    """Arithmetic mean. Exact for constant windows."""
    x = as_window(w, 1)
    if _is_constant(x):
        return float(x[0])
    return _mean(x)


def sample_std(w: Sequence[float] | np.ndarray) -> float:
    """Square root of the unbiased (N-1) sample variance; 0 iff all values are equal."""
    x = as_window(w, 2)
    if _is_constant(x):
        return 0.0
    mu = _mean(x)
    d = x - mu
    s2 = float(np.sum(d * d))
    _tally(3 * x.size + 1)
    return math.sqrt(s2 / (x.size - 1))


def skewness(w: Sequence[float] | np.ndarray) -> float:
    """Standardized third central moment g1 = m3 / m2**1.5 (biased, 1/N moments)."""
    x = as_window(w, 3)
    if _is_constant(x):
        raise DegenerateWindow("skewness undefined for a zero-variance window")
    _, s2, s3, _ = _central_sums(x, _mean(x))
    n = x.size
    m2, m3 = s2 / n, s3 / n
    _tally(4)
    return m3 / m2**1.5


def kurtosis(w: Sequence[float] | np.ndarray) -> float:
    """Raw (Pearson) kurtosis b2 = m4 / m2**2. A Gaussian gives 3, not 0."""
    x = as_window(w, 4)
    if _is_constant(x):
        raise DegenerateWindow("kurtosis undefined for a zero-variance window")
    _, s2, _, s4 = _central_sums(x, _mean(x))
    n = x.size
    m2, m4 = s2 / n, s4 / n
    _tally(4)
    return m4 / (m2 * m2)


def pearson_correlation(
    a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray
) -> float:
    """Sample Pearson coefficient, clamped to [-1, 1] to absorb rounding."""
    x = as_window(a, 2)
    y = as_window(b, 2)
    if x.size != y.size:
        raise ShapeError(f"windows differ in length: {x.size} != {y.size}")
    if _is_constant(x) or _is_constant(y):
        raise DegenerateWindow("correlation undefined when either window is constant")
    dx = x - _mean(x)
    dy = y - _mean(y)
    return _corr_from_deviations(dx, dy)


def _corr_from_deviations(dx: np.ndarray, dy: np.ndarray) -> float:
    n = dx.size
    sxy = float(np.sum(dx * dy))
    sxx = float(np.sum(dx * dx))
    syy = float(np.sum(dy * dy))
    _tally(3 * n + 3 * (n - 1) + 3)
    r = sxy / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class WindowMoments:
    """Summary of one channel's window. ``skew``/``kurt`` are None when undefined."""

    n: int
    mean: float
    std: float
    skew: float | None
    kurt: float | None

    @property
    def degenerate(self) -> bool:
        return self.std == 0.0


def window_moments(w: Sequence[float] | np.ndarray) -> WindowMoments:
    """Mean, std, skewness and kurtosis sharing one set of central sums.

    Gives the same numbers as the individual functions, but only walks the
    window twice instead of once per statistic.
    """
    x = as_window(w, 2)
    n = x.size
    if _is_constant(x):
        return WindowMoments(n, float(x[0]), 0.0, None, None)
    mu = _mean(x)
    _, s2, s3, s4 = _central_sums(x, mu)
    std = math.sqrt(s2 / (n - 1))
    m2, m3, m4 = s2 / n, s3 / n, s4 / n
    _tally(10)
    skew = m3 / m2**1.5 if n >= 3 else None
    kurt = m4 / (m2 * m2) if n >= 4 else None
    return WindowMoments(n, mu, std, skew, kurt)
