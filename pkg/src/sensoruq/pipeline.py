"""Per-window uncertainty quantification.

Two procedures run over paired temperature/humidity windows:

* :func:`baseline` computes only means and standard deviations.
* :func:`conditional` additionally checks that the window looks Gaussian
  (|skew| < 2 and kurtosis < 7 by default) and, if so, shrinks the humidity
  standard deviation using the temperature/humidity noise correlation.

:func:`process_stream` chops a long paired recording into consecutive,
non-overlapping windows and runs either procedure on each.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import stats
from .errors import DegenerateWindow, InsufficientData, InvalidParams, ShapeError
from .noise_model import conditional_sigma

__all__ = [
    "DEFAULT_WINDOW_SIZE",
    "GateChannels",
    "GateThresholds",
    "SampleWindow",
    "UqReport",
    "Mode",
    "baseline",
    "conditional",
    "process_stream",
    "algorithm1_baseline",
    "algorithm2_conditional",
]

DEFAULT_WINDOW_SIZE = 30


class GateChannels(str, enum.Enum):
    BOTH = "both"
    HUMIDITY = "humidity"
    TEMPERATURE = "temperature"


class Mode(str, enum.Enum):
    BASELINE = "baseline"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class GateThresholds:
    """Gaussianity gate. Both comparisons are strict: skew == 2 fails."""

    max_abs_skew: float = 2.0
    max_kurtosis: float = 7.0
    channels: GateChannels = GateChannels.BOTH

    def __post_init__(self) -> None:
        if not (self.max_abs_skew > 0 and self.max_kurtosis > 0):
            raise InvalidParams("gate thresholds must be strictly positive")
        object.__setattr__(self, "channels", GateChannels(self.channels))

    def accepts(self, m: stats.WindowMoments) -> bool:
        if m.skew is None or m.kurt is None:
            return False
        return abs(m.skew) < self.max_abs_skew and m.kurt < self.max_kurtosis


@dataclass(frozen=True)
class SampleWindow:
    t_values: np.ndarray
    h_values: np.ndarray
    sample_rate_hz: float = 1.0

    def __post_init__(self) -> None:
        t = stats.as_window(self.t_values, 1)
        h = stats.as_window(self.h_values, 1)
        if t.size != h.size:
            raise ShapeError(f"temperature and humidity windows differ: {t.size} != {h.size}")
        if not self.sample_rate_hz > 0:
            raise InvalidParams("sample_rate_hz must be positive")
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "h_values", h)

    @property
    def n(self) -> int:
        return int(self.t_values.size)


@dataclass(frozen=True)
class UqReport:
    """Result for one window.

    Baseline reports leave the gate fields as None. A conditional report that
    fails the gate carries ``sigma_hat_h == sigma_h``, ``reduction_fraction == 0``
    and ``rho is None``; ``gate_reason`` says why.
    """

    mu_t: float
    mu_h: float
    sigma_t: float
    sigma_h: float
    sigma_hat_h: float
    reduction_fraction: float = 0.0
    gate_passed: bool | None = None
    rho: float | None = None
    skew_t: float | None = None
    skew_h: float | None = None
    kurt_t: float | None = None
    kurt_h: float | None = None
    gate_reason: str = field(default="", compare=True)


def baseline(w: SampleWindow) -> UqReport:
    """Means and sample standard deviations of both channels, nothing else."""
    if w.n < 2:
        raise InsufficientData("baseline needs at least 2 samples per window")
    mu_h = stats.mean(w.h_values)
    mu_t = stats.mean(w.t_values)
    sigma_h = stats.sample_std(w.h_values)
    sigma_t = stats.sample_std(w.t_values)
    return UqReport(mu_t=mu_t, mu_h=mu_h, sigma_t=sigma_t, sigma_h=sigma_h, sigma_hat_h=sigma_h)


def _gate(g: GateThresholds, mt: stats.WindowMoments, mh: stats.WindowMoments) -> tuple[bool, str]:
    checked = {
        GateChannels.BOTH: (("temperature", mt), ("humidity", mh)),
        GateChannels.HUMIDITY: (("humidity", mh),),
        GateChannels.TEMPERATURE: (("temperature", mt),),
    }[g.channels]
    for name, m in checked:
        if m.degenerate:
            return False, f"DegenerateWindow:{name}"
        if not g.accepts(m):
            return False, f"NonGaussian:{name}"
    return True, ""


def conditional(w: SampleWindow, g: GateThresholds = GateThresholds()) -> UqReport:
    """Gated conditional reduction of the humidity standard deviation.

    Zero-variance channels do not raise; they fail the gate with reason
    ``DegenerateWindow``.
    """
    if w.n < 4:
        raise InsufficientData("conditional mode needs at least 4 samples per window")
    mh = stats.window_moments(w.h_values)
    mt = stats.window_moments(w.t_values)
    passed, reason = _gate(g, mt, mh)
    rho = None
    sigma_hat, reduction = mh.std, 0.0
    if passed:
        try:
            rho = stats.pearson_correlation(w.h_values, w.t_values)
        except DegenerateWindow:
            # single-channel gating can let a constant partner channel through
            passed, reason = False, "DegenerateWindow:correlation"
        else:
            res = conditional_sigma(mh.std, rho)
            sigma_hat, reduction = res.sigma_hat, res.reduction_fraction
    return UqReport(
        mu_t=mt.mean,
        mu_h=mh.mean,
        sigma_t=mt.std,
        sigma_h=mh.std,
        sigma_hat_h=sigma_hat,
        reduction_fraction=reduction,
        gate_passed=passed,
        rho=rho,
        skew_t=mt.skew,
        skew_h=mh.skew,
        kurt_t=mt.kurt,
        kurt_h=mh.kurt,
        gate_reason=reason,
    )


algorithm1_baseline = baseline
algorithm2_conditional = conditional


def process_stream(
    t_values: Sequence[float] | np.ndarray,
    h_values: Sequence[float] | np.ndarray,
    window_size: int = DEFAULT_WINDOW_SIZE,
    gate: GateThresholds = GateThresholds(),
    mode: Mode | str = Mode.CONDITIONAL,
    sample_rate_hz: float = 1.0,
    workers: int | None = None,
) -> list[UqReport]:
    """Split a paired recording into ``len // window_size`` windows and report each.

    A trailing partial window is dropped. With ``workers > 1`` windows are
    evaluated on a thread pool; the output order always follows the input.
    """
    mode = Mode(mode)
    t = np.asarray(t_values, dtype=np.float64)
    h = np.asarray(h_values, dtype=np.float64)
    if t.shape != h.shape or t.ndim != 1:
        raise ShapeError(f"paired series must be 1-D and equal length, got {t.shape} and {h.shape}")
    if window_size < 1:
        raise InvalidParams("window_size must be positive")
    n_windows = t.size // window_size
    if n_windows == 0:
        raise InsufficientData(f"series of length {t.size} is shorter than one window ({window_size})")

    windows = [
        SampleWindow(t[i * window_size:(i + 1) * window_size], h[i * window_size:(i + 1) * window_size], sample_rate_hz)
        for i in range(n_windows)
    ]
    if mode is Mode.BASELINE:
        fn = baseline
    else:
        def fn(w: SampleWindow) -> UqReport:
            return conditional(w, gate)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, windows))
    return [fn(w) for w in windows]
