"""First-order thermal lag: step response, time-constant estimation, and the
oversampling check that a window is short compared to the sensor's lag."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EstimationFailed, InvalidParams, InvalidTime

__all__ = [
    "ThermalModel",
    "step_response",
    "estimate_time_constant",
    "ConstraintResult",
    "check_sampling_constraint",
    "DEFAULT_MARGIN",
    "STEP_FRACTION",
]

DEFAULT_MARGIN = 10.0
# fraction of the step completed after one time constant
STEP_FRACTION = 1.0 - math.exp(-1.0)


@dataclass(frozen=True)
class ThermalModel:
    initial_value: float
    final_value: float
    tau_s: float

    def __post_init__(self) -> None:
        if not self.tau_s > 0:
            raise InvalidParams(f"tau_s must be positive, got {self.tau_s}")


def step_response(m: ThermalModel, t):
    """Reading at time ``t`` seconds after a step from ``initial_value`` to ``final_value``."""
    ta = np.asarray(t, dtype=np.float64)
    if np.any(ta < 0) or not np.all(np.isfinite(ta)):
        raise InvalidTime("step response is only defined for finite t >= 0")
    out = m.final_value + (m.initial_value - m.final_value) * np.exp(-ta / m.tau_s)
    return float(out) if out.ndim == 0 else out


def estimate_time_constant(
    times: Sequence[float] | np.ndarray,
    values: Sequence[float] | np.ndarray,
    initial: float,
    final: float,
    step_time: float | None = None,
) -> float:
    """Time for the trace to cover 1 - 1/e of the step from ``initial`` to ``final``.

    The crossing of the 63.2 % level is located by linear interpolation
    between the two bracketing samples. A noisy trace may cross the level
    several times; the median of all crossing times is used. ``step_time``
    defaults to the first timestamp.
    """
    t = np.asarray(times, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if t.ndim != 1 or t.shape != y.shape:
        raise InvalidParams("times and values must be 1-D and of equal length")
    if t.size < 2:
        raise EstimationFailed("need at least two samples")
    if initial == final:
        raise EstimationFailed("initial and final values are equal; step is zero")
    if np.any(np.diff(t) <= 0):
        raise InvalidParams("timestamps must be strictly increasing")
    t0 = float(t[0]) if step_time is None else float(step_time)

    # progress is 0 at the initial value and 1 at the final value
    progress = (y - initial) / (final - initial)
    above = progress >= STEP_FRACTION
    idx = np.nonzero(above[1:] != above[:-1])[0]
    if idx.size == 0:
        raise EstimationFailed("trace never crosses the 1 - 1/e level of the step")
    p0, p1 = progress[idx], progress[idx + 1]
    frac = (STEP_FRACTION - p0) / (p1 - p0)
    crossings = t[idx] + frac * (t[idx + 1] - t[idx])
    return float(np.median(crossings)) - t0


@dataclass(frozen=True)
class ConstraintResult:
    passed: bool
    ratio: float  # tau * fs, i.e. how many sample periods fit in one time constant
    margin: float
    sample_period_s: float
    tau_s: float


def check_sampling_constraint(
    sample_rate_hz: float, tau_s: float, margin: float = DEFAULT_MARGIN
) -> ConstraintResult:
    """Require the sample period to be at least ``margin`` times shorter than ``tau_s``."""
    if not (sample_rate_hz > 0 and tau_s > 0):
        raise InvalidParams("sample rate and time constant must be positive")
    if not margin >= 1:
        raise InvalidParams(f"margin must be >= 1, got {margin}")
    period = 1.0 / sample_rate_hz
    return ConstraintResult(
        passed=period * margin <= tau_s,
        ratio=tau_s * sample_rate_hz,
        margin=float(margin),
        sample_period_s=period,
        tau_s=float(tau_s),
    )
