"""Linear sensor-to-reference calibration by ordinary least squares."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParams, SingularFit

__all__ = ["LinearFit", "fit_linear", "apply_calibration", "invert_calibration"]


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    rms_residual: float
    n_points: int = 0


def fit_linear(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> LinearFit:
    """Fit ``y = slope * x + intercept`` minimising squared residuals in y.

    ``x`` is the sensor reading and ``y`` the reference value. Points are
    unweighted.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or xa.shape != ya.shape:
        raise InvalidParams("x and y must be 1-D and of equal length")
    if xa.size < 2:
        raise SingularFit("need at least two points")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise InvalidParams("points must be finite")
    x_mean = xa.mean()
    y_mean = ya.mean()
    dx = xa - x_mean
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise SingularFit("all x values are identical")
    slope = float(np.dot(dx, ya - y_mean)) / sxx
    intercept = float(y_mean - slope * x_mean)
    resid = ya - (slope * xa + intercept)
    rms = math.sqrt(float(np.mean(resid * resid)))
    return LinearFit(slope, intercept, rms, int(xa.size))


def apply_calibration(f: LinearFit, x):
    out = f.slope * np.asarray(x, dtype=np.float64) + f.intercept
    return float(out) if out.ndim == 0 else out


def invert_calibration(f: LinearFit, y):
    """Sensor reading that maps to reference value ``y``."""
    if f.slope == 0:
        raise SingularFit("a zero-slope calibration cannot be inverted")
    out = (np.asarray(y, dtype=np.float64) - f.intercept) / f.slope
    return float(out) if out.ndim == 0 else out
