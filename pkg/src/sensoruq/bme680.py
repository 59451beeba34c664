"""BME680 raw-ADC compensation in double precision.

Temperature is compensated first; its output feeds both the humidity and the
pressure corrections, which is how temperature noise leaks into the other two
channels and makes their noise correlated.

All functions accept scalars or numpy arrays for the ADC and temperature
arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import InvalidParams, ParseError

__all__ = [
    "Bme680Calibration",
    "CALIBRATION_KEYS",
    "compensate_temperature",
    "humidity_temp_coefficient",
    "compensate_humidity",
    "humidity_temperature_sensitivity",
    "pressure_coefficients",
    "compensate_pressure",
    "compensate",
    "load_calibration",
    "parse_calibration",
    "format_calibration",
    "synthetic_calibration",
    "T_ADC_MAX",
    "H_ADC_MAX",
    "P_ADC_MAX",
]

T_ADC_MAX = 2**20
H_ADC_MAX = 2**16
P_ADC_MAX = 2**20


@dataclass(frozen=True)
class Bme680Calibration:
    k_t1: float
    k_t2: float
    k_t3: float
    k_h1: float
    k_h2: float
    k_h3: float
    k_h4: float
    k_h5: float
    k_h6: float
    k_h7: float
    k_p1: float
    k_p2: float
    k_p3: float
    k_p4: float
    k_p5: float
    k_p6: float
    k_p7: float
    k_p8: float
    k_p9: float
    k_p10: float

    def __post_init__(self) -> None:
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise InvalidParams(f"calibration constant {f.name} is not finite")
            object.__setattr__(self, f.name, v)

    @classmethod
    def zeros(cls, **overrides: float) -> "Bme680Calibration":
        values = dict.fromkeys(CALIBRATION_KEYS, 0.0)
        values.update(overrides)
        return cls(**values)

    def replace(self, **overrides: float) -> "Bme680Calibration":
        values = self.as_dict()
        values.update(overrides)
        return Bme680Calibration(**values)

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in CALIBRATION_KEYS}


CALIBRATION_KEYS: tuple[str, ...] = tuple(f.name for f in fields(Bme680Calibration))


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def compensate_temperature(c: Bme680Calibration, t_adc) -> float | np.ndarray:
    """Compensated temperature in degC from the 20-bit temperature ADC value."""
    x = np.asarray(t_adc, dtype=np.float64) / 2.0**14 - c.k_t1 / 2.0**10
    out = c.k_t2 / 5120.0 * x + c.k_t3 / (5120.0 * 2.0**10) * x * x
    return _scalar_or_array(out)


def humidity_temp_coefficient(c: Bme680Calibration, t_out) -> float | np.ndarray:
    t = np.asarray(t_out, dtype=np.float64)
    out = c.k_h2 / 2.0**18 + c.k_h2 * c.k_h4 / 2.0**32 * t + c.k_h2 * c.k_h5 / 2.0**38 * t * t
    return _scalar_or_array(out)


def compensate_humidity(c: Bme680Calibration, h_adc, t_out) -> float | np.ndarray:
    """Temperature-compensated relative humidity in %RH.

    The offset term in the squared bracket is read as ``k_h1``, the same
    constant as in the linear bracket.
    """
    t = np.asarray(t_out, dtype=np.float64)
    hc = np.asarray(humidity_temp_coefficient(c, t))
    bracket = np.asarray(h_adc, dtype=np.float64) - c.k_h1 * 2.0**4 + c.k_h3 / 2.0 * t
    quad_coeff = c.k_h6 / 2.0**14 + c.k_h7 * t / 2.0**21
    out = hc * bracket + quad_coeff * hc * hc * bracket * bracket
    return _scalar_or_array(out)


def humidity_temperature_sensitivity(c: Bme680Calibration, h_adc, t_out) -> float | np.ndarray:
    """Analytic dH_out/dT_out at fixed ``h_adc``.

    This is the gain with which temperature noise propagates into the
    compensated humidity.
    """
    t = np.asarray(t_out, dtype=np.float64)
    hc = c.k_h2 / 2.0**18 + c.k_h2 * c.k_h4 / 2.0**32 * t + c.k_h2 * c.k_h5 / 2.0**38 * t * t
    dhc = c.k_h2 * c.k_h4 / 2.0**32 + 2.0 * c.k_h2 * c.k_h5 / 2.0**38 * t
    b = np.asarray(h_adc, dtype=np.float64) - c.k_h1 * 2.0**4 + c.k_h3 / 2.0 * t
    db = c.k_h3 / 2.0
    a = c.k_h6 / 2.0**14 + c.k_h7 * t / 2.0**21
    da = c.k_h7 / 2.0**21
    hcb = hc * b
    dhcb = dhc * b + hc * db
    out = dhcb + da * hcb * hcb + 2.0 * a * hcb * dhcb
    return _scalar_or_array(out)


def pressure_coefficients(c: Bme680Calibration, t_out) -> tuple:
    """The two temperature correction terms (P_C1, P_C2) of the pressure path."""
    t = np.asarray(t_out, dtype=np.float64)
    v = 2560.0 * t - 64000.0
    pc1 = c.k_p6 / 2.0**19 * v * v + c.k_p5 * (1280.0 * t - 32000.0) + 2.0**16 * c.k_p4
    pc2 = c.k_p1 * c.k_p3 / 2.0**48 * v * v + c.k_p1 * c.k_p2 / 2.0**34 * v + c.k_p1
    return _scalar_or_array(pc1), _scalar_or_array(pc2)


def compensate_pressure(c: Bme680Calibration, p_adc, t_out) -> float | np.ndarray:
    """Compensated pressure in Pa.

    Where the second correction coefficient is exactly zero the result is
    ``2**20 - p_adc``.
    """
    p = np.asarray(p_adc, dtype=np.float64)
    pc1, pc2 = (np.asarray(v, dtype=np.float64) for v in pressure_coefficients(c, t_out))
    pc1, pc2, p = np.broadcast_arrays(pc1, pc2, p)
    fallback = 2.0**20 - p
    ok = pc2 != 0
    safe_pc2 = np.where(ok, pc2, 1.0)
    pc3 = 6250.0 / safe_pc2 * (2.0**20 - p - pc1 / 2.0**12)
    out = (
        c.k_p10 * pc3**3 / 2.0**45
        + c.k_p9 * pc3 * pc3 / 2.0**35
        + pc3 * (1.0 + c.k_p8 / 2.0**19)
        + 2.0**3 * c.k_p7
    )
    return _scalar_or_array(np.where(ok, out, fallback))


def compensate(c: Bme680Calibration, t_adc, h_adc, p_adc) -> tuple:
    """Full chain: returns (T_out degC, H_out %RH, P_out Pa)."""
    t_out = compensate_temperature(c, t_adc)
    return t_out, compensate_humidity(c, h_adc, t_out), compensate_pressure(c, p_adc, t_out)


def parse_calibration(text: str, source: str | None = None) -> Bme680Calibration:
    """Parse ``key = value`` lines (``:`` also accepted). ``#`` starts a comment.

    Every one of the twenty keys must appear exactly once.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ParseError(f"expected 'key = value', got {raw!r}", lineno, source)
        key, _, val = (s.strip() for s in line.partition(sep))
        key = key.lower()
        if key not in CALIBRATION_KEYS:
            raise ParseError(f"unknown calibration key {key!r}", lineno, source)
        if key in values:
            raise ParseError(f"duplicate calibration key {key!r}", lineno, source)
        try:
            values[key] = float(val)
        except ValueError:
            raise ParseError(f"value for {key!r} is not a number: {val!r}", lineno, source) from None
        if not math.isfinite(values[key]):
            raise ParseError(f"value for {key!r} is not finite", lineno, source)
    missing = [k for k in CALIBRATION_KEYS if k not in values]
    if missing:
        raise ParseError(f"missing calibration keys: {', '.join(missing)}", None, source)
    return Bme680Calibration(**values)


def load_calibration(path: str | Path) -> Bme680Calibration:
    path = Path(path)
    return parse_calibration(path.read_text(encoding="utf-8"), str(path))


def format_calibration(c: Bme680Calibration | Mapping[str, float], header: str | None = None) -> str:
    d = c.as_dict() if isinstance(c, Bme680Calibration) else dict(c)
    lines = [f"# {line}" for line in header.splitlines()] if header else []
    lines += [f"{k} = {d[k]!r}" for k in CALIBRATION_KEYS]
    return "\n".join(lines) + "\n"


def synthetic_calibration() -> Bme680Calibration:
    """The SYNTHETIC constant set shipped with the package (not from a real device)."""
    from importlib.resources import files

    text = files("sensoruq").joinpath("data/bme680_synthetic.cal").read_text(encoding="utf-8")
    return parse_calibration(text, "bme680_synthetic.cal")
