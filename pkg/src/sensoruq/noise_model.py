"""Bivariate Gaussian noise model for a (humidity, temperature) channel pair.

The joint density of the two noise variables is the standard correlated
bivariate normal. Conditioning it on the temperature sitting exactly at its
mean leaves a Gaussian in humidity with the same mean and a narrower spread,
``sigma_h * sqrt(1 - rho**2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModel, InvalidParams

__all__ = [
    "NoiseModelParams",
    "ConditionalResult",
    "joint_pdf",
    "conditional_pdf_at_mean_t",
    "conditional_sigma",
]

_LOG_2PI = math.log(2.0 * math.pi)
# beyond this |rho| the 1/(1-rho^2) factor is evaluated in log space
_LOG_SPACE_RHO = 0.999


@dataclass(frozen=True)
class NoiseModelParams:
    """Five parameters of the joint noise density.

    Humidity is in %RH and temperature in degC, but nothing here depends on
    units.
    """

    mu_h: float
    mu_t: float
    sigma_h: float
    sigma_t: float
    rho: float

    def __post_init__(self) -> None:
        for name in ("mu_h", "mu_t", "sigma_h", "sigma_t", "rho"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")
        if self.sigma_h <= 0 or self.sigma_t <= 0:
            raise InvalidParams(
                f"standard deviations must be positive (sigma_h={self.sigma_h}, sigma_t={self.sigma_t})"
            )
        if abs(self.rho) > 1:
            raise InvalidParams(f"rho must lie in [-1, 1], got {self.rho}")

    @property
    def covariance(self) -> np.ndarray:
        """2x2 covariance matrix ordered (h, t)."""
        c = self.rho * self.sigma_h * self.sigma_t
        return np.array([[self.sigma_h**2, c], [c, self.sigma_t**2]])


@dataclass(frozen=True)
class ConditionalResult:
    sigma_hat: float
    reduction_fraction: float


def _require_density(p: NoiseModelParams) -> None:
    if abs(p.rho) >= 1:
        raise DegenerateModel(f"joint density is singular at rho={p.rho}")


def _log_joint_pdf(p: NoiseModelParams, h, t):
    one_minus_r2 = (1.0 - p.rho) * (1.0 + p.rho)
    zh = (np.asarray(h, dtype=np.float64) - p.mu_h) / p.sigma_h
    zt = (np.asarray(t, dtype=np.float64) - p.mu_t) / p.sigma_t
    quad = (zh * zh + zt * zt - 2.0 * p.rho * zh * zt) / (2.0 * one_minus_r2)
    log_norm = _LOG_2PI + math.log(p.sigma_h) + math.log(p.sigma_t) + 0.5 * math.log(one_minus_r2)
    return -log_norm - quad


def joint_pdf(p: NoiseModelParams, h, t):
    """Joint density f(h, t). Accepts scalars or broadcastable arrays.

    Raises DegenerateModel when |rho| == 1.
    """
    _require_density(p)
    if abs(p.rho) > _LOG_SPACE_RHO:
        out = np.exp(_log_joint_pdf(p, h, t))
    else:
        one_minus_r2 = 1.0 - p.rho * p.rho
        zh = (np.asarray(h, dtype=np.float64) - p.mu_h) / p.sigma_h
        zt = (np.asarray(t, dtype=np.float64) - p.mu_t) / p.sigma_t
        z = (zh * zh + zt * zt - 2.0 * p.rho * zh * zt) / (2.0 * one_minus_r2)
        norm = 2.0 * math.pi * p.sigma_h * p.sigma_t * math.sqrt(one_minus_r2)
        out = np.exp(-z) / norm
    return float(out) if np.ndim(out) == 0 else out


def conditional_pdf_at_mean_t(p: NoiseModelParams, h):
    """Density of humidity given that temperature equals ``mu_t``."""
    _require_density(p)
    sigma_hat = conditional_sigma(p.sigma_h, p.rho).sigma_hat
    z = (np.asarray(h, dtype=np.float64) - p.mu_h) / sigma_hat
    if abs(p.rho) > _LOG_SPACE_RHO:
        out = np.exp(-0.5 * z * z - 0.5 * _LOG_2PI - math.log(sigma_hat))
    else:
        out = np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * sigma_hat)
    return float(out) if np.ndim(out) == 0 else out


def conditional_sigma(sigma_h: float, rho: float) -> ConditionalResult:
    """Reduced humidity standard deviation after conditioning on temperature.

    ``rho = +-1`` is accepted and yields ``sigma_hat = 0``.

    >>> conditional_sigma(2.0, 0.0)
    ConditionalResult(sigma_hat=2.0, reduction_fraction=0.0)
    """
    if not sigma_h > 0:
        raise InvalidParams(f"sigma_h must be positive, got {sigma_h}")
    if not -1.0 <= rho <= 1.0:
        raise InvalidParams(f"rho must lie in [-1, 1], got {rho}")
    # (1-r)(1+r) keeps precision near |rho| = 1
    factor = math.sqrt(max(0.0, (1.0 - rho) * (1.0 + rho)))
    return ConditionalResult(sigma_hat=sigma_h * factor, reduction_fraction=1.0 - factor)
