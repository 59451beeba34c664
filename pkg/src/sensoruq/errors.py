"""Exception hierarchy shared by every sensoruq module."""

from __future__ import annotations


class SensorUQError(Exception):
    """Base class for all errors raised by sensoruq."""


class InvalidWindow(SensorUQError, ValueError):
    """Window too short for the requested statistic, or holds non-finite values."""


class DegenerateWindow(SensorUQError, ValueError):
    """Window has zero variance, so standardized moments are undefined."""


class ShapeError(SensorUQError, ValueError):
    pass


class InvalidParams(SensorUQError, ValueError):
    pass


class DegenerateModel(SensorUQError, ValueError):
    """Density requested for |rho| == 1, where the joint pdf collapses onto a line."""


class InsufficientData(SensorUQError, ValueError):
    pass


class InvalidTime(SensorUQError, ValueError):
    pass


class EstimationFailed(SensorUQError, RuntimeError):
    pass


class SingularFit(SensorUQError, ValueError):
    pass


class ParseError(SensorUQError, ValueError):
    """Malformed input file. ``line`` is 1-based and counts the header."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)
