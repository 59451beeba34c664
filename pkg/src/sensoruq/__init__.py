"""Reduce the noise uncertainty of one oversampled sensor channel using the
correlated noise of a second channel."""

from .errors import (
    DegenerateModel,
    DegenerateWindow,
    EstimationFailed,
    InsufficientData,
    InvalidParams,
    InvalidTime,
    InvalidWindow,
    ParseError,
    SensorUQError,
    ShapeError,
    SingularFit,
)
from .noise_model import (
    ConditionalResult,
    NoiseModelParams,
    conditional_pdf_at_mean_t,
    conditional_sigma,
    joint_pdf,
)
from .pipeline import (
    GateThresholds,
    Mode,
    SampleWindow,
    UqReport,
    baseline,
    conditional,
    process_stream,
)
from .stats import kurtosis, mean, pearson_correlation, sample_std, skewness

__version__ = "0.1.0"
