"""Permutation-based circular isolate-detect (PCID).

Offline detection of multiple change-points in the mean direction of an
angular time series, with Monte Carlo calibration of the per-test level,
a windowed variant for long signals, and a subsampling wrapper for
serially correlated data.
"""

from .calibration import CalibrationTable, Type1Estimate, embedded_table, estimate_type1
from .circular import (
    AngularSeries,
    ConcentrationMatch,
    as_angular,
    atan2c,
    bessel_i,
    circular_mean,
    match_concentration,
    mean_resultant_length,
    signed_angle,
    wrap_angle,
)
from .contrast import argmax_contrast, build_prefix, contrast_at
from .dependent import SubsampleConfig, cluster_votes, detect_correlated, subsample
from .engine import (
    DetectionResult,
    PcidConfig,
    build_schedule,
    choose_alpha,
    pcid_detect,
    pcid_windowed,
    sidak_gamma,
)
from .io import ResultDocument, SeriesLoadError, load_series
from .metrics import aggregate_metrics, ari, hausdorff_scaled, n_diff_histogram, segment_labels
from .permutation import PermTestConfig, PermTestOutcome, b_from_alpha, permutation_test
from .signals import NoiseSpec, SignalSpec, builtin_signal, builtin_signal_ids, generate, sample_noise

__version__ = "0.1.0"

__all__ = [
    "AngularSeries",
    "CalibrationTable",
    "ConcentrationMatch",
    "DetectionResult",
    "NoiseSpec",
    "PcidConfig",
    "PermTestConfig",
    "PermTestOutcome",
    "ResultDocument",
    "SeriesLoadError",
    "SignalSpec",
    "SubsampleConfig",
    "Type1Estimate",
    "aggregate_metrics",
    "argmax_contrast",
    "ari",
    "as_angular",
    "atan2c",
    "b_from_alpha",
    "bessel_i",
    "build_prefix",
    "build_schedule",
    "builtin_signal",
    "builtin_signal_ids",
    "choose_alpha",
    "circular_mean",
    "cluster_votes",
    "contrast_at",
    "detect_correlated",
    "embedded_table",
    "estimate_type1",
    "generate",
    "hausdorff_scaled",
    "load_series",
    "match_concentration",
    "mean_resultant_length",
    "n_diff_histogram",
    "pcid_detect",
    "pcid_windowed",
    "permutation_test",
    "sample_noise",
    "segment_labels",
    "sidak_gamma",
    "signed_angle",
    "subsample",
    "wrap_angle",
    "__version__",
]
