"""Behavior forest discovery over multivariate time series."""

from ._core import (
    BufferOverflowError,
    Config,
    ConfigError,
    Detector,
    Error,
    Forest,
    FrameError,
    IoError,
    discover,
    discretize,
    extract_features,
    gaussian_breakpoints,
    generate_synthetic,
    process_stream,
    reduced_length,
    replay,
    sliding_window_variances,
    split_unified,
    unify,
)

__all__ = [
    "BufferOverflowError",
    "Config",
    "ConfigError",
    "Detector",
    "Error",
    "Forest",
    "FrameError",
    "IoError",
    "discover",
    "discretize",
    "extract_features",
    "gaussian_breakpoints",
    "generate_synthetic",
    "process_stream",
    "reduced_length",
    "replay",
    "sliding_window_variances",
    "split_unified",
    "unify",
]
