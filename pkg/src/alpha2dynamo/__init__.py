"""Spectral analysis of the spherically symmetric alpha^2-dynamo operator."""

from .errors import (
    ConvergenceError,
    DomainError,
    InsufficientSpectrumError,
    MatchingError,
    NoSignChangeError,
    PoleError,
    WindowTooSmallError,
)

__version__ = "0.1.0"
