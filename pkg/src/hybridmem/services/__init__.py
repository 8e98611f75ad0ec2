"""Simulation services"""

from .exceptions import (
    AddressRangeError,
    ConfigurationError,
    EmptyWearMapError,
    HybridMemError,
    InvariantViolation,
    MetricsError,
    NormalizationError,
    SchemeError,
    TimestampRegressionError,
    TraceAlignmentError,
    TraceError,
    TraceFormatError,
)

__all__ = [
    'AddressRangeError', 'ConfigurationError', 'EmptyWearMapError', 'HybridMemError',
    'InvariantViolation', 'MetricsError', 'NormalizationError', 'SchemeError',
    'TimestampRegressionError', 'TraceAlignmentError', 'TraceError', 'TraceFormatError',
]
