"""Custom exceptions for the simulator"""


class HybridMemError(Exception):
    """Base exception for all simulator errors"""
    pass


class ConfigurationError(HybridMemError):
    """Raised when an experiment or runtime configuration is invalid"""
    pass


class TraceError(HybridMemError):
    """Base exception for trace-related errors"""
    pass


class TraceFormatError(TraceError):
    """Raised when a trace line cannot be parsed"""

    def __init__(self, message: str, line_number: int = 0):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}" if line_number else message)


class TraceAlignmentError(TraceFormatError):
    """Raised when a trace address is not aligned to the block size"""
    pass


class AddressRangeError(TraceError):
    """Raised when an address falls outside the device or PCM capacity"""
    pass


class TimestampRegressionError(TraceFormatError):
    """Raised when a core's timestamps go backwards"""
    pass


class SchemeError(HybridMemError):
    """Raised for unknown schemes or scheme/config mismatches"""
    pass


class InvariantViolation(HybridMemError):
    """Raised when an internal simulation invariant does not hold"""
    pass


class MetricsError(HybridMemError):
    """Base exception for metric computation errors"""
    pass


class EmptyWearMapError(MetricsError):
    """Raised when a wear CDF is requested over no touched blocks"""
    pass


class NormalizationError(MetricsError):
    """Raised when normalized metrics are requested without a baseline run"""
    pass
