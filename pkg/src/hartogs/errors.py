"""Exception types shared across the package."""

from __future__ import annotations


class HartogsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(HartogsError):
    pass


class SynthesisFailed(HartogsError):
    pass


class AdmissibilityViolation(HartogsError):
    pass


class NonFinite(HartogsError):
    pass


class NotConverged(HartogsError):
    """Quadrature hit its node cap; the partial result is attached."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class OnBoundary(HartogsError):
    pass


class LineCutNotCompact(HartogsError):
    pass


class CutNotCompact(HartogsError):
    pass


class DimensionTooHigh(HartogsError):
    pass


class BoxTooSmall(HartogsError):
    pass


class NotInOmegaMinusK(HartogsError):
    pass


class UnboundedCut(HartogsError):
    pass


class UnknownId(HartogsError):
    pass


class MissingMetadata(HartogsError):
    pass


class EmptySamples(HartogsError):
    pass


class NoCoincidenceSamples(HartogsError):
    pass


class DomainViolation(HartogsError):
    pass


class DomainViolationWarning(UserWarning):
    """Emitted when a function is evaluated outside its declared domain."""


class ConfigError(HartogsError):
    pass
