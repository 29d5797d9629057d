"""Exception types raised by ecquant."""

from __future__ import annotations


class QuantizerError(ValueError):
    """Base class for every error raised by this package."""


class ChannelError(QuantizerError):
    pass


class NegativeEntry(ChannelError):
    pass


class ShapeMismatch(ChannelError):
    pass


class MassNotNormalizable(ChannelError):
    pass


class PriorInconsistent(ChannelError):
    pass


class AllOutputsZero(ChannelError):
    pass


class IndexOutOfRange(QuantizerError, IndexError):
    pass


class InvalidQuantizer(QuantizerError):
    pass


class InvalidK(QuantizerError):
    pass


class EmptyCluster(QuantizerError):
    pass


class ZeroMassOutput(QuantizerError):
    pass


class TooLarge(QuantizerError):
    """Raised when an exhaustive oracle would exceed its enumeration budget."""


class DensityNegative(QuantizerError):
    pass


class DegenerateSupport(QuantizerError):
    pass


class ZeroDensityPoint(QuantizerError):
    pass
