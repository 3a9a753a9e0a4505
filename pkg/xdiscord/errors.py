"""Exceptions raised by the discord toolkit.

All of them derive from ``ValueError`` so a plain ``except ValueError``
keeps working for callers that do not care about the distinction.
"""


class XDiscordError(ValueError):
    """Base class for library errors."""


class DomainError(XDiscordError):
    """An argument lies outside the mathematical domain of an operation."""


class ParameterBoundsError(XDiscordError):
    """A state parameter violates |r|, |s|, |ci| <= 1."""


class NonPhysicalStateError(XDiscordError):
    """The parameters describe a matrix with a negative eigenvalue."""


class MeasurementError(XDiscordError):
    """A measurement axis is not a unit vector."""


__all__ = [
    "XDiscordError",
    "DomainError",
    "ParameterBoundsError",
    "NonPhysicalStateError",
    "MeasurementError",
]
