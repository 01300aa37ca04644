"""Exception taxonomy shared across the workbench.

Every guard in the package raises one of these, so callers can tell a
mis-specified parameter apart from a resolvability problem without parsing
messages.
"""

from __future__ import annotations


class CzlabError(Exception):
    """Base class for all workbench errors."""


class DomainError(CzlabError):
    """A scalar argument lies outside its mathematical domain."""


class ParameterError(CzlabError):
    """Structured parameters are inconsistent (shapes, ranges, combinations)."""


class ScaleError(CzlabError):
    """A requested scale does not fit on the torus or below it on the grid."""


class ResolutionError(CzlabError):
    """The grid is too coarse to represent the requested object."""


class SupportError(CzlabError):
    """Input data violates the support discipline expected by an operator."""


class ConfigError(CzlabError):
    """A config file is malformed; message carries the offending field path."""
