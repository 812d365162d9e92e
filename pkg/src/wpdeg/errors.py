"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit code 1); broken
internal invariants and cross-route disagreements derive from
:class:`ConsistencyError` (CLI exit code 2).
"""

from __future__ import annotations


class WpdegError(Exception):
    """Base class for all package errors."""


class InputError(WpdegError, ValueError):
    """The caller supplied data that cannot be processed."""


class DimensionMismatchError(InputError):
    pass


class ContainmentError(InputError):
    pass


class NotSemistableError(InputError):
    """Monodromy is not unipotent to the required order."""


class PolarizationError(InputError):
    pass


class InvalidOrbitDataError(InputError):
    """(Q, N, alpha) cannot come from a polarized limit."""


class ModelError(InputError):
    """A central-fibre model violates its structural invariants."""


class OutOfHypothesisError(InputError):
    pass


class WindowError(InputError):
    """The orbit polynomial vanishes inside a quadrature window."""

    def __init__(self, message, root_interval=None):
        super().__init__(message)
        self.root_interval = root_interval


class ConsistencyError(WpdegError):
    """Base for failures that indicate a bug or contradictory inputs."""


class InternalConsistencyError(ConsistencyError, AssertionError):
    """A self-certification step failed; this is a bug trap."""


class InconsistentInputError(ConsistencyError):
    """Two descriptions that should belong to one degeneration disagree."""
