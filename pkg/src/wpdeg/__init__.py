"""Finite versus infinite Weil-Petersson distance for one-parameter degenerations.

Two independent routes are implemented: the orbit polynomial of the limiting
mixed Hodge structure, and the holomorphic ``n``-forms on the components of a
semistable central fibre.  They are tied together by the graded slice of the
Clemens-Schmid sequence.
"""

from __future__ import annotations

from .errors import (
    ConsistencyError,
    InconsistentInputError,
    InputError,
    InternalConsistencyError,
    WpdegError,
)
from .report import Check, Classification, FiniteDistance, InfiniteDistance, Report, Verdict

__version__ = "0.1.0"

__all__ = [
    "Check",
    "Classification",
    "ConsistencyError",
    "FiniteDistance",
    "InconsistentInputError",
    "InfiniteDistance",
    "InputError",
    "InternalConsistencyError",
    "Report",
    "Verdict",
    "WpdegError",
]
