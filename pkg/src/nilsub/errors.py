"""Exception hierarchy for nilsub.

Every error raised on purpose by the library derives from :class:`NilsubError`.
Errors caused by a bad argument also derive from :class:`ValueError`, so callers
that only catch ``ValueError`` keep working.
"""

from __future__ import annotations

from typing import Any, List, Optional, Sequence


class NilsubError(Exception):
    """Base class for all nilsub errors."""


class DimensionMismatchError(NilsubError, ValueError):
    """Matrix or vector shapes do not fit together."""


class FieldMismatchError(NilsubError, ValueError):
    """Two objects live over different fields or nilpotency bounds."""


class UnsupportedFieldError(NilsubError, ValueError):
    """The field is not a prime field or the rationals, or is too large for the request."""


class PartitionError(NilsubError, ValueError):
    """A partition is not non-increasing, has a non-positive part, or exceeds n."""


class NotInvariantError(NilsubError, ValueError):
    """A subspace is not closed under the nilpotent operator."""


class NotAMorphismError(NilsubError, ValueError):
    """A matrix does not commute with the operators it should intertwine."""


class NonSplitError(NilsubError, ValueError):
    """The minimal polynomial of an operator has non-linear irreducible factors.

    Attributes:
        factor_degrees: Degrees of the irreducible factors that are not linear.
    """

    def __init__(self, message: str, factor_degrees: Sequence[int]) -> None:
        super().__init__(message)
        self.factor_degrees: List[int] = list(factor_degrees)


class NotInflationError(NilsubError, ValueError):
    """A quotient was requested for a subobject that is not an inflation."""


class WindowError(NilsubError, ValueError):
    """A dimension vector is supported outside the admissible window."""


class UnsupportedNilpotencyError(NilsubError, ValueError):
    """The operation is only defined for a specific nilpotency bound."""


class CoverValidationError(NilsubError, ValueError):
    """A covering representation violates its relations.

    Attributes:
        report: The validation report describing the first violation.
    """

    def __init__(self, message: str, report: Optional[Any] = None) -> None:
        super().__init__(message)
        self.report = report


class CoverMismatchError(NilsubError, ValueError):
    """A covering representation does not map onto the given object."""


class ProjectiveInputError(NilsubError, ValueError):
    """The AR translate was requested for a projective object."""


class DecomposableInputError(NilsubError, ValueError):
    """An indecomposable object was required."""


class BoundExceededError(NilsubError, ValueError):
    """An enumeration would exceed its configured size bound."""


class DecompositionError(NilsubError):
    """Indecomposability of a summand could not be certified."""


class CatalogError(NilsubError):
    """A catalog data file is inconsistent with its declared data."""


class ParseError(NilsubError, ValueError):
    """A text file could not be parsed.

    Attributes:
        path: Source file name, if known.
        line: 1-based line number of the offending line, if known.
    """

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None) -> None:
        location = ""
        if path is not None:
            location = f"{path}:"
        if line is not None:
            location = f"{location}{line}:"
        super().__init__(f"{location} {message}" if location else message)
        self.path = path
        self.line = line
