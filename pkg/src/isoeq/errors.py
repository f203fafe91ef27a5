"""Exception hierarchy.

Each error carries the CLI exit code it maps to: 2 for malformed input,
3 for violated preconditions, 4 for exceeded enumeration caps.
"""

from __future__ import annotations


class IsoeqError(Exception):
    exit_code = 3


class MalformedInput(IsoeqError, ValueError):
    exit_code = 2


class NonCanonicalBasis(MalformedInput):
    """A serialized basis is not in reduced row-echelon form."""


class PreconditionError(IsoeqError, ValueError):
    exit_code = 3


class NotPrime(PreconditionError):
    pass


class NoIrreducibleFound(IsoeqError, RuntimeError):
    pass


class ZeroInverse(PreconditionError, ZeroDivisionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class NotContained(PreconditionError):
    pass


class BadCodimension(PreconditionError):
    pass


class BadSpec(PreconditionError):
    pass


class AmbientTooSmall(PreconditionError):
    pass


class NotASolution(PreconditionError):
    pass


class NotMinimalLength(PreconditionError):
    pass


class NotACovering(PreconditionError):
    pass


class TooLarge(IsoeqError):
    exit_code = 4


class StructureViolation(IsoeqError, AssertionError):
    """A covering contradicts the minimal-covering structure theorem."""


class ClassificationFailed(IsoeqError, AssertionError):
    """Witness reconstruction did not reproduce the input pair."""
