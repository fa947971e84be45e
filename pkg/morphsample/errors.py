"""Exception hierarchy for morphsample.

Every library error derives from ``MorphError`` (itself a ``ValueError``) so the
CLI can map failures to exit codes without catching unrelated exceptions.
"""

from __future__ import annotations


class MorphError(ValueError):
    """Base class for all morphsample errors."""


class DimensionMismatchError(MorphError):
    """Operands live in grids of different dimension."""


class CeilingMismatchError(MorphError):
    """Operands were built with different grey-value ceilings."""


class ValueRangeError(MorphError):
    """A grey value lies outside [0, ceiling]."""


class EmptyStructuringElementError(MorphError):
    """Erosion (or anything built on it) was asked to use an empty element."""


class NotSampledError(MorphError):
    """An image expected to live on the sieve has points off the sieve."""


class InvalidFilterError(MorphError):
    """A filter/sieve pair does not satisfy the sampling conditions."""


class PreconditionError(MorphError):
    """Any other violated precondition."""


class ImageFormatError(MorphError):
    """Malformed PGM or SEM input, or an image the target format cannot hold."""


class UnknownPredicateError(MorphError):
    """A suite or predicate name is not registered."""


class BoundsTooLargeError(MorphError):
    """An exhaustive enumeration would exceed the evaluation limit."""
