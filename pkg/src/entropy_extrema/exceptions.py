"""Exception hierarchy.

All errors raised by the library derive from :class:`EntropyExtremaError`
and also from ``ValueError`` so that generic input validation handlers keep
working.
"""


class EntropyExtremaError(ValueError):
    pass


class NonFinite(EntropyExtremaError):
    pass


class NotHermitian(EntropyExtremaError):
    pass


class NotPSD(EntropyExtremaError):
    pass


class NotNormalized(EntropyExtremaError):
    pass


class ZeroMatrix(EntropyExtremaError):
    pass


class BadExponent(EntropyExtremaError):
    pass


class EmptyBasis(EntropyExtremaError):
    pass


class EmptySubspace(EntropyExtremaError):
    pass


class NotInSubspace(EntropyExtremaError):
    pass


class FieldMismatch(EntropyExtremaError):
    pass


class NotOrthogonal(EntropyExtremaError):
    pass


class NotCommuting(EntropyExtremaError):
    pass


class NotFullRank(EntropyExtremaError):
    pass


class DegenerateSpectrum(EntropyExtremaError):
    pass


class InvariantViolation(EntropyExtremaError):
    """A post-condition that the theory guarantees did not hold numerically."""


class OddDimension(EntropyExtremaError):
    pass


class DimensionTooSmall(EntropyExtremaError):
    pass


class InvalidFamily(EntropyExtremaError):
    pass
