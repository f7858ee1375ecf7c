"""Typed error vocabulary shared across the package.

Everything that maps to CLI exit code 2 derives from DomainError.
OracleRefuted is kept separate: it means an issued or candidate
certificate was contradicted by exhaustive word enumeration, which is a
hard failure (exit code 3), not a bad input.
"""


class DomainError(Exception):
    """Base class for typed precondition / numeric-domain failures."""


class InvalidPoint(DomainError):
    pass


class DegenerateAngle(DomainError):
    pass


class ProjectionUndefined(DomainError):
    pass


class SharedEndpoint(DomainError):
    pass


class SharedFixedPoint(DomainError):
    pass


class ModelMismatch(DomainError):
    pass


class InvalidMatrix(DomainError):
    pass


class InvalidWord(DomainError):
    pass


class NumericallyAmbiguous(DomainError):
    pass


class NonpositiveEps(DomainError):
    pass


class EpsTooLarge(DomainError):
    pass


class NonpositiveL(DomainError):
    pass


class TauTooLarge(DomainError):
    pass


class TauExceedsEps(DomainError):
    pass


class PowerOutOfRange(DomainError):
    pass


class PreconditionDisplacement(DomainError):
    pass


class MonotonicityViolation(DomainError):
    pass


class EllipticInput(DomainError):
    pass


class Elementary(DomainError):
    pass


class NotCase1(DomainError):
    pass


class NotCase2(DomainError):
    pass


class NotAlternating(DomainError):
    pass


class HypothesisGapMissing(DomainError):
    pass


class DisjointnessUnverified(DomainError):
    pass


class SearchExhausted(DomainError):
    pass


class DepthTooLarge(DomainError):
    pass


class UnknownSuite(DomainError):
    pass


class UncertifiedBound(DomainError):
    pass


class OracleRefuted(Exception):
    """A freeness claim was contradicted by exhaustive enumeration."""

    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation
