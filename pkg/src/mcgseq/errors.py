"""Exception hierarchy shared by all modules."""


class McgseqError(Exception):
    """Base class for all domain errors."""


class ParseError(McgseqError):
    """Malformed input text (manifold, family, word, assignment, ...)."""


class OracleError(McgseqError):
    """Ill-formed group oracle data: bad table, bad word, non-invertible action."""


class NotReducible(McgseqError):
    """The described manifold has no essential sphere (k + l < 2 and l = 0)."""


class InvalidFamily(McgseqError):
    """A block multiset violates the laminar family invariants."""


class NotSymmetric(McgseqError):
    """Operation requires a symmetric sphere system."""


class NotAllowable(McgseqError):
    """Assignment is not an allowable assignment for the target system."""


class ManifoldMismatch(McgseqError):
    """Operands belong to different ambient manifolds."""


class InvalidWord(McgseqError):
    """A generator letter violates its invariants for the ambient manifold."""


class NotLaminarAfterSlide(McgseqError):
    """A slide produced a membership pattern that is not laminar.

    The slide path is not realizable in normal position; the action is
    rejected rather than silently repaired.
    """


class Unreachable(McgseqError):
    """Exhaustive search found no word realizing the target; model violation."""


class NotDiscrepant(McgseqError):
    """Word does not educe to the identity, so it cannot be factored."""


class TypeMismatch(McgseqError):
    """Permutation does not preserve summand homeomorphism types."""
