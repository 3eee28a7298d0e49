"""Exception hierarchy shared across the library and the CLI."""

from __future__ import annotations

__all__ = [
    "ExplainError", "InstanceFormatError", "UnknownTupleId", "UnknownPredicate",
    "QuerySyntaxError", "QueryNotSatisfied", "BoundExceeded",
    "OracleBoundExceeded", "PathBoundExceeded", "UnsupportedQuery",
    "CallerMustUseOracle", "UnsupportedPartition", "RepairNotFound",
    "ExplanationInvalid", "ChaseSeedError", "ChaseDefect",
]


class ExplainError(Exception):
    """Base class for all semantic errors raised by this package."""


class InstanceFormatError(ExplainError):
    """Malformed instance document: bad schema, duplicate tid, arity
    mismatch, or duplicate value list within a predicate."""


class UnknownTupleId(ExplainError):
    """A tuple identifier does not occur in the instance."""


class UnknownPredicate(ExplainError):
    """A query mentions a predicate absent from the instance schema."""


class QuerySyntaxError(ExplainError):
    """The query text does not conform to the grammar."""


class QueryNotSatisfied(ExplainError):
    """An operation that presupposes a true query answer was called on an
    instance where the query is false."""


class BoundExceeded(ExplainError):
    """An enumeration exceeded its configured size bound."""


class OracleBoundExceeded(BoundExceeded):
    """The endogenous part is too large for an exhaustive subset scan."""


class PathBoundExceeded(BoundExceeded):
    """Simple-path enumeration for a reachability query exceeded the
    configured path-count bound."""


class UnsupportedQuery(ExplainError):
    """The operation is only defined for Boolean conjunctive queries."""


class CallerMustUseOracle(UnsupportedQuery):
    """The polynomial minimum-set shortcut requires a self-join-free query;
    use the exhaustive enumerator instead."""


class UnsupportedPartition(ExplainError):
    """The fast path requires each query predicate's extension to be
    entirely endogenous or entirely exogenous."""


class RepairNotFound(ExplainError):
    """No repair exists when deletions are restricted to endogenous
    tuples (some violation is witnessed by exogenous tuples alone)."""


class ExplanationInvalid(ExplainError):
    """A candidate explanation set failed its kind-specific check."""


class ChaseSeedError(ExplainError):
    """The chase was started from an ineligible seed tuple."""


class ChaseDefect(ExplainError):
    """The chase could not produce a subset-minimal sufficient set through
    the seed.  With a self-join-free query this indicates a bug; with
    self-joins it can also mean that the seed participates in satisfying
    assignments but in no subset-minimal one, a situation the construction
    cannot detect up front (see README, "known divergences")."""
