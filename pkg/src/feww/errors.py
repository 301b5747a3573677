"""Exception types shared across the package."""


class StreamError(ValueError):
    """Base class for malformed or illegal update streams."""


class MalformedStream(StreamError):
    """A stream file or update sequence violates the stream format."""


class DuplicateInsert(StreamError):
    """Insertion of an edge that is already present (streams must stay simple)."""


class DeleteAbsent(StreamError):
    """Deletion of an edge that is not present."""


class DeletionUnsupported(StreamError):
    """A deletion reached an insertion-only component."""


class EmptyGraph(ValueError):
    """An operation that needs at least one edge was called on an empty graph."""


class ProbabilityOutOfRange(ValueError):
    """A probability argument was outside [0, 1]."""


class CoordinateOutOfRange(ValueError):
    """A sketch coordinate was outside [0, dim)."""


class SketchFailure(RuntimeError):
    """A sampler could not verify any one-sparse cell; counted toward delta."""


class SelfLoop(ValueError):
    """A general-graph edge with identical endpoints."""


class ColumnOutOfRange(ValueError):
    """A witness column index does not belong to the encoding's column space."""


class ParameterOrderViolation(ValueError):
    """Numeric parameters violate a required ordering (e.g. y <= k <= n)."""


class SpaceBoundViolation(RuntimeError):
    """Measured space exceeded the configured bound."""


class UnsoundWitness(RuntimeError):
    """An algorithm reported a witness edge that is not in the graph."""
