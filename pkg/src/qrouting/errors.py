"""Exception taxonomy. Each analysis surface raises a named error so the CLI
can map failures to stable exit codes."""


class QRoutingError(Exception):
    """Base class for all package errors."""


# graph construction
class SelfLoopError(QRoutingError, ValueError): ...
class VertexOutOfRangeError(QRoutingError, ValueError): ...
class DuplicateEdgeError(QRoutingError, ValueError): ...
class UnknownFamilyError(QRoutingError, ValueError): ...
class BadParamsError(QRoutingError, ValueError): ...

# analysis preconditions
class DisconnectedError(QRoutingError): ...
class EmptySideError(QRoutingError, ValueError): ...
class NotBipartiteAcrossHintError(QRoutingError, ValueError): ...
class IsolatedVertexError(QRoutingError, ValueError): ...
class NoConvergenceError(QRoutingError): ...
class TooLargeError(QRoutingError): ...
class DegenerateBoundaryError(QRoutingError, ValueError): ...
class ZeroMatchingError(QRoutingError, ValueError): ...

# schedules and randomized routing
class NotAMatchingError(QRoutingError, ValueError): ...
class NotAnEdgeError(QRoutingError, ValueError): ...
class UnreachableEndpointError(QRoutingError): ...
class RetriesExhaustedError(QRoutingError): ...

# simulator
class TooManyQubitsError(QRoutingError): ...
class BadSizesError(QRoutingError, ValueError): ...
class BadSubsetError(QRoutingError, ValueError): ...
class NotUnitaryError(QRoutingError, ValueError): ...
class NotHermitianError(QRoutingError, ValueError): ...
class SupportViolationError(QRoutingError, ValueError): ...

# cross-module consistency gate: a computed lower bound exceeded an upper
# bound of the same model, which means a defect in this package, not in the
# input.
class ConsistencyError(QRoutingError): ...
