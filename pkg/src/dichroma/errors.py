"""Exception hierarchy shared by every module of the package."""


class DichromaError(Exception):
    """Base class for all errors raised by dichroma."""


class InvalidGraphError(DichromaError, ValueError):
    pass


class LoopArc(InvalidGraphError):
    pass


class AntiParallelPair(InvalidGraphError):
    pass


class DuplicateArc(InvalidGraphError):
    pass


class VertexOutOfRange(InvalidGraphError):
    pass


class ArcNotPresent(DichromaError, KeyError):
    pass


class OrientationConflict(DichromaError):
    pass


class InvalidIdentification(DichromaError, ValueError):
    pass


class SizeLimitExceeded(DichromaError):
    pass


class BudgetExceeded(DichromaError):
    pass


class ParseError(DichromaError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


# colouring engine

class LengthMismatch(DichromaError, ValueError):
    pass


class ColourOutOfRange(DichromaError, ValueError):
    pass


class EmptyDigraph(DichromaError, ValueError):
    pass


class NotATournament(DichromaError):
    pass


class ColouringDisagreement(DichromaError):
    pass


class InvalidInputColouring(DichromaError):
    pass


# planar embeddings

class InconsistentRotation(DichromaError, ValueError):
    pass


class NotPlanarEmbedding(DichromaError, ValueError):
    pass


class NotSeparating(DichromaError, ValueError):
    pass


class BadHeader(DichromaError, ValueError):
    pass


class TruncatedStream(DichromaError, ValueError):
    pass


class NotATriangulation(DichromaError, ValueError):
    pass


# gadget constructions

class NoGadgetFound(DichromaError):
    pass


class NotTransitive(DichromaError, ValueError):
    pass


class NotFacial(DichromaError, ValueError):
    pass


class OracleFailure(DichromaError):
    """The exact solver reported Unsatisfiable where the constructions expect a colouring.

    Such an instance would be evidence against planar 2-colourability, so it is
    always raised and never swallowed.
    """


class MonochromaticPre(DichromaError, ValueError):
    pass


# minor decomposition

class HasK5Minor(DichromaError):
    def __init__(self, witness):
        super().__init__("graph has a K5 minor")
        self.witness = witness


class NoSmallSeparator(DichromaError):
    pass


class PreDomainNotEdgeOrTriangle(DichromaError, ValueError):
    pass


class MonochromaticTrianglePre(DichromaError, ValueError):
    pass
