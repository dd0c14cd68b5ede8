"""Exception types raised by the package."""


class ArtifactError(Exception):
    """Base class for all package errors."""


class UnsupportedType(ArtifactError):
    """Requested root system series/rank is not a supported crystallographic type."""


class GenericityFailure(ArtifactError):
    """No generic segment could be found within the retry budget."""


class NotFreeAction(ArtifactError):
    """A group action expected to be free on objects has a fixed point."""


class EndpointMismatch(ArtifactError):
    """Two morphism words do not share source and target."""


class PreconditionFailure(ArtifactError):
    """Inputs violate the precondition of a verifier."""


class ShapeMismatch(ArtifactError):
    """A matrix has the wrong shape for the face dimensions of a representation."""


class CompositionMismatch(ArtifactError):
    """Attempt to compose morphisms whose ends do not match."""


class WrongSystem(ArtifactError):
    """The root system is not of the type required by the operation."""
