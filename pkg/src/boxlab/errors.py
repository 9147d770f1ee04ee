"""Exception types shared across boxlab."""


class BoxlabError(Exception):
    """Base class for all boxlab errors."""


class CapacityError(BoxlabError, ValueError):
    """A dense array would exceed the configured size cap."""


class StructuralError(BoxlabError, ValueError):
    """Operands disagree on modulus or dimension."""


class DegenerateInputError(BoxlabError, ValueError):
    """Input is too small for the requested construction."""


class ResolutionError(BoxlabError, ValueError):
    """The grid is too coarse to resolve the requested geometry."""


class PreconditionError(BoxlabError, ValueError):
    """A documented precondition was violated."""


class SeparationError(BoxlabError):
    """No pair of separated dyadic cubes exists at the available resolution."""


class ConfigError(BoxlabError, ValueError):
    """An experiment configuration is missing or has malformed parameters."""
