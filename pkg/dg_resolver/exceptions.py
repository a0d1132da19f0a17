class DGResolverError(Exception):
    """Base class for every error raised by dg_resolver."""


class DomainMismatchError(DGResolverError, ValueError):
    pass


class InvalidSubstitutionError(DGResolverError, ValueError):
    pass


class InvalidAlgebraError(DGResolverError, ValueError):
    pass


class InvalidMorphismError(DGResolverError, ValueError):
    pass


class InvalidCellError(DGResolverError, ValueError):
    pass


class InvalidAugmentationError(DGResolverError, ValueError):
    pass


class InvalidElementError(DGResolverError, ValueError):
    """An element is inhomogeneous, not closed, or of the wrong degree."""


class NotACocycleError(InvalidElementError):
    pass


class NotAChainMapError(DGResolverError, ValueError):
    pass


class PreconditionError(DGResolverError, ValueError):
    pass


class DimensionMismatchError(DGResolverError, ValueError):
    pass


class UnsupportedModeError(DGResolverError, ValueError):
    pass


class ResourceLimitError(DGResolverError, RuntimeError):
    """A configured degree, step or variable cap was exceeded."""


class SolverCapExceeded(ResourceLimitError):
    """A bounded linear solve found no solution up to its exponent cap."""

    def __init__(self, message, cap=None, generator=None):
        super().__init__(message)
        self.cap = cap
        self.generator = generator


class FormIdentityError(DGResolverError, AssertionError):
    pass


class DSLError(DGResolverError, ValueError):
    """
    Error raised while reading the algebra description language.

    Attributes:
        line (int): 1-based line of the offending token.
        column (int): 1-based column of the offending token.
        path (str): The file being read, set by `dsl.load`.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        self.path = None
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class DSLLexicalError(DSLError):
    pass


class DSLSyntaxError(DSLError):
    pass


class DSLResolutionError(DSLError):
    pass
