"""Exception hierarchy shared by every module."""


class NilgeoError(Exception):
    """Base class; the CLI maps subclasses onto exit codes."""

    exit_code = 2


class ParseError(NilgeoError):
    pass


class NotTwoStep(NilgeoError):
    pass


class DegenerateMetric(NilgeoError):
    pass


class NotAntisymmetric(NilgeoError):
    pass


class NonadaptedExact(NilgeoError):
    pass


class NotCentralArgument(NilgeoError):
    pass


class DependentVectors(NilgeoError):
    pass


class DegenerateCenter(NilgeoError):
    pass


class DimensionMismatch(NilgeoError):
    pass


class SeedInvalid(NilgeoError):
    exit_code = 1

    def __init__(self, message, identity=None, witness=None):
        super().__init__(message)
        self.identity = identity
        self.witness = witness


class MethodUnavailable(NilgeoError):
    exit_code = 3


class ClosedFormUnavailable(MethodUnavailable):
    pass


class NotDiagonalizable(MethodUnavailable):
    pass


class GeodesicOverflow(MethodUnavailable):
    pass


class ObstructedTranslation(NilgeoError):
    pass


class InconsistentSolve(NilgeoError):
    pass


class NotFlatCase(NilgeoError):
    pass


class NullDistinguished(NilgeoError):
    pass
