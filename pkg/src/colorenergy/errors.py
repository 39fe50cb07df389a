"""Exception hierarchy shared by every module."""


class ColorEnergyError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    code = "error"

    def __init__(self, message: str = "", **context):
        super().__init__(message)
        self.context = context


class InvalidParams(ColorEnergyError, ValueError):
    code = "InvalidParams"


class SubsetTooSmall(InvalidParams):
    code = "SubsetTooSmall"


class VertexOutOfRange(InvalidParams):
    code = "VertexOutOfRange"


class InvalidColorCount(InvalidParams):
    code = "InvalidColorCount"


class MalformedColoring(InvalidParams):
    code = "MalformedColoring"


class CapacityExceeded(ColorEnergyError):
    code = "CapacityExceeded"


class NoCompatibleOrder(ColorEnergyError):
    code = "NoCompatibleOrder"


class IncompatibleOrder(ColorEnergyError):
    code = "IncompatibleOrder"


class HypothesisViolated(ColorEnergyError):
    code = "HypothesisViolated"


class LemmaRefuted(ColorEnergyError, AssertionError):
    """A guarantee that must always hold was observed to fail."""

    code = "LemmaRefuted"


class NotAReservoir(ColorEnergyError):
    code = "NotAReservoir"


class ReservoirTooSmall(ColorEnergyError):
    code = "ReservoirTooSmall"


class InsufficientSavings(ColorEnergyError):
    code = "InsufficientSavings"


class NotFound(ColorEnergyError):
    code = "NotFound"

    def __init__(self, message: str = "", exhaustive: bool = False, **context):
        super().__init__(message, exhaustive=exhaustive, **context)
        self.exhaustive = exhaustive


class ReservoirDepleted(NotFound):
    code = "ReservoirDepleted"


class ChapterGuaranteeFailed(LemmaRefuted):
    code = "ChapterGuaranteeFailed"


class PaddingInfeasible(NotFound):
    code = "PaddingInfeasible"


class Inapplicable(ColorEnergyError):
    code = "Inapplicable"


class CapExceeded(ColorEnergyError):
    code = "CapExceeded"


class ConstraintViolated(InvalidParams):
    code = "ConstraintViolated"
