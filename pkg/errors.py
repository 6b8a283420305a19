"""Exception hierarchy shared by every package in the repo."""


class CsbError(Exception):
    pass


class CycleDetected(CsbError):
    """Raised when a graph admits no topological order."""
    pass


class UnknownNode(CsbError):
    pass


class NonPositiveStd(CsbError):
    pass


class DimensionMismatch(CsbError):
    pass


class ShapeMismatch(CsbError):
    pass


class NonFiniteLoss(CsbError):
    """Training diverged. Carries the step and the last finite loss seen."""
    def __init__(self, message, step=None, last_loss=None):
        super().__init__(message)
        self.step = step
        self.last_loss = last_loss


class NonFiniteState(CsbError):
    """Integration blew up at `step`."""
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class UnfittedModel(CsbError):
    pass


class EmptyProtectedSet(CsbError):
    pass


class DegenerateTarget(CsbError):
    pass


class SingularMatrix(CsbError):
    pass


class ConfigError(CsbError):
    pass


class DatasetFormatError(CsbError):
    pass
