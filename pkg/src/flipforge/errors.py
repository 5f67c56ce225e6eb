"""Exception types raised across the package."""


class FlipForgeError(Exception):
    """Base class for every error raised by flipforge."""


class InvalidGluing(FlipForgeError):
    pass


class BoundaryWithoutMarkedPoint(FlipForgeError):
    pass


class SignatureMismatch(FlipForgeError):
    pass


class NotTriangulable(FlipForgeError):
    pass


class NotFlippable(FlipForgeError):
    pass


class DisconnectedWord(FlipForgeError):
    pass


class InessentialArc(FlipForgeError):
    """A word reduces to a loop that bounds an unpunctured disk."""


class BaseMismatch(FlipForgeError):
    pass


class NotRealizable(FlipForgeError):
    pass


class NotInStratum(FlipForgeError):
    pass


class PreconditionUnmet(FlipForgeError):
    pass


class HypothesisUnmet(FlipForgeError):
    pass


class ShapeMismatch(FlipForgeError):
    pass


class SearchBudgetExceeded(FlipForgeError):
    pass


class CensusBudgetExceeded(SearchBudgetExceeded):
    pass


class SchemaError(FlipForgeError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class InvariantViolation(FlipForgeError):
    """An internal consistency check failed; this indicates a bug or a false lemma."""
