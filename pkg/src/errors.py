"""Exception hierarchy shared by every conelab module."""


class ConelabError(Exception):
    """Base class for all conelab failures."""


class ParseError(ConelabError):
    """Expression text does not follow the grammar.

    Attributes:
        offset: Byte offset of the offending token in the input.
    """

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at byte {offset})")
        self.reason = message
        self.offset = offset


class DimensionError(ConelabError):
    """Point length or variable list does not match."""


class DegenerateError(ConelabError):
    """Zero or constant polynomial where a nonconstant one is required."""


class NotOnVarietyError(ConelabError):
    """The analyzed point does not lie on the variety."""


class FactorizationTimeout(ConelabError):
    """Polynomial exceeds the configured factorization degree cap."""


class AnalysisError(ConelabError):
    """A numeric analysis could not produce a result."""


class EmptyVarietyError(AnalysisError):
    """No variety points were found where some were required."""


class IsolatedPointError(AnalysisError):
    """The point is an isolated real point: no real half-branch passes through it."""


class PuiseuxDepthError(AnalysisError):
    """Newton-Puiseux recursion hit the depth cap.

    Attributes:
        partial: Branches completed before the cap was reached.
    """

    def __init__(self, message: str, partial: list | None = None):
        super().__init__(message)
        self.partial = partial or []
