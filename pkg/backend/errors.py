from typing import Any


class PosetError(Exception):
    """Base class for every error raised by the verifier"""


class MalformedConditionError(PosetError):
    """U is not total on A×n, or some value is not a subset of A"""

    def __init__(self, message: str, field: str, witness: tuple[Any, ...] = ()):
        super().__init__(message)
        self.field = field
        self.witness = witness


class InvalidConditionError(PosetError):
    """A condition fails (P1)-(P3) where validity is a precondition"""

    def __init__(self, message: str, verdict: Any = None):
        super().__init__(message)
        self.verdict = verdict


class DuplicatePointError(PosetError):
    """The point is already in the support of the condition"""


class AmalgamationHypothesisError(PosetError):
    """An amalgamation request violates the amalgamation hypothesis"""

    def __init__(self, clause: str, message: str):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


class NotTwinsError(AmalgamationHypothesisError):
    """The two conditions are not twins"""

    def __init__(self, message: str = "p0 and p1 are not twins"):
        super().__init__("twins", message)


class WellDefinednessError(PosetError):
    """The two readings of U'(δ,j) for a root point δ disagree"""

    def __init__(self, delta: int, j: int, reading0: frozenset, reading1: frozenset):
        super().__init__(
            f"U'({delta},{j}) is not well defined: "
            f"{sorted(reading0)} != {sorted(reading1)}"
        )
        self.delta = delta
        self.j = j
        self.reading0 = reading0
        self.reading1 = reading1


class NotAChainError(PosetError):
    """A sequence of conditions is not descending under the extension order"""


class NoAmalgamablePairError(PosetError):
    """No pair of a marked family qualifies for amalgamation"""


class SearchBudgetExceeded(PosetError):
    """A finite topology search exceeds its size caps"""


class SimulationBudgetExceeded(PosetError):
    """A simulation ran out of extension steps"""

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class UnknownPropertyError(PosetError):
    """A fuzz property or mutation name is not registered"""


class PropertyHoldsError(PosetError):
    """shrink was asked to minimize an input on which the property holds"""


class DocumentError(PosetError):
    """A JSON document cannot be decoded"""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


class InvalidSpaceError(PosetError):
    """A finite space, generating family or candidate base is ill-formed"""


class ConfigurationError(PosetError):
    """Simulation or generator parameters are out of range"""


class PostconditionError(PosetError):
    """A construction's stated postcondition fails on its own output"""
