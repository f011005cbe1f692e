"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GameSemanticsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GameSemanticsError, ValueError):
    """Malformed formula text; ``offset`` is a 0-based character index."""

    def __init__(self, offset: int, expected: str, found: str = "") -> None:
        self.offset = offset
        self.expected = expected
        self.found = found
        msg = f"at offset {offset}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class ValuationError(GameSemanticsError, ValueError):
    pass


class UnboundAtom(ValuationError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"atom {name!r} has no value")


class AlienValue(ValuationError):
    def __init__(self, value: object, logic: str) -> None:
        self.value = value
        super().__init__(f"value {value!r} is not in the alphabet of {logic}")


class EngineError(GameSemanticsError):
    pass


class NotYourTurn(EngineError):
    pass


class MissingChoice(EngineError):
    pass


class Terminal(EngineError):
    pass


class NonTerminal(EngineError):
    pass


class SolverError(GameSemanticsError):
    pass


class NoWinningStrategy(SolverError):
    pass


class Indeterminate(SolverError):
    """No unique dominant winner; would contradict determinacy."""


class BudgetExceeded(SolverError):
    def __init__(self, needed: int, cap: int) -> None:
        self.needed = needed
        self.cap = cap
        super().__init__(f"strategy space of {needed} profiles exceeds the cap of {cap}")
