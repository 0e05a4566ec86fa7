"""Named error types.

Every error carries a stable ``name`` (the class name) so callers, the CLI and
property tests can tell precisely which precondition or invariant failed.
"""

from __future__ import annotations


class CombError(ValueError):
    """Base class for all errors raised by this package."""

    @property
    def name(self) -> str:
        return type(self).__name__


# cycle notation
class EmptyInput(CombError):
    pass


class MalformedToken(CombError):
    def __init__(self, position: int, detail: str = ""):
        self.position = position
        msg = f"malformed token at position {position}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class DuplicateElement(CombError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} appears more than once")


class MissingElement(CombError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} is missing from the cycles")


class MultipleMarks(CombError):
    pass


class MarkOutOfRange(CombError):
    pass


# permutation maps
class IsDerangement(CombError):
    pass


class NotDerangement(CombError):
    pass


class LargestFixedPointIsOne(CombError):
    pass


class TooFewFixedPoints(CombError):
    pass


class InvariantViolation(CombError):
    pass


class SizeTooSmall(CombError):
    pass


class SizeTooLarge(CombError):
    pass


# tables / oracle / sampling
class RangeError(CombError):
    pass


class UnknownSpec(CombError):
    pass


class TooFewSamples(CombError):
    pass
