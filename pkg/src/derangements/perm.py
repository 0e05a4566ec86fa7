"""Permutations of [n] = {1..n}: representation, cycle notation, fixed points.

All public interfaces are 1-based. A permutation is stored as its one-line
image tuple ``(pi(1), ..., pi(n))``.

Cycle notation text follows the grammar::

    perm  := cycle+
    cycle := '(' elem (',' elem)* ')'
    elem  := '_'? uint

Whitespace is allowed between tokens. Fixed points must be written as
1-cycles, and at most one element may carry the ``_`` mark.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    DuplicateElement,
    EmptyInput,
    IsDerangement,
    LargestFixedPointIsOne,
    MalformedToken,
    MarkOutOfRange,
    MissingElement,
    MultipleMarks,
    SizeTooLarge,
)

MAX_ENUMERATION_SIZE = 10


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, given by its one-line image."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(self.image)
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"{image} is not a permutation of 1..{len(image)}")

    @classmethod
    def _trusted(cls, image: tuple[int, ...]) -> "Permutation":
        # skips validation; only for images built by this package
        p = object.__new__(cls)
        object.__setattr__(p, "image", image)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, text: str) -> "Permutation":
        return to_permutation(parse_cycles(text))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.image[i - 1]

    def __len__(self) -> int:
        return self.n

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles in canonical order: each starts at its minimum, sorted by minimum."""
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start - 1]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j - 1]
            out.append(tuple(cyc))
        return out

    def cycle_of(self, start: int) -> tuple[int, ...]:
        """The cycle containing ``start``, read forward from ``start``."""
        cyc = [start]
        j = self.image[start - 1]
        while j != start:
            cyc.append(j)
            j = self.image[j - 1]
        return tuple(cyc)

    def __str__(self) -> str:
        return to_canonical_cycles(self)


@dataclass(frozen=True)
class FixedPointStats:
    fixed_points: tuple[int, ...]
    largest: Optional[int]
    smallest: Optional[int]


@dataclass(frozen=True)
class CycleForm:
    """Disjoint cycles covering exactly {1..n}, with an optional marked element."""

    cycles: tuple[tuple[int, ...], ...]
    mark: Optional[int] = None

    def __post_init__(self):
        cycles = tuple(tuple(c) for c in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        seen: set[int] = set()
        for cyc in cycles:
            for e in cyc:
                if e in seen:
                    raise DuplicateElement(e)
                seen.add(e)
        n = max(seen, default=0)
        for e in range(1, n + 1):
            if e not in seen:
                raise MissingElement(e)
        if self.mark is not None and self.mark not in seen:
            raise MarkOutOfRange(f"mark {self.mark} is not an element of 1..{n}")

    @property
    def n(self) -> int:
        return max((max(c) for c in self.cycles), default=0)


def parse_cycles(text: str) -> CycleForm:
    """Parse cycle notation such as ``"(2)(4)(_7,5,6)(1,3)"``."""
    if not text.strip():
        raise EmptyInput("no cycles given")
    cycles: list[tuple[int, ...]] = []
    mark: Optional[int] = None
    pos, end = 0, len(text)

    def skip_ws(i: int) -> int:
        while i < end and text[i].isspace():
            i += 1
        return i

    pos = skip_ws(pos)
    while pos < end:
        if text[pos] != "(":
            raise MalformedToken(pos, f"expected '(' but found {text[pos]!r}")
        pos += 1
        cyc: list[int] = []
        while True:
            pos = skip_ws(pos)
            start = pos
            marked = pos < end and text[pos] == "_"
            if marked:
                pos += 1
            digits_start = pos
            while pos < end and text[pos].isdigit():
                pos += 1
            if pos == digits_start:
                raise MalformedToken(start, "expected an element")
            value = int(text[digits_start:pos])
            if value < 1:
                raise MalformedToken(digits_start, "elements start at 1")
            if marked:
                if mark is not None:
                    raise MultipleMarks("more than one '_' mark")
                mark = value
            cyc.append(value)
            pos = skip_ws(pos)
            if pos >= end:
                raise MalformedToken(pos, "unterminated cycle")
            if text[pos] == ",":
                pos += 1
                continue
            if text[pos] == ")":
                pos += 1
                break
            raise MalformedToken(pos, f"expected ',' or ')' but found {text[pos]!r}")
        cycles.append(tuple(cyc))
        pos = skip_ws(pos)
    return CycleForm(tuple(cycles), mark)


def to_permutation(c: CycleForm) -> Permutation:
    image = [0] * c.n
    for cyc in c.cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            image[a - 1] = b
    return Permutation._trusted(tuple(image))


def to_cycle_form(p: Permutation, mark: Optional[int] = None) -> CycleForm:
    if mark is not None and not 1 <= mark <= p.n:
        raise MarkOutOfRange(f"mark {mark} is not an element of 1..{p.n}")
    return CycleForm(tuple(p.cycles()), mark)


def to_canonical_cycles(p: Permutation, mark: Optional[int] = None) -> str:
    if mark is not None and not 1 <= mark <= p.n:
        raise MarkOutOfRange(f"mark {mark} is not an element of 1..{p.n}")
    parts = []
    for cyc in p.cycles():
        parts.append("(" + ",".join(f"_{e}" if e == mark else str(e) for e in cyc) + ")")
    return "".join(parts)


def fixed_point_stats(p: Permutation) -> FixedPointStats:
    fixed = tuple(i for i, v in enumerate(p.image, 1) if i == v)
    if not fixed:
        return FixedPointStats((), None, None)
    return FixedPointStats(fixed, fixed[-1], fixed[0])


def largest_fixed_point(p: Permutation) -> Optional[int]:
    for i in range(p.n, 0, -1):
        if p.image[i - 1] == i:
            return i
    return None


def smallest_fixed_point(p: Permutation) -> Optional[int]:
    for i, v in enumerate(p.image, 1):
        if i == v:
            return i
    return None


def is_derangement(p: Permutation) -> bool:
    return all(i != v for i, v in enumerate(p.image, 1))


def reverse_complement(p: Permutation) -> Permutation:
    """pi'(i) = n+1 - pi(n+1-i); an involution swapping largest and smallest fixed points."""
    n = p.n
    return Permutation._trusted(tuple(n + 1 - p.image[n - i] for i in range(1, n + 1)))


def relabel_complement(p: Permutation) -> Permutation:
    """Replace every entry e of the cycle form by n+1-e.

    Kept as a separate construction so tests can confirm it agrees with
    :func:`reverse_complement`.
    """
    n = p.n
    cycles = tuple(tuple(n + 1 - e for e in cyc) for cyc in p.cycles())
    return to_permutation(CycleForm(cycles))


@dataclass(frozen=True)
class SameSize:
    perm: Permutation


@dataclass(frozen=True)
class Shrunk:
    perm: Permutation


StepImage = Union[SameSize, Shrunk]


def ank_step_map(p: Permutation) -> StepImage:
    """Lower the largest fixed point by one.

    For ``pi(1) = m != 1``: move m to the end of the one-line form, replace the
    entry 1 with n+1, subtract one from every entry. For ``pi(1) = 1``: drop the
    first entry and subtract one from the rest.
    """
    k = largest_fixed_point(p)
    if k is None:
        raise IsDerangement("the step map needs a fixed point")
    if k == 1:
        raise LargestFixedPointIsOne("largest fixed point 1 has no image")
    n = p.n
    word = p.image
    if word[0] != 1:
        moved = word[1:] + word[:1]
        return SameSize(Permutation._trusted(tuple((n + 1 if v == 1 else v) - 1 for v in moved)))
    return Shrunk(Permutation._trusted(tuple(v - 1 for v in word[1:])))


def enumerate_permutations(
    n: int, *, max_size: int = MAX_ENUMERATION_SIZE, reverse: bool = False
) -> Iterator[Permutation]:
    """All n! permutations of [n] in lexicographic order of their one-line form.

    ``reverse=True`` yields the same set in reverse lexicographic order.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > max_size:
        raise SizeTooLarge(f"n={n} exceeds the enumeration cap {max_size}")
    items: Sequence[int] = range(n, 0, -1) if reverse else range(1, n + 1)
    for image in itertools.permutations(items):
        yield Permutation._trusted(image)
