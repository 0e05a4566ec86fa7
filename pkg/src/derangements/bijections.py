"""Marked permutations and the two bijections built on them.

``phi`` sends a derangement of [n+1] to a non-derangement of [n] with a mark
at most its largest fixed point; ``psi`` sends a permutation of [n+1] with at
least two fixed points to a non-derangement of [n] with a mark at most its
smallest fixed point. Both have explicit inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .errors import (
    InvariantViolation,
    NotDerangement,
    SizeTooLarge,
    SizeTooSmall,
    TooFewFixedPoints,
)
from .perm import (
    Permutation,
    enumerate_permutations,
    fixed_point_stats,
    is_derangement,
    largest_fixed_point,
    parse_cycles,
    smallest_fixed_point,
    to_canonical_cycles,
    to_permutation,
)

MAX_MARKED_SIZE = 9


class Mode(Enum):
    L = "L"  # mark <= largest fixed point
    S = "S"  # mark <= smallest fixed point


@dataclass(frozen=True)
class MarkedPermutation:
    perm: Permutation
    mark: int
    mode: Mode

    def __post_init__(self):
        bound = largest_fixed_point(self.perm) if self.mode is Mode.L else smallest_fixed_point(self.perm)
        if bound is None:
            raise InvariantViolation("perm is a derangement")
        if not 1 <= self.mark <= bound:
            which = "largest" if self.mode is Mode.L else "smallest"
            raise InvariantViolation(f"mark {self.mark} exceeds the {which} fixed point {bound}")

    @classmethod
    def parse(cls, text: str, mode: Mode) -> "MarkedPermutation":
        form = parse_cycles(text)
        if form.mark is None:
            raise InvariantViolation("a marked permutation needs one '_' mark")
        return cls(to_permutation(form), form.mark, mode)

    @property
    def n(self) -> int:
        return self.perm.n

    def __str__(self) -> str:
        return to_canonical_cycles(self.perm, self.mark)


@dataclass(frozen=True)
class CycleDecompositionAtTop:
    """The cycle through the top element m, as (m, i_1, ..., i_r), and the rest."""

    top_cycle_tail: tuple[int, ...]
    rest: dict[int, int]


def decompose_at_top(p: Permutation) -> CycleDecompositionAtTop:
    top = p.n
    tail = p.cycle_of(top)[1:]
    on_top = set(tail)
    on_top.add(top)
    rest = {i: v for i, v in enumerate(p.image, 1) if i not in on_top}
    return CycleDecompositionAtTop(tail, rest)


def _assemble(n: int, mapping: dict[int, int]) -> Permutation:
    return Permutation._trusted(tuple(mapping[i] for i in range(1, n + 1)))


def _close_cycle(mapping: dict[int, int], cyc) -> None:
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        mapping[a] = b


def phi(p: Permutation) -> MarkedPermutation:
    """Derangement of [n+1] -> element of M_n (mode L)."""
    if p.n < 2:
        raise SizeTooSmall("phi needs a derangement of [n+1] with n >= 1")
    if not is_derangement(p):
        raise NotDerangement("phi is defined on derangements only")
    n = p.n - 1
    dec = decompose_at_top(p)
    tail = dec.top_cycle_tail
    r = len(tail)
    q = 1
    while q < r and tail[q - 1] < tail[q]:
        q += 1
    mapping = dict(dec.rest)
    for i in tail[:q]:
        mapping[i] = i
    if q == r:
        mark = tail[-1]
    else:
        _close_cycle(mapping, tail[q:])
        mark = tail[q]
    return MarkedPermutation(_assemble(n, mapping), mark, Mode.L)


def phi_inv(m: MarkedPermutation) -> Permutation:
    """Element of M_n -> derangement of [n+1]."""
    if m.mode is not Mode.L:
        raise InvariantViolation("phi_inv needs a mode-L marked permutation")
    p, j1 = m.perm, m.mark
    n = p.n
    fixed = [i for i in fixed_point_stats(p).fixed_points if i != j1]
    marked_cycle = p.cycle_of(j1)
    mapping = {i: v for i, v in enumerate(p.image, 1)}
    top = (n + 1, *fixed, *marked_cycle)
    _close_cycle(mapping, top)
    return _assemble(n + 1, mapping)


def psi(p: Permutation) -> MarkedPermutation:
    """Permutation of [n+1] with >= 2 fixed points -> element of M'_n (mode S)."""
    stats = fixed_point_stats(p)
    if len(stats.fixed_points) < 2:
        raise TooFewFixedPoints("psi needs at least two fixed points")
    top = p.n
    i = stats.smallest
    mapping = {e: v for e, v in enumerate(p.image, 1) if e != top}
    tail = p.cycle_of(top)[1:]
    if tail:
        # (i)(top, j_2..j_t) becomes (i, j_2..j_t)
        _close_cycle(mapping, (i, *tail))
    return MarkedPermutation(_assemble(top - 1, mapping), i, Mode.S)


def psi_inv(m: MarkedPermutation) -> Permutation:
    """Element of M'_n -> permutation of [n+1] with >= 2 fixed points."""
    if m.mode is not Mode.S:
        raise InvariantViolation("psi_inv needs a mode-S marked permutation")
    p, i = m.perm, m.mark
    n = p.n
    tail = p.cycle_of(i)[1:]
    mapping = {e: v for e, v in enumerate(p.image, 1)}
    mapping[i] = i
    _close_cycle(mapping, (n + 1, *tail))
    return _assemble(n + 1, mapping)


def enumerate_marked(n: int, mode: Mode, *, max_size: int = MAX_MARKED_SIZE) -> Iterator[MarkedPermutation]:
    """Every (perm, mark) pair of M_n (mode L) or M'_n (mode S), perms in lexicographic order."""
    if n < 1:
        raise SizeTooSmall("n must be at least 1")
    if n > max_size:
        raise SizeTooLarge(f"n={n} exceeds the cap {max_size}")
    bound_of = largest_fixed_point if mode is Mode.L else smallest_fixed_point
    for p in enumerate_permutations(n, max_size=max_size):
        bound = bound_of(p)
        if bound is None:
            continue
        for mark in range(1, bound + 1):
            yield MarkedPermutation(p, mark, mode)
