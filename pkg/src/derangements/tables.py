"""Exact counting: derangement numbers, the largest/smallest fixed point
triangles, their weighted row sums, and the derangement recurrence through
binomial sums and exponential generating functions.

Integers only, except for the rational series at the bottom of the module.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from math import comb, factorial
from typing import Iterator, Optional

from .errors import NotDerangement, RangeError, SizeTooSmall
from .perm import Permutation, is_derangement
from .series import EgfSeries, constant, exp_series


@dataclass(frozen=True)
class DerangementSequence:
    values: tuple[int, ...]

    @property
    def max_n(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.max_n:
            raise RangeError(f"d_{n} is outside the computed range 0..{self.max_n}")
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def derangements_up_to(N: int) -> DerangementSequence:
    """d_0..d_N from d_n = n*d_(n-1) + (-1)^n, with d_0 = 1."""
    if N < 0:
        raise RangeError("N must be non-negative")
    values = [1]
    for n in range(1, N + 1):
        values.append(n * values[-1] + (-1) ** n)
    return DerangementSequence(tuple(values))


@dataclass(frozen=True)
class CountTriangle:
    """Entries (n, k) for 1 <= k <= n <= max_n.

    ``kind`` is ``"a"`` (largest fixed point equals k) or ``"b"`` (smallest
    fixed point equals k).
    """

    kind: str
    rows: tuple[tuple[int, ...], ...]

    @property
    def max_n(self) -> int:
        return len(self.rows)

    def __getitem__(self, nk: tuple[int, int]) -> int:
        n, k = nk
        if not (1 <= n <= self.max_n and 1 <= k <= n):
            raise RangeError(f"({n},{k}) is outside the triangle 1<=k<=n<={self.max_n}")
        return self.rows[n - 1][k - 1]

    def row(self, n: int) -> tuple[int, ...]:
        if not 1 <= n <= self.max_n:
            raise RangeError(f"row {n} is outside 1..{self.max_n}")
        return self.rows[n - 1]

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(self.items())

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        for n, row in enumerate(self.rows, 1):
            for k, v in enumerate(row, 1):
                yield (n, k), v

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for (n, k), v in self.items():
            w.writerow([n, k, v])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "triangle": self.kind,
            "max_n": self.max_n,
            "entries": [{"n": n, "k": k, "value": v} for (n, k), v in self.items()],
        }
        return json.dumps(payload, indent=2) + "\n"

    def to_text(self) -> str:
        width = max(len(str(v)) for _, v in self.items()) if self.rows else 1
        header = "n\\k " + " ".join(f"{k:>{width}}" for k in range(1, self.max_n + 1))
        lines = [header.rstrip()]
        for n, row in enumerate(self.rows, 1):
            lines.append(f"{n:>3} " + " ".join(f"{v:>{width}}" for v in row))
        return "\n".join(lines) + "\n"


def a_triangle_by_prefix_sums(N: int, d: Optional[DerangementSequence] = None) -> CountTriangle:
    """a_{n,k} = d_{n-1} + sum_{j<k} a_{n-1,j}, using a running sum per row."""
    if N < 1:
        raise RangeError("N must be at least 1")
    if d is None or d.max_n < N - 1:
        d = derangements_up_to(N)
    rows: list[tuple[int, ...]] = [(1,)]
    for n in range(2, N + 1):
        prev = rows[-1]
        acc = d[n - 1]
        row = [acc]
        for j in range(1, n):
            acc += prev[j - 1]
            row.append(acc)
        rows.append(tuple(row))
    return CountTriangle("a", tuple(rows[:N]))


def a_triangle_by_difference_table(N: int) -> CountTriangle:
    """Euler's difference table: diagonal (n-1)!, then a_{n,k} = a_{n,k+1} - a_{n-1,k}.

    Needs no derangement numbers at all, so it is an independent route to the
    same triangle.
    """
    if N < 1:
        raise RangeError("N must be at least 1")
    rows: list[tuple[int, ...]] = []
    for n in range(1, N + 1):
        row = [0] * n
        row[n - 1] = factorial(n - 1)
        for k in range(n - 1, 0, -1):
            row[k - 1] = row[k] - rows[-1][k - 1]
        rows.append(tuple(row))
    return CountTriangle("a", tuple(rows))


def a_triangle(N: int) -> CountTriangle:
    return a_triangle_by_prefix_sums(N)


def b_triangle(N: int) -> CountTriangle:
    """b_{n,k} = a_{n,n+1-k}: each row of the a-triangle reversed."""
    a = a_triangle(N)
    return CountTriangle("b", tuple(tuple(reversed(row)) for row in a.rows))


def _weighted_row_sum(n: int, t: CountTriangle, kind: str) -> int:
    if not 1 <= n <= t.max_n:
        raise RangeError(f"n={n} is outside 1..{t.max_n}")
    row = t.row(n)
    if t.kind != kind:
        row = row[::-1]
    return sum(k * v for k, v in enumerate(row, 1))


def alpha(n: int, t: CountTriangle) -> int:
    """Sum of the largest fixed point over all non-derangements of [n]."""
    return _weighted_row_sum(n, t, "a")


def beta(n: int, t: CountTriangle) -> int:
    """Sum of the smallest fixed point over all non-derangements of [n].

    Accepts either triangle; an a-triangle is read with its rows reversed.
    """
    return _weighted_row_sum(n, t, "b")


def e_count(m: int, d: Optional[DerangementSequence] = None) -> int:
    """Number of permutations of [m] with at least two fixed points."""
    if m < 1:
        raise RangeError("m must be at least 1")
    if d is None or d.max_n < m:
        d = derangements_up_to(m)
    return factorial(m) - d[m] - m * d[m - 1]


def beta_sequence_csv(N: int) -> str:
    """``n,beta`` rows for n = 0..N; beta_0 = 0 is the empty-sum convention."""
    b = b_triangle(N)
    lines = ["n,beta", "0,0"]
    lines += [f"{n},{beta(n, b)}" for n in range(1, N + 1)]
    return "\n".join(lines) + "\n"


def dn_via_new_recurrence(n: int, d: DerangementSequence) -> int:
    """sum_{j=2..n} (j-1) C(n,j) d_{n-j}; the empty sum at n = 1 is 0."""
    if not 1 <= n <= d.max_n:
        raise RangeError(f"n={n} is outside 1..{d.max_n}")
    return sum((j - 1) * comb(n, j) * d[n - j] for j in range(2, n + 1))


class Case(Enum):
    CASE1 = 1
    CASE2 = 2


@dataclass(frozen=True)
class DecompositionClass:
    """Case1(r): the tail of the top cycle is increasing up to its second-last
    entry. Case2(q): the first descent of that tail sits at position q."""

    case: Case
    index: int

    def __str__(self) -> str:
        return f"case{self.case.value}({self.index})"


def classify_derangement(p: Permutation) -> DecompositionClass:
    """Split a derangement by its cycle through n, written (n, i_1, ..., i_r)."""
    if p.n < 2:
        raise SizeTooSmall("classification needs n >= 2")
    if not is_derangement(p):
        raise NotDerangement("classification is defined on derangements only")
    tail = p.cycle_of(p.n)[1:]
    r = len(tail)
    for q in range(1, r - 1):
        if tail[q - 1] > tail[q]:
            return DecompositionClass(Case.CASE2, q)
    return DecompositionClass(Case.CASE1, r)


def case1_count(n: int, r: int, d: DerangementSequence) -> int:
    return r * comb(n - 1, r) * d[n - r - 1] if n - r - 1 >= 0 else 0


def case2_count(n: int, q: int, d: DerangementSequence) -> int:
    return q * comb(n - 1, q + 1) * d[n - q - 1] if n - q - 1 >= 0 else 0


def egf_derangements(N: int) -> EgfSeries:
    """e^(-x)/(1-x) truncated at degree N."""
    if N < 0:
        raise RangeError("N must be non-negative")
    return exp_series(N, -1).div_one_minus_x()


def egf_identity_lhs(N: int) -> EgfSeries:
    """(e^(-x)/(1-x)) * (x e^x - e^x + 1)."""
    ex = exp_series(N)
    factor = ex.shift(1) - ex + constant(1, N)
    return egf_derangements(N) * factor


def egf_identity_check(N: int) -> bool:
    if N < 1:
        raise RangeError("N must be at least 1")
    return egf_identity_lhs(N) == egf_derangements(N) - constant(1, N)

