"""Brute-force ground truth by exhaustive enumeration of S_n.

Brute values here come only from walking permutations; no closed form from
:mod:`derangements.tables` is used to produce them. The tables module is
consulted only for the ``formula`` side of each report.
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional

from . import tables
from .bijections import MarkedPermutation, Mode, enumerate_marked, phi, phi_inv, psi, psi_inv
from .errors import CombError, SizeTooLarge, SizeTooSmall, UnknownSpec
from .perm import enumerate_permutations

MAX_ORACLE_SIZE = 9


@dataclass(frozen=True)
class OracleReport:
    n: int
    quantity: str
    brute_value: int
    formula_value: int
    k: Optional[int] = None

    @property
    def agrees(self) -> bool:
        return self.brute_value == self.formula_value


def reports_to_csv(reports: list[OracleReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "n", "k", "brute", "formula", "agrees"])
    for r in reports:
        w.writerow([r.quantity, r.n, "" if r.k is None else r.k, r.brute_value, r.formula_value,
                    "true" if r.agrees else "false"])
    return buf.getvalue()


def _check_size(n: int, cap: int) -> None:
    if n > cap:
        raise SizeTooLarge(f"n={n} exceeds the oracle cap {cap}")


def _fixed(image) -> list[int]:
    return [i for i, v in enumerate(image, 1) if i == v]


_SPEC = re.compile(r"^(derangement|at_least_two_fixed|sum_largest|sum_smallest|largest=(\d+)|smallest=(\d+))$")


def brute_count(n: int, spec: str, *, max_size: int = MAX_ORACLE_SIZE) -> int:
    """Count permutations of [n] matching ``spec``, or sum a statistic.

    Specs: ``derangement``, ``largest=K``, ``smallest=K``,
    ``at_least_two_fixed``, ``sum_largest``, ``sum_smallest`` (the sums run
    over non-derangements).
    """
    m = _SPEC.match(spec.strip())
    if not m:
        raise UnknownSpec(f"unknown spec {spec!r}")
    _check_size(n, max_size)
    kind = m.group(1)
    if kind.startswith("largest="):
        k = int(m.group(2))
        stat: Callable[[list[int]], int] = lambda f: int(bool(f) and f[-1] == k)
    elif kind.startswith("smallest="):
        k = int(m.group(3))
        stat = lambda f: int(bool(f) and f[0] == k)
    elif kind == "derangement":
        stat = lambda f: int(not f)
    elif kind == "at_least_two_fixed":
        stat = lambda f: int(len(f) >= 2)
    elif kind == "sum_largest":
        stat = lambda f: f[-1] if f else 0
    else:
        stat = lambda f: f[0] if f else 0
    return sum(stat(_fixed(p.image)) for p in enumerate_permutations(n, max_size=max_size))


@dataclass
class _Tally:
    derangements: int = 0
    at_least_two: int = 0
    sum_largest: int = 0
    sum_smallest: int = 0

    def __post_init__(self):
        self.largest: Counter = Counter()
        self.smallest: Counter = Counter()
        self.classes: Counter = Counter()


def _tally(n: int, reverse: bool, max_size: int) -> _Tally:
    t = _Tally()
    for p in enumerate_permutations(n, max_size=max_size, reverse=reverse):
        f = _fixed(p.image)
        if not f:
            t.derangements += 1
            if n >= 2:
                t.classes[str(tables.classify_derangement(p))] += 1
            continue
        t.largest[f[-1]] += 1
        t.smallest[f[0]] += 1
        t.sum_largest += f[-1]
        t.sum_smallest += f[0]
        if len(f) >= 2:
            t.at_least_two += 1
    return t


def full_sweep(max_n: int, *, reverse: bool = False, max_size: int = MAX_ORACLE_SIZE) -> list[OracleReport]:
    """Compare every counted quantity for n = 1..max_n against the tables module."""
    _check_size(max_n, max_size)
    d = tables.derangements_up_to(max_n + 1)
    a = tables.a_triangle(max_n)
    b = tables.b_triangle(max_n)
    reports: list[OracleReport] = []
    for n in range(1, max_n + 1):
        t = _tally(n, reverse, max_size)
        reports.append(OracleReport(n, "d", t.derangements, d[n]))
        for k in range(1, n + 1):
            reports.append(OracleReport(n, "a", t.largest[k], a[n, k], k))
        for k in range(1, n + 1):
            reports.append(OracleReport(n, "b", t.smallest[k], b[n, k], k))
        reports.append(OracleReport(n, "alpha", t.sum_largest, tables.alpha(n, a)))
        reports.append(OracleReport(n, "beta", t.sum_smallest, tables.beta(n, b)))
        reports.append(OracleReport(n, "e_count", t.at_least_two, tables.e_count(n, d)))
        if n >= 2:
            for r in range(1, n):
                reports.append(OracleReport(n, "case1", t.classes[f"case1({r})"], tables.case1_count(n, r, d), r))
            for q in range(1, n - 1):
                reports.append(OracleReport(n, "case2", t.classes[f"case2({q})"], tables.case2_count(n, q, d), q))
            closed = sum(tables.case1_count(n, r, d) for r in range(1, n))
            closed += sum(tables.case2_count(n, q, d) for q in range(1, n - 1))
            reports.append(OracleReport(n, "case_total", sum(t.classes.values()), closed))
    return reports


def verify_bijection(n_plus_1: int, which: str, *, max_size: int = MAX_ORACLE_SIZE) -> list[OracleReport]:
    """Set-level check of ``phi`` or ``psi`` on the whole domain of size n_plus_1.

    Reports (brute = what was observed, formula = what a bijection requires):
    ``image_valid``, ``distinct``, ``coverage``, ``roundtrip``,
    ``inverse_roundtrip`` and ``cardinality`` (domain size against the
    weighted row sum from the tables module). Map errors count as failures.
    """
    which = which.lower()
    if which not in ("phi", "psi"):
        raise UnknownSpec(f"unknown bijection {which!r}")
    _check_size(n_plus_1, max_size)
    if n_plus_1 < 2:
        raise SizeTooSmall("bijections need n+1 >= 2")
    n = n_plus_1 - 1
    if which == "phi":
        forward, backward, mode = phi, phi_inv, Mode.L
        in_domain = lambda f: not f
        expected = tables.alpha(n, tables.a_triangle(n))
    else:
        forward, backward, mode = psi, psi_inv, Mode.S
        in_domain = lambda f: len(f) >= 2
        expected = tables.beta(n, tables.b_triangle(n))

    domain = [p for p in enumerate_permutations(n_plus_1, max_size=max_size) if in_domain(_fixed(p.image))]
    codomain = set(enumerate_marked(n, mode, max_size=max_size))

    images: set[MarkedPermutation] = set()
    valid = roundtrip = 0
    for p in domain:
        try:
            img = forward(p)
        except CombError:
            continue
        if img.mode is mode and img.n == n:
            valid += 1
        images.add(img)
        try:
            if backward(img) == p:
                roundtrip += 1
        except CombError:
            pass

    inverse_ok = 0
    domain_set = set(domain)
    for m in codomain:
        try:
            back = backward(m)
            if back in domain_set and forward(back) == m:
                inverse_ok += 1
        except CombError:
            pass

    size = len(domain)
    return [
        OracleReport(n, f"{which}:image_valid", valid, size),
        OracleReport(n, f"{which}:distinct", len(images), size),
        OracleReport(n, f"{which}:coverage", len(images & codomain), len(codomain)),
        OracleReport(n, f"{which}:roundtrip", roundtrip, size),
        OracleReport(n, f"{which}:inverse_roundtrip", inverse_ok, len(codomain)),
        OracleReport(n, f"{which}:cardinality", size, expected),
    ]
