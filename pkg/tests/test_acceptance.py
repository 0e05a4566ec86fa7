"""Exit criteria. Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion."""

import io
import time
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import pytest

from derangements import cli, oracle, sampling, tables
from derangements.bijections import MarkedPermutation, Mode, phi, phi_inv, psi, psi_inv
from derangements.perm import (
    SameSize,
    Shrunk,
    ank_step_map,
    enumerate_permutations,
    fixed_point_stats,
    largest_fixed_point,
    parse_cycles,
    reverse_complement,
    to_permutation,
)

GOLDEN = Path(__file__).parent / "golden"
criterion = pytest.mark.criterion


@criterion(1, "Table 1 reproduced byte-identically by `table a --max-n 6`")
def test_c1_table_reproduction():
    start = time.perf_counter()
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(["table", "a", "--max-n", "6", "--format", "csv"], out, err)
    elapsed = time.perf_counter() - start
    assert code == 0
    assert out.getvalue() == (GOLDEN / "table_a_6.csv").read_text()
    a = tables.a_triangle(6)
    assert len(a.entries) == 21
    assert (a[5, 1], a[6, 2], a[6, 6]) == (9, 53, 120)
    assert elapsed < 1.0


@criterion(2, "alpha_n = d_(n+1): tables n<=12, brute force n<=8")
def test_c2_theorem_1():
    start = time.perf_counter()
    a, d = tables.a_triangle(12), tables.derangements_up_to(13)
    for n in range(1, 13):
        assert tables.alpha(n, a) == d[n + 1]
    for n in range(1, 9):
        assert oracle.brute_count(n, "sum_largest") == d[n + 1]
    assert time.perf_counter() - start < 60


@criterion(3, "beta_n = |E_(n+1)|: tables n<=12, brute force n<=8; beta_1..5 = 1,1,7,31,191")
def test_c3_theorem_2():
    b = tables.b_triangle(12)
    for n in range(1, 13):
        assert tables.beta(n, b) == tables.e_count(n + 1)
    for n in range(1, 9):
        assert oracle.brute_count(n, "sum_smallest") == tables.e_count(n + 1)
        assert oracle.brute_count(n + 1, "at_least_two_fixed") == tables.e_count(n + 1)
    assert [tables.beta(n, b) for n in range(1, 6)] == [1, 1, 7, 31, 191]
    # the listed sequence starts at beta_0 = 0 by convention
    assert (GOLDEN / "beta_sequence.csv").read_text() == tables.beta_sequence_csv(5)


PHI_PAIRS = [
    ("(12,2,4,9,7,5,6)(1,3)(8,11,10)", "(2)(4)(9)(_7,5,6)(1,3)(8,11,10)"),
    ("(10,2,7,8,3)(1,4,9)(5,6)", "(2)(7)(8)(_3)(1,4,9)(5,6)"),
    ("(10,2,3,7,8,4,9,1)(5,6)", "(2)(3)(7)(8)(_4,9,1)(5,6)"),
]
PSI_PAIRS = [
    ("(3)(10,1,7,2,8)(5)(6)(4,9)", "(_3,1,7,2,8)(5)(6)(4,9)"),
    ("(5)(10)(6)(3,1,7,2,8)(4,9)", "(_5)(6)(3,1,7,2,8)(4,9)"),
]


@criterion(4, "phi and psi pass totality/injectivity/surjectivity/round trips for n+1<=9")
@pytest.mark.parametrize("pi, marked", PHI_PAIRS)
def test_c4_phi_vectors(pi, marked):
    p = to_permutation(parse_cycles(pi))
    m = MarkedPermutation.parse(marked, Mode.L)
    assert phi(p) == m and phi_inv(m) == p


@criterion(4, "phi and psi pass totality/injectivity/surjectivity/round trips for n+1<=9")
@pytest.mark.parametrize("pi, marked", PSI_PAIRS)
def test_c4_psi_vectors(pi, marked):
    p = to_permutation(parse_cycles(pi))
    m = MarkedPermutation.parse(marked, Mode.S)
    assert psi(p) == m and psi_inv(m) == p


@criterion(4, "phi and psi pass totality/injectivity/surjectivity/round trips for n+1<=9")
def test_c4_exhaustive():
    start = time.perf_counter()
    for size in range(2, 10):
        for which in ("phi", "psi"):
            reports = oracle.verify_bijection(size, which)
            bad = [r for r in reports if not r.agrees]
            assert not bad, bad
    assert time.perf_counter() - start < 120


@criterion(5, "step map for a_(n,k) = a_(n,k-1) + a_(n-1,k-1) is bijective, n<=7")
def test_c5_step_map():
    a = tables.a_triangle(7)
    for n in range(2, 8):
        targets_same = {}
        targets_small = {}
        for p in enumerate_permutations(n):
            k = largest_fixed_point(p)
            if k is not None:
                targets_same.setdefault(k, set()).add(p)
        for p in enumerate_permutations(n - 1):
            k = largest_fixed_point(p)
            if k is not None:
                targets_small.setdefault(k, set()).add(p)
        for k in range(2, n + 1):
            domain = targets_same.get(k, set())
            images = [ank_step_map(p) for p in domain]
            assert len(set(images)) == len(domain) == a[n, k]
            same = {im.perm for im in images if isinstance(im, SameSize)}
            small = {im.perm for im in images if isinstance(im, Shrunk)}
            assert same == targets_same.get(k - 1, set())
            assert small == targets_small.get(k - 1, set())


@criterion(6, "d_n by the binomial recurrence for n<=30; classifier counts for n<=8")
def test_c6_new_recurrence():
    d = tables.derangements_up_to(30)
    for n in range(1, 31):
        assert tables.dn_via_new_recurrence(n, d) == d[n]
    assert d[30] == 97581073836835777732377428235481
    reports = oracle.full_sweep(8)
    case_reports = [r for r in reports if r.quantity in ("case1", "case2", "case_total")]
    assert case_reports and all(r.agrees for r in case_reports)
    for r in case_reports:
        if r.quantity == "case1":
            assert r.formula_value == r.k * comb(r.n - 1, r.k) * d[r.n - r.k - 1]
        elif r.quantity == "case2":
            assert r.formula_value == r.k * comb(r.n - 1, r.k + 1) * d[r.n - r.k - 1]
        else:
            assert r.brute_value == d[r.n]


@criterion(7, "n! [x^n] e^(-x)/(1-x) = d_n for n<=20 and the EGF identity at degree 20")
def test_c7_generating_functions():
    D = tables.egf_derangements(20)
    d = tables.derangements_up_to(20)
    assert all(isinstance(c, Fraction) for c in D.coeffs)
    assert [factorial(n) * D[n] for n in range(21)] == list(d.values)
    assert tables.egf_identity_check(20)


@criterion(8, "b_(n,k) = a_(n,n+1-k) for n<=12; involution and fixed-point symmetry n<=7")
def test_c8_symmetry():
    a, b = tables.a_triangle(12), tables.b_triangle(12)
    for n in range(1, 13):
        for k in range(1, n + 1):
            assert b[n, k] == a[n, n + 1 - k]
    for n in range(1, 8):
        for p in enumerate_permutations(n):
            q = reverse_complement(p)
            assert reverse_complement(q) == p
            fp, fq = fixed_point_stats(p), fixed_point_stats(q)
            assert set(fq.fixed_points) == {n + 1 - f for f in fp.fixed_points}
            if fp.fixed_points:
                assert fq.smallest == n + 1 - fp.largest
                assert fq.largest == n + 1 - fp.smallest


SEEDS = range(1, 11)


@criterion(9, "Monte Carlo limits at pinned seeds 1..10")
def test_c9_limits():
    start = time.perf_counter()
    for seed in SEEDS:
        rng = sampling.RngSpec(seed)
        s = sampling.estimate_largest_fp_mean(500, 100_000, rng)
        assert abs(s.mean - sampling.LARGEST_FP_LIMIT) <= 0.01, (seed, s)
        s = sampling.estimate_beta_fraction(100, 1_000_000, rng)
        assert abs(s.mean - sampling.BETA_FRACTION_LIMIT) <= 0.005, (seed, s)
        s = sampling.poisson_conditioned_max(1_000_000, rng)
        assert abs(s.mean - sampling.LARGEST_FP_LIMIT) <= 3 * s.std_error, (seed, s)
    assert time.perf_counter() - start < 180


@criterion(10, "E[largest fixed point] = d_(n+1)/(n! - d_n), exact, n<=8")
def test_c10_exact_expectation():
    assert sampling.exact_expected_largest(3) == Fraction(9, 4)
    d = tables.derangements_up_to(9)
    for n in range(1, 9):
        brute = Fraction(oracle.brute_count(n, "sum_largest"), factorial(n) - oracle.brute_count(n, "derangement"))
        assert sampling.exact_expected_largest(n) == brute
        assert brute == Fraction(d[n + 1], factorial(n) - d[n])
