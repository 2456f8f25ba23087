import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engine.bounds import (
    alpha_kappa_value,
    best_excess_check,
    bound_from_stats,
    brent_bound,
    brent_input_from_matrix,
    complex_bound,
    entry_cap_bound,
    gasper_bound,
    hadamard_row_bound,
    progression_bound,
    progression_entries,
    relate_gap,
    ryser_bound,
    ryser_input_from_matrix,
    trace_det_check,
)
from engine.linalg import complex_abs_det, det_exact, entry_stats
from models.exceptions import (
    DimensionMismatch,
    EpsilonCapExceeded,
    InfeasiblePair,
    InvalidMatrix,
    NonpositiveBeta,
    NonpositiveStep,
    NotBinaryMatrix,
    NotSignMatrix,
)
from models.models import BrentInput, CaseTag, FormulaTag, Matrix, ProgressionMode, RyserInput
from tests.test_linalg import int_matrices

REL = 1e-9


def test_sample_matrix_bound(sample_matrix):
    report = gasper_bound(sample_matrix)
    assert report.bound == pytest.approx(math.sqrt(32), rel=REL)
    assert report.formula_tag is FormulaTag.ALPHA_KAPPA
    assert report.beta_power == pytest.approx(9)
    assert hadamard_row_bound(sample_matrix) == pytest.approx(math.sqrt(65), rel=REL)


def test_upper_triangular_bound():
    report = gasper_bound(Matrix([[1, 1], [0, 1]]))
    assert report.bound == pytest.approx(0.75 * math.sqrt(3), rel=REL)


def test_case_split_counterexample():
    m = Matrix([[1, 0], [0, -1]])
    report = gasper_bound(m)
    assert report.bound == 1
    assert report.formula_tag is FormulaTag.BETA_POWER
    assert report.alpha_kappa == 0
    assert alpha_kappa_value(report.stats) < abs(det_exact(m))


def test_equality_case_formulas_coincide():
    report = gasper_bound(Matrix.identity(3))
    assert report.formula_tag is FormulaTag.ALPHA_KAPPA
    assert report.bound == pytest.approx(report.beta_power, rel=1e-12)
    assert report.bound <= report.beta_power


def test_complex_bound_known_values():
    zero, ones = Matrix.zeros(2), Matrix.ones(2)
    report = complex_bound(zero, ones)
    assert report.bound_direct == pytest.approx(2, rel=REL)
    assert report.bound_swapped == pytest.approx(4 * 27**-0.25, rel=REL)
    assert report.bound == pytest.approx(4 * 27**-0.25, rel=REL)

    m = Matrix([[1, 1], [0, 1]])
    assert complex_bound(m, zero).bound_direct == pytest.approx(125**0.25 * math.sqrt(3) / 4, rel=REL)
    # iM = 0 + iM
    assert complex_bound(zero, m).bound_direct == pytest.approx(1.5, rel=REL)


def test_complex_bound_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        complex_bound(Matrix.identity(2), Matrix.identity(3))


@given(int_matrices())
@settings(max_examples=500, deadline=None)
def test_bound_dominates_determinant(rows):
    m = Matrix(rows)
    assert abs(float(det_exact(m))) <= gasper_bound(m).bound * (1 + REL)


@given(int_matrices(max_n=4), int_matrices(max_n=4))
@settings(max_examples=200, deadline=None)
def test_complex_bound_dominates(rows_a, rows_b):
    n = min(len(rows_a), len(rows_b))
    a = Matrix([row[:n] for row in rows_a[:n]])
    b = Matrix([row[:n] for row in rows_b[:n]])
    assert complex_abs_det(a, b) <= complex_bound(a, b).bound * (1 + 1e-7)


@given(int_matrices())
@settings(max_examples=300, deadline=None)
def test_hadamard_row_bound_below_beta_power(rows):
    m = Matrix(rows)
    report = gasper_bound(m)
    assert hadamard_row_bound(m) <= report.beta_power * (1 + 1e-12)


@given(int_matrices())
@settings(max_examples=300, deadline=None)
def test_alpha_kappa_strictly_tighter_when_alpha_sq_exceeds_beta(rows):
    report = gasper_bound(Matrix(rows))
    if report.stats.case_tag is CaseTag.ALPHA_SQ_GT_BETA:
        assert report.bound < report.beta_power


def test_huge_entries_give_infinite_bound_without_error():
    m = Matrix.identity(30).scale(10**11)
    report = gasper_bound(m)
    assert report.bound == math.inf
    assert report.formula_tag is FormulaTag.ALPHA_KAPPA
    assert hadamard_row_bound(m) == math.inf
    check = trace_det_check(m)
    assert check.holds and check.lhs == math.inf


@pytest.mark.slow
def test_bound_dominates_determinant_large_sample():
    rng = random.Random(2024)
    violations = 0
    for _ in range(100_000):
        n = rng.randint(2, 6)
        m = Matrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])
        if abs(float(det_exact(m))) > gasper_bound(m).bound * (1 + REL):
            violations += 1
    assert violations == 0


def test_entry_cap_bound_is_hadamard_inequality():
    assert entry_cap_bound(4, 1) == pytest.approx(16)
    assert entry_cap_bound(2, Fraction(1, 2)) == pytest.approx(0.5)


def test_best_excess_order_two_and_four():
    h2 = Matrix([[1, 1], [1, -1]])
    check = best_excess_check(h2)
    assert check.is_hadamard and check.alpha_sq_le_beta
    assert check.excess == 2 <= check.bound

    h4 = Matrix([[-1 if i == j else 1 for j in range(4)] for i in range(4)])
    check = best_excess_check(h4)
    assert check.is_hadamard
    assert check.excess == 8
    assert check.bound == pytest.approx(8)


def test_best_excess_rejects_and_detects_non_hadamard():
    with pytest.raises(NotSignMatrix):
        best_excess_check(Matrix([[1, 0], [1, 1]]))
    assert not best_excess_check(Matrix.ones(2)).is_hadamard


def test_ryser_all_binary_three_by_three():
    for bits in itertools.product((0, 1), repeat=9):
        m = Matrix.from_flat(bits, 3)
        inp = ryser_input_from_matrix(m)
        assert abs(det_exact(m)) <= ryser_bound(inp) * (1 + REL)


@pytest.mark.parametrize("t, expected", [(2, (2 / 3) ** 1.5), (3, 1.0), (6, 2.0), (9, 0.0)])
def test_ryser_cases(t, expected):
    assert ryser_bound(RyserInput(n=3, t=t)) == pytest.approx(expected, abs=1e-12)


def test_ryser_rejects_non_binary():
    with pytest.raises(NotBinaryMatrix):
        ryser_input_from_matrix(Matrix([[2, 0], [0, 1]]))


def _perturbation(rng: random.Random, n: int, eps: Fraction, zero_diagonal: bool) -> Matrix:
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = Fraction(0) if zero_diagonal and i == j else eps * Fraction(rng.randint(-100, 100), 100)
            row.append((1 if i == j else 0) - e)
        rows.append(row)
    return Matrix(rows)


@pytest.mark.parametrize("samples", [pytest.param(2_000), pytest.param(100_000, marks=pytest.mark.slow)])
def test_brent_bounds_on_random_perturbations(samples):
    rng = random.Random(7)
    for k in range(samples):
        n = rng.randint(2, 5)
        eps = Fraction(rng.randint(1, 50), 100)
        zero_diagonal = k % 2 == 1
        m = _perturbation(rng, n, eps, zero_diagonal)
        inp = brent_input_from_matrix(m, eps)
        if zero_diagonal:
            assert inp.zero_diagonal
        assert abs(float(det_exact(m))) <= brent_bound(inp) * (1 + REL)


def test_brent_zero_diagonal_is_tighter():
    general = brent_bound(BrentInput(n=4, epsilon=Fraction(1, 10)))
    zero_diag = brent_bound(BrentInput(n=4, epsilon=Fraction(1, 10), zero_diagonal=True))
    assert zero_diag < general
    assert general == pytest.approx(1.24**2)
    assert zero_diag == pytest.approx(1.03**2)


def test_brent_rejects_large_perturbation():
    with pytest.raises(EpsilonCapExceeded):
        brent_input_from_matrix(Matrix([[1, 1], [0, 1]]), Fraction(1, 2))


@given(int_matrices())
@settings(max_examples=300, deadline=None)
def test_trace_det_inequality(rows):
    assert trace_det_check(Matrix(rows)).holds


def test_trace_det_sample_matrix(sample_matrix):
    check = trace_det_check(sample_matrix)
    assert check.lhs_exact == 1
    assert check.rhs_exact == 81


@pytest.mark.parametrize(
    "n, mode, expected",
    [
        (2, ProgressionMode.FULL_SQUARE, math.sqrt(125)),
        (3, ProgressionMode.FULL_SQUARE, 450),
        (2, ProgressionMode.REPEATED, 3),
        (3, ProgressionMode.REPEATED, 18),
    ],
)
def test_progression_bound_values(n, mode, expected):
    assert progression_bound(n, 1, 1, mode).bound == pytest.approx(expected, rel=REL)


@pytest.mark.parametrize("mode", list(ProgressionMode))
@pytest.mark.parametrize(
    "n, p, q",
    [(2, 1, 1), (3, -4, 2), (4, Fraction(1, 2), Fraction(1, 3)), (3, -1, 1)]
    + [(n, p, 1) for n in range(2, 7) for p in (0, 1)],
)
def test_progression_bound_matches_gasper_bound(n, p, q, mode):
    entries = progression_entries(n, p, q, mode)
    m = Matrix.from_flat(entries, n)
    assert progression_bound(n, p, q, mode).bound == pytest.approx(gasper_bound(m).bound, rel=1e-9)


def test_progression_bound_rejects_step():
    with pytest.raises(NonpositiveStep):
        progression_bound(3, 1, 0, ProgressionMode.FULL_SQUARE)


def test_relate_gap_equality_exactly_on_boundary():
    alphas = [Fraction(k, 2) for k in range(-6, 7)]
    betas = [Fraction(k, 4) for k in range(1, 17)]
    for n in (2, 3, 5):
        for alpha in alphas:
            for beta in betas:
                if alpha * alpha > n * beta:
                    continue
                gap = relate_gap(alpha, beta, n)
                assert gap.equal == (alpha * alpha == beta)
                assert gap.lhs <= gap.rhs


def test_relate_gap_errors():
    with pytest.raises(NonpositiveBeta):
        relate_gap(1, 0, 2)
    with pytest.raises(InfeasiblePair):
        relate_gap(3, 1, 2)
    with pytest.raises(InvalidMatrix):
        relate_gap(0, 1, 1)


def test_bound_from_stats_reports_feasibility(sample_matrix):
    report = bound_from_stats(entry_stats(sample_matrix))
    assert report.feasible
