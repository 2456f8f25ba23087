import math
from fractions import Fraction

import pytest

from engine.infdet import (
    convergence_report,
    finite_bound,
    koch_bound,
    partial_sums,
    sharp_bound,
    truncated_det,
)
from models.exceptions import DivergentSpec, InvalidMatrix
from models.models import InfiniteMatrixSpec, SpecKind

HALF = Fraction(1, 2)


def geometric(c, r) -> InfiniteMatrixSpec:
    return InfiniteMatrixSpec(kind=SpecKind.DIAGONAL_GEOMETRIC, c=Fraction(c), r=Fraction(r))


def finite(entries) -> InfiniteMatrixSpec:
    return InfiniteMatrixSpec(
        kind=SpecKind.FINITE_SUPPORT, entries={k: Fraction(v) for k, v in entries.items()}
    )


def test_zero_matrix():
    spec = finite({})
    assert koch_bound(spec) == 1
    for row in convergence_report(spec, 5):
        assert (row.truncated_det, row.finite_bound, row.koch_bound, row.sharp_bound) == (1, 1, 1, 1)


def test_geometric_truncation_is_partial_product():
    assert truncated_det(geometric(HALF, HALF), 3) == pytest.approx(0.615234375, rel=1e-15)


def test_single_entry_above_one():
    spec = finite({(1, 1): 2})
    for n in range(1, 6):
        assert truncated_det(spec, n) == pytest.approx(-1.0)


def test_single_entry_half():
    spec = finite({(1, 1): HALF})
    assert all(truncated_det(spec, n) == pytest.approx(0.5) for n in range(1, 8))
    # 1/2 * (1/2)^2 - 1/2
    assert koch_bound(spec) == pytest.approx(math.exp(1 / 8 - 1 / 2))
    assert koch_bound(spec) >= 0.5


def test_koch_bound_geometric_closed_forms():
    spec = geometric(HALF, HALF)
    assert spec.trace_sum == HALF
    assert spec.square_sum == Fraction(1, 12)
    assert koch_bound(spec) == pytest.approx(math.exp(1 / 24 - 1 / 2), rel=1e-12)


def test_koch_bound_negative_coefficient_dominates_product():
    spec = geometric(-HALF, HALF)
    assert koch_bound(spec) == pytest.approx(math.exp(1 / 24 + 1 / 2), rel=1e-12)
    product = math.prod(1 + 2.0 ** (-i - 1) for i in range(1, 61))
    assert truncated_det(spec, 60) == pytest.approx(product, rel=1e-12)
    assert product <= koch_bound(spec)


def test_per_truncation_inequality_up_to_sixty():
    spec = geometric(HALF, HALF)
    rows = convergence_report(spec, 60)
    assert [row.n for row in rows] == list(range(1, 61))
    for row in rows:
        assert abs(row.truncated_det) <= row.finite_bound * (1 + 1e-9)
    assert abs(rows[-1].truncated_det) <= rows[-1].koch_bound


def test_finite_bound_converges_to_koch_bound():
    spec = geometric(HALF, HALF)
    koch = koch_bound(spec)
    assert abs(finite_bound(spec, 40) - koch) < 5e-3
    assert abs(finite_bound(spec, 10**6) - koch) < 1e-6
    values = [finite_bound(spec, n) for n in range(10, 61)]
    assert all(a <= b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("c, r", [(HALF, HALF), (-HALF, HALF), (Fraction(1, 3), Fraction(-1, 2))])
def test_both_branches_share_the_limit(c, r):
    spec = geometric(c, r)
    n = 10**5
    assert abs(finite_bound(spec, n) - sharp_bound(spec, n)) < 1e-6


def test_partial_sums_match_truncation():
    spec = geometric(HALF, HALF)
    trace, squares, total = partial_sums(spec, 3)
    assert trace == pytest.approx(1 / 4 + 1 / 8 + 1 / 16)
    assert squares == pytest.approx(1 / 16 + 1 / 64 + 1 / 256)
    assert total == trace


def test_table_and_off_diagonal_entries():
    table = InfiniteMatrixSpec(kind=SpecKind.TABLE, entries={(1, 1): HALF, (2, 2): Fraction(1, 3)})
    assert truncated_det(table, 2) == pytest.approx(1 / 3)
    swap = finite({(1, 2): 1, (2, 1): 1})
    assert truncated_det(swap, 1) == 1
    assert truncated_det(swap, 2) == pytest.approx(0.0, abs=1e-15)
    assert finite_bound(swap, 2) == pytest.approx(2.0)


def test_divergent_spec():
    spec = geometric(HALF, 1)
    with pytest.raises(DivergentSpec):
        koch_bound(spec)
    with pytest.raises(DivergentSpec):
        convergence_report(spec, 3)
    assert koch_bound(geometric(0, 2)) == 1


def test_truncation_order_must_be_positive():
    with pytest.raises(InvalidMatrix):
        truncated_det(geometric(HALF, HALF), 0)
