from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmod.modring import DomainError, PrimePower
from quadmod.oracle import (
    BudgetExceeded,
    InsufficientSamples,
    chi_square_uniform,
    enumerate_reps,
    histogram_counts,
    nonprimitive_composite,
    solutions_mod,
    value_histogram,
)

I2 = [[1, 0], [0, 1]]


def test_enumerate_reps_examples():
    sols, counts = enumerate_reps([[1]], PrimePower(3, 1), 1)
    assert sols == [(1,), (2,)]
    assert counts == (2, 2, 0)

    sols, counts = enumerate_reps(I2, PrimePower(2, 2), 0)
    assert sols == [(0, 0), (0, 2), (2, 0), (2, 2)]
    assert counts == (4, 0, 4)

    sols, counts = enumerate_reps(I2, PrimePower(5, 1), 1)
    assert len(sols) == 4 and counts == (4, 4, 0)


def test_solutions_mod_composite_modulus():
    sols = solutions_mod([[1]], 15, 1)
    assert sols == [(1,), (4,), (11,), (14,)]


def test_value_histogram_budget():
    with pytest.raises(BudgetExceeded):
        value_histogram(I2, 2**13, budget=2**20)
    h = value_histogram([[1]], 9)
    assert list(h) == [3, 2, 0, 0, 2, 0, 0, 2, 0]


def test_histogram_counts_match_enumeration():
    pp = PrimePower(3, 2)
    per_t = histogram_counts(I2, pp)
    for t in range(pp.q):
        _, counts = enumerate_reps(I2, pp, t)
        assert per_t[t] == counts


def test_nonprimitive_composite():
    assert nonprimitive_composite((3, 6), 15)
    assert not nonprimitive_composite((3, 5), 15)
    assert nonprimitive_composite((0, 0), 15)
    assert not nonprimitive_composite((1,), 8)


def test_chi_square_examples():
    stat, ok = chi_square_uniform([100, 100, 100, 100], 4)
    assert stat == 0 and ok
    stat, ok = chi_square_uniform([400], 4)
    assert stat == 1200 and not ok
    stat, ok = chi_square_uniform([7], 1)
    assert stat == 0 and ok


def test_chi_square_validation():
    with pytest.raises(InsufficientSamples):
        chi_square_uniform([3, 3], 4)  # fewer than 5 per cell
    with pytest.raises(DomainError):
        chi_square_uniform([10] * 5, 4)  # more cells than the support
    stat, ok = chi_square_uniform([10, 10], 4)  # two empty cells count
    assert stat == Fraction(20) and not ok


def test_chi_square_is_exact_rational():
    stat, ok = chi_square_uniform([6, 5, 4], 3)
    assert stat == Fraction(2, 5)
    assert ok


@given(st.integers(min_value=2, max_value=40), st.integers(min_value=5, max_value=40))
@settings(max_examples=40)
def test_chi_square_uniformish_passes(cells, per_cell):
    # a perfectly flat histogram always passes
    stat, ok = chi_square_uniform([per_cell] * cells, cells)
    assert stat == 0 and ok


def test_enumerate_reps_unit_scaling_bijection():
    pp = PrimePower(7, 2)
    sols_t, c_t = enumerate_reps(I2, pp, 3)
    u = 2
    sols_s, c_s = enumerate_reps(I2, pp, 3 * u * u % pp.q)
    assert len(sols_t) == len(sols_s) and c_t == c_s
    mapped = sorted(tuple(u * x % pp.q for x in v) for v in sols_t)
    assert mapped == sols_s
