"""Exact fields, matrices, subspaces and truncated series"""

from fractions import Fraction

import numpy as np
import pytest

from utils.arith import (RATIONALS, EchelonSpace, ExactMatrix, FieldSpec, PolySeries, pbw_series, rank_kernel, rref,
                         series_inv, solve)
from utils.errors import DomainError, FieldMismatchError, UsageError

GF7 = FieldSpec.prime(7)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

def test_field_parse_accepts_rational_and_primes():
    assert FieldSpec.parse('rational') == RATIONALS
    assert FieldSpec.parse('Q') == RATIONALS
    assert FieldSpec.parse('gf(101)') == FieldSpec.prime(101)
    assert FieldSpec.parse('7') == GF7
    assert str(GF7) == 'gf(7)'


@pytest.mark.parametrize('text', ['2', 'gf(9)', 'reals', 'gf(x)'])
def test_field_parse_rejects(text):
    with pytest.raises(UsageError):
        FieldSpec.parse(text)


def test_prime_field_arithmetic():
    assert GF7(3) * GF7(5) == GF7(1)
    assert GF7(Fraction(1, 2)) * GF7(2) == GF7.one
    assert GF7.to_python(GF7(-1)) == 6
    with pytest.raises(DomainError):
        GF7(Fraction(1, 7))


def test_rational_conversion():
    assert RATIONALS.to_python(RATIONALS('3/4')) == Fraction(3, 4)
    assert RATIONALS.render(RATIONALS(Fraction(-2, 6))) == '-1/3'
    with pytest.raises(FieldMismatchError):
        RATIONALS(0.5)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

def test_rank_and_kernel():
    m = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    rank, kernel = rank_kernel(m)
    assert rank == 2
    assert len(kernel) == 1
    assert not m.apply(kernel[0])
    # the free column carries a 1
    assert kernel[0][2] == RATIONALS.one


def test_rref_pivots():
    rows, pivots = rref(ExactMatrix.from_rows([[0, 2, 4], [0, 1, 3]]))
    assert pivots == [1, 2]
    assert rows[0] == {1: RATIONALS.one}


def test_solve_consistent_and_inconsistent():
    m = ExactMatrix.from_rows([[1, 1], [1, -1]])
    x = solve(m, {0: RATIONALS(3), 1: RATIONALS(1)})
    assert x == {0: RATIONALS(2), 1: RATIONALS(1)}
    singular = ExactMatrix.from_rows([[1, 1], [2, 2]])
    assert solve(singular, {0: RATIONALS(1), 1: RATIONALS(3)}) is None


def test_rank_depends_on_characteristic():
    data = [[1, 2], [3, 6 + 7]]
    assert ExactMatrix.from_rows(data).rank() == 2
    assert ExactMatrix.from_rows(data, GF7).rank() == 1


def test_matmul_and_zero():
    a = ExactMatrix.from_rows([[1, 1], [0, 0]])
    b = ExactMatrix.from_rows([[1, -1], [-1, 1]])
    assert (a @ b).is_zero()


def test_matrix_rejects_foreign_entries():
    with pytest.raises(FieldMismatchError):
        ExactMatrix(1, 1, GF7, {(0, 0): RATIONALS(1)})


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

def test_echelon_space_basics():
    one = RATIONALS.one
    space = EchelonSpace.span([{0: one, 1: one}, {1: one, 2: one}, {0: one, 2: -one}], 3, RATIONALS)
    assert space.dim == 2
    assert space.codim == 1
    assert space.contains({0: one, 1: 2 * one, 2: one})
    assert not space.contains({2: one})
    assert len(space.complement()) == 1
    assert space.extend([{2: one}]).dim == 3


def test_echelon_coordinates_round_trip():
    one = RATIONALS.one
    space = EchelonSpace.span([{0: one, 2: one}, {1: one}], 3, RATIONALS)
    v = {0: 3 * one, 1: -one, 2: 3 * one}
    coords = space.coordinates(v)
    rebuilt = {}
    for i, c in coords.items():
        for k, value in space.rows[i].items():
            rebuilt[k] = rebuilt.get(k, 0) + c * value
    assert {k: x for k, x in rebuilt.items() if x} == v


def test_same_as_ignores_spanning_set():
    one = RATIONALS.one
    a = EchelonSpace.span([{0: one}, {1: one}], 3, RATIONALS)
    b = EchelonSpace.span([{0: one, 1: one}, {0: one, 1: -one}], 3, RATIONALS)
    assert a.same_as(b)


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

def test_series_inverse_of_geometric():
    s = PolySeries.from_coefficients([1, -1])
    inv = series_inv(s, 5)
    assert inv.integer_coefficients() == [1, 1, 1, 1, 1, 1]
    assert inv.truncation == 5


def test_series_inverse_needs_unit():
    with pytest.raises(DomainError):
        series_inv(PolySeries.from_coefficients([0, 1]), 3)


def test_coefficient_beyond_truncation():
    s = PolySeries.from_coefficients([1, 2, 3], truncation=1)
    assert s.coefficients() == [1, 2]
    with pytest.raises(DomainError):
        s.coefficient(2)


def test_polynomial_operations():
    p = PolySeries.from_coefficients([1, 1])
    square = p * p
    assert square.integer_coefficients() == [1, 2, 1]
    assert square.evaluate(1) == 4
    assert square.at_negative().integer_coefficients() == [1, -2, 1]
    q, r = square.divmod(p)
    assert q.integer_coefficients() == [1, 1]
    assert r.is_zero()
    assert str(PolySeries.from_coefficients([1, 4, 1])) == '1 + 4t + t^2'


def test_pbw_series_of_surface_dims():
    # G_4: 1/(1 - 4t + t^2)
    h = pbw_series({1: 4, 2: 5, 3: 16}, 3)
    assert h.integer_coefficients() == [1, 4, 15, 56]


def test_rank_ignores_row_order_over_f101():
    f101 = FieldSpec.prime(101)
    rng = np.random.default_rng(101)
    for _ in range(20):
        rows = rng.integers(0, 101, size=(6, 5))
        rows[5] = (rows[0] + 3 * rows[1]) % 101
        shuffled = rows[rng.permutation(6)]
        original = ExactMatrix.from_rows(rows.tolist(), f101).rank()
        assert ExactMatrix.from_rows(shuffled.tolist(), f101).rank() == original
        assert original <= 5


def test_series_inverse_is_two_sided():
    rng = np.random.default_rng(7)
    for _ in range(100):
        coefficients = [int(c) for c in rng.integers(-4, 5, size=6)]
        coefficients[0] = int(rng.choice([-3, -2, -1, 1, 2, 3]))
        a = PolySeries.from_coefficients(coefficients, truncation=8)
        inv = series_inv(a, 8)
        assert (a * inv).coefficients() == [1] + [0] * 8
        assert (inv * a).coefficients() == [1] + [0] * 8
