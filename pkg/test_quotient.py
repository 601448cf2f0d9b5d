"""Truncated quotient tables, subalgebras, center and series"""

import pytest

from utils.arith import FieldSpec
from utils.catalog import abelian, free
from utils.errors import DomainError, UsageError
from utils.free_lie import free_dimension
from utils.presentations import parse_relation, presentation
from utils.quotient import (center, center_degrees, derived_series, expand_tables, free_dims, generated_subalgebra,
                            hilbert_series_L, hilbert_series_U, is_abelian, observed_nilpotent, observed_solvable,
                            subalgebra_tables, upper_central_series)


def test_surface_dimensions(g4_table):
    assert g4_table.dim_list()[:3] == [4, 5, 16]
    # 1/(1 - 4t + t^2)
    assert hilbert_series_U(g4_table).integer_coefficients() == [1, 4, 15, 56, 209, 780]


def test_heisenberg_dimensions(h1, h2_table):
    assert expand_tables(h1, 5).dim_list() == [2, 1, 0, 0, 0]
    assert h2_table.dim_list() == [4, 1, 0, 0, 0, 0, 0]
    assert hilbert_series_U(h2_table).integer_coefficients(4) == [1, 4, 11, 24, 46]


def test_positive_witt_is_one_dimensional_in_each_degree(witt):
    t = expand_tables(witt, 10)
    assert t.dim_list() == [1] * 10


def test_free_and_abelian():
    assert expand_tables(free(3), 4).dim_list() == free_dims(3, 4) == [3, 3, 8, 18]
    t = expand_tables(abelian(3), 4)
    assert t.dim_list() == [3, 0, 0, 0]
    assert is_abelian(t)
    assert observed_solvable(t)


def test_hilbert_series_of_lie_algebra(h2_table):
    assert hilbert_series_L(h2_table).integer_coefficients(3) == [0, 4, 1, 0]


def test_dimensions_depend_on_the_field():
    rational = presentation('P', ['x', 'y'], ['3[x,y]'])
    modular = presentation('P', ['x', 'y'], ['3[x,y]'], FieldSpec.prime(3))
    assert expand_tables(rational, 2).dim(2) == 0
    assert expand_tables(modular, 2).dim(2) == 1


def test_project_and_lift(g4_table, g4):
    one = g4.field.one
    element = g4_table.lift(2, {0: one})
    assert g4_table.project(element) == {0: one}
    # [x1,y1] = -[x2,y2] in L_2
    a = g4_table.project(parse_relation('[x1,y1]', g4.generators))
    b = g4_table.project(parse_relation('[x2,y2]', g4.generators))
    assert a == {k: -v for k, v in b.items()}


def test_table_boundaries(g4, g4_table, h2):
    with pytest.raises(UsageError):
        expand_tables(g4, 1)
    with pytest.raises(DomainError):
        g4_table.dim(6)
    with pytest.raises(UsageError):
        generated_subalgebra(g4_table, [], 8)
    with pytest.raises(UsageError):
        g4_table.project(h2.gen('x1'))


def test_double_commutator_vanishes_in_kosz2(kosz2, kosz2_table):
    assert kosz2_table.project(parse_relation('[x,[x,y]]', kosz2.generators)) == {}


def test_subalgebra_generated_by_x_and_y(kosz2, kosz2_table):
    view = subalgebra_tables(kosz2_table, [kosz2.gen('x'), kosz2.gen('y')])
    assert view.dim_list()[:3] == [2, 1, 1]


def test_coordinate_subalgebra_of_surface_is_free(g4_table):
    view = subalgebra_tables(g4_table, [{0: 1}, {1: 1}, {2: 1}])
    assert view.dim_list()[:3] == [3, 3, 8]


def test_center(h2_table, g4_table):
    z = center(h2_table)
    assert z.window == 6
    assert z.degrees() == [2]
    assert z.dims[2] == 1
    assert center_degrees(g4_table) == []


def test_center_window_uses_largest_generator_degree(witt):
    t = expand_tables(witt, 6)
    assert center(t).window == 4


def test_series_of_heisenberg(h2_table):
    derived = derived_series(h2_table)
    assert derived.terminated
    assert derived.dims()[1][2] == 1
    assert not is_abelian(h2_table)
    assert observed_solvable(h2_table)
    central = upper_central_series(h2_table)
    assert central.levels[1].degrees() == [2]
    assert observed_nilpotent(h2_table)


def structure_constant_failures(t):
    """Basis triples where the recorded brackets break antisymmetry or Jacobi"""
    failures = []
    degrees = range(1, t.cutoff + 1)
    for a in degrees:
        for b in degrees:
            if a + b > t.cutoff:
                continue
            for i in range(t.dim(a)):
                for j in range(t.dim(b)):
                    if t.bracket_basis(a, i, b, j) != {k: -v for k, v in t.bracket_basis(b, j, a, i).items()}:
                        failures.append(('antisymmetry', a, i, b, j))
    for a in degrees:
        for b in degrees:
            for c in degrees:
                if a + b + c > t.cutoff:
                    continue
                for i in range(t.dim(a)):
                    for j in range(t.dim(b)):
                        for k in range(t.dim(c)):
                            total = {}
                            for (p, u), (q, v), (r, w) in (((a, i), (b, j), (c, k)), ((b, j), (c, k), (a, i)),
                                                           ((c, k), (a, i), (b, j))):
                                inner = t.bracket_basis(q, v, r, w)
                                for key, value in t.bracket(p, t.unit(p, u), q + r, inner).items():
                                    total[key] = total.get(key, 0) + value
                            if any(total.values()):
                                failures.append(('jacobi', a, i, b, j, c, k))
    return failures


@pytest.mark.parametrize('name', ['g4_table', 'h2_table', 'kosz2_table'])
def test_recorded_brackets_are_lie_structure_constants(name, request):
    assert structure_constant_failures(request.getfixturevalue(name)) == []


def test_witt_structure_constants(witt):
    assert structure_constant_failures(expand_tables(witt, 8)) == []


@pytest.mark.parametrize('generators, expected', [
    (['x', 'y'], [2, 1, 2, 3, 6, 9, 18, 30]),
    ([('x1', 1), ('x2', 2)], [1, 1, 1, 1, 2, 2, 4, 5]),
])
def test_engine_reproduces_free_dimensions(generators, expected):
    t = expand_tables(presentation('F', generators, []), 8)
    assert t.dim_list() == expected
    assert expected == [free_dimension(t.generators, d) for d in range(1, 9)]
