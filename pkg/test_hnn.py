"""HNN-extensions: compose, decompose, Betti bookkeeping and the embedding pipeline"""

import pytest

from utils.catalog import witt_positive
from utils.cohomology import betti_table, is_quadratic_up_to
from utils.errors import DomainError, InvalidDerivationError, NonQuadraticError, UsageError
from utils.hnn import (DerivationSpec, betti_recursion_check, cocyclic_poincare_check, euler_characteristic,
                       hnn_compose, hnn_decompose, quadratize, standardize)
from utils.presentations import presentation
from utils.quotient import expand_tables, subalgebra_tables


@pytest.fixture(scope='module')
def free_yzw():
    return presentation('M', ['y', 'z', 'w'], [])


def test_decompose_kosz2_along_x(kosz2):
    decomposition = hnn_decompose(kosz2, 'x')
    assert decomposition.stable_letter == 'x'
    assert decomposition.m.name == 'Kosz2_M'
    assert decomposition.m.generators.names == ('y', 'z', 'w')
    assert decomposition.m.relations == ()
    assert len(decomposition.a_basis) == 3
    assert decomposition.derivation.render() == {'y': '[z,w]', 'z': '0', 'w': '0'}


def test_reconstruction_has_the_same_dimensions(kosz2, kosz2_table):
    decomposition = hnn_decompose(kosz2, 'x')
    assert expand_tables(decomposition.reconstruction, 4).dim_list() == kosz2_table.dim_list()


def test_decompose_needs_quadratic_input_and_a_basis(h1, kosz2):
    with pytest.raises(NonQuadraticError):
        hnn_decompose(h1, 'a')
    with pytest.raises(UsageError):
        hnn_decompose(kosz2, 'x', ['y', 'z', 'y'])


def test_compose_rebuilds_kosz2(free_yzw, kosz2_table):
    spec = DerivationSpec.parse(free_yzw, {'y': '[z,w]', 'z': '0', 'w': '0'}, 1)
    hnn = hnn_compose(free_yzw, spec, 'x', max_degree=4)
    assert hnn.name == 'HNN(M,x)'
    assert hnn.generators.names == ('y', 'z', 'w', 'x')
    assert hnn.is_quadratic()
    assert expand_tables(hnn, 4).dim_list() == kosz2_table.dim_list()


def test_compose_rejects_stable_letter_clash(free_yzw):
    spec = DerivationSpec.parse(free_yzw, {'y': '[z,w]'}, 1)
    with pytest.raises(UsageError):
        hnn_compose(free_yzw, spec, 'y')


def test_map_breaking_a_relation_is_not_a_derivation():
    m = presentation('M', ['y', 'z', 'w'], ['[y,z]'])
    spec = DerivationSpec.parse(m, {'y': '[y,w]', 'z': '0'}, 1)
    with pytest.raises(InvalidDerivationError) as info:
        hnn_compose(m, spec, 't', max_degree=4)
    assert info.value.witness['degree'] == 2


def test_derivation_values_must_have_the_right_degree(free_yzw):
    with pytest.raises(DomainError):
        DerivationSpec.parse(free_yzw, {'y': '[z,[z,w]]'}, 1)
    with pytest.raises(UsageError):
        DerivationSpec.parse(free_yzw, {'y': 'z'}, 0)


# ---------------------------------------------------------------------------
# Betti bookkeeping
# ---------------------------------------------------------------------------

def test_betti_recursion_for_kosz2(kosz2_table):
    table = betti_table(kosz2_table)
    check = betti_recursion_check(table, [1, 3], [1, 3])
    assert check
    assert check.rows[0] == (-1, 1, 0, 1)


def test_betti_recursion_reports_first_failure():
    check = betti_recursion_check([1, 4, 2], [1, 3], [1, 3])
    assert not check
    assert check.failing_index == 1


def test_euler_characteristic():
    assert euler_characteristic([1, 4, 1]) == -2
    assert euler_characteristic([1, 3, 2]) == 0


def test_cocyclic_poincare_check():
    assert cocyclic_poincare_check([1, 3, 2], [1, 2])
    check = cocyclic_poincare_check([1, 4, 1], [1, 2])
    assert not check
    assert check.euler == -2


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

def test_standardize_witt():
    result = standardize(witt_positive(), max_degree=5)
    assert result.presentation.name == 'Wplus^std'
    assert result.presentation.is_standard()
    assert result.presentation.relation_degrees() == [5, 7]
    assert result.certificate.ok
    assert result.certificate.source_dims == [1] * 5


def test_standardize_leaves_standard_input_alone(g4):
    result = standardize(g4, certify=False)
    assert result.presentation is g4
    assert result.certificate is None


def test_quadratize_heisenberg(h1):
    result = quadratize(h1, max_degree=5)
    q = result.presentation
    assert q.name == 'h1^quad'
    assert q.is_quadratic()
    assert result.rounds == 1
    assert q.generators.names == ('a', 'b', 't', 'u', 'u2')
    assert len(q.relations) == 6
    assert result.certificate.ok
    assert result.certificate.image_dims == [2, 1, 0, 0, 0]
    assert str(is_quadratic_up_to(expand_tables(q, 5))) == 'PASS(5)'


def test_quadratize_clears_one_relation_degree_per_round():
    p = presentation('P', ['a', 'b'], ['[a,[a,[a,b]]]'])
    result = quadratize(p, max_degree=4)
    assert result.rounds == 2
    assert set(result.presentation.relation_degrees()) == {2}
    assert result.presentation.is_standard()
    assert len(result.presentation.generators) == 8
    assert result.certificate.ok


@pytest.mark.slow
def test_quadratize_standardized_witt():
    source = standardize(witt_positive(), certify=False).presentation
    result = quadratize(source, max_degree=2)
    assert result.rounds == 5
    assert result.presentation.is_quadratic()
    assert result.certificate.ok


# ---------------------------------------------------------------------------
# Splittings of Kosz2
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_kosz2_decomposition_round_trip_to_degree_six(kosz2):
    decomposition = hnn_decompose(kosz2, 'x')
    rebuilt = hnn_compose(decomposition.m, decomposition.derivation, 'x', max_degree=6)
    expected = expand_tables(kosz2, 6).dim_list()
    assert expand_tables(decomposition.reconstruction, 6).dim_list() == expected
    assert expand_tables(rebuilt, 6).dim_list() == expected


def test_subalgebra_of_kosz2_has_a_cubic_relation(kosz2, kosz2_table):
    view = subalgebra_tables(kosz2_table, [kosz2.gen('x'), kosz2.gen('y')])
    assert view.dim_list()[:3] == [2, 1, 1]
    table = betti_table(view)
    assert table.b(2, 2) == 0
    assert table.b(2, 3) != 0
