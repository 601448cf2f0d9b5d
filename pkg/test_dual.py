"""Quadratic duals, Fröberg, Darboux bases and the one/two-relator classifications"""

import itertools

import numpy as np
import pytest

from utils.arith import RATIONALS, EchelonSpace, ExactMatrix, FieldSpec
from utils.catalog import b_family, surface, witt_positive
from utils.cohomology import betti_table
from utils.dual import (annihilator, classify_one_relator, darboux_decompose, dual_algebra, froberg_check,
                        quadratic_cover, quadratic_data, skew_form, two_relator_bk_check)
from utils.errors import DomainError, NonQuadraticError, RelationCountError
from utils.free_lie import GeneratorSet, LieElement, substitute
from utils.presentations import Presentation, presentation
from utils.quotient import expand_tables, hilbert_series_U

F101 = FieldSpec.prime(101)


def pairing(beta, u, v):
    return sum((a * beta[i][j] * b for i, a in u.items() for j, b in v.items()), beta[0][0] * 0)


def test_surface_dual_is_its_cohomology_ring(g4):
    data = quadratic_data(g4)
    assert (data.relations.dim, data.annihilator.dim) == (1, 5)
    dual = dual_algebra(g4)
    assert dual.dims == [1, 4, 1, 0, 0]
    assert dual.basis_label(0, 0) == '1'
    assert len(dual.multiplication_table(1, 1)) == 4


def test_heisenberg_dual(h2):
    assert dual_algebra(h2).dims == [1, 4, 5, 0, 0]


def test_froberg_holds_for_surface(g4_table, g4):
    assert str(froberg_check(g4_table, dual_algebra(g4))) == 'OK(5)'


@pytest.mark.slow
def test_froberg_holds_for_surface_to_degree_eight(g4):
    assert str(froberg_check(expand_tables(g4, 8), dual_algebra(g4))) == 'OK(8)'


def test_froberg_defect_for_heisenberg(h2):
    result = froberg_check(expand_tables(h2, 5), dual_algebra(h2))
    assert not result
    assert str(result) == 'FirstDefect(4, 5)'


def test_dual_requires_quadratic(h1, witt):
    with pytest.raises(NonQuadraticError):
        dual_algebra(h1)
    with pytest.raises(NonQuadraticError):
        quadratic_data(witt)


def test_quadratic_cover_forgets_higher_relations(h1):
    cover = quadratic_cover(h1)
    assert cover.name == 'h1^q'
    assert cover.relations == ()
    assert cover.generators.names == ('a', 'b')


def test_quadratic_cover_keeps_degree_one_generators():
    cover = quadratic_cover(witt_positive())
    assert cover.generators.names == ('x1',)


def test_quadratic_cover_of_quadratic_algebra(g4):
    cover = quadratic_cover(g4)
    assert expand_tables(cover, 3).dim_list() == [4, 5, 16]


# ---------------------------------------------------------------------------
# Skew forms
# ---------------------------------------------------------------------------

def test_classify_one_relator(g4):
    c = classify_one_relator(g4)
    assert (c.genus, c.free_rank) == (2, 0)
    assert str(c) == 'G_4'
    mixed = classify_one_relator(presentation('M', ['x', 'y', 'z'], ['[x,y]']))
    assert (mixed.genus, mixed.free_rank) == (1, 1)
    assert str(mixed) == 'G_2 * free(1)'


def test_classify_needs_one_relation(h2):
    with pytest.raises(RelationCountError):
        classify_one_relator(h2)


def test_darboux_pairs_are_symplectic(g4):
    data = quadratic_data(g4)
    beta = skew_form(data, data.relations.rows[0])
    radical, pairs = darboux_decompose(beta, data.field)
    assert radical == []
    assert len(pairs) == 2
    one = data.field.one
    for e, f in pairs:
        assert pairing(beta, e, f) == one
    (e1, f1), (e2, f2) = pairs
    assert not pairing(beta, e1, e2)
    assert not pairing(beta, f1, f2)
    assert not pairing(beta, e1, f2)


def test_darboux_rejects_non_skew_forms():
    with pytest.raises(DomainError):
        darboux_decompose([[0, 1], [1, 0]], FieldSpec.rationals())


def test_two_relator_example():
    p = presentation('T', ['x1', 'x2', 'x3', 'x4'], ['[x1,x2]', '[x3,x4]'])
    verdict = two_relator_bk_check(p)
    assert verdict
    assert verdict.dual_dims[:4] == (1, 4, 2, 0)


def test_two_relator_check_on_random_presentations():
    gens = GeneratorSet.standard(['x1', 'x2', 'x3', 'x4'])
    pairs = list(itertools.combinations(range(4), 2))
    rng = np.random.default_rng(2024)
    checked = 0
    for k in range(50):
        relations = tuple(
            LieElement(gens, F101, 2, {w: F101(int(c)) for w, c in zip(pairs, rng.integers(0, 101, size=6))})
            for _ in range(2)
        )
        p = Presentation(f"R{k}", F101, gens, relations)
        if quadratic_data(p).relations.dim != 2:
            continue
        verdict = two_relator_bk_check(p)
        assert verdict.dual_dims[3] == 0
        checked += 1
    assert checked >= 45


def test_two_relator_needs_two_relations(g4):
    with pytest.raises(RelationCountError):
        two_relator_bk_check(g4)


def test_b4_matches_g4():
    g, b = expand_tables(surface(2), 4), expand_tables(b_family(2), 4)
    assert hilbert_series_U(g).coefficients() == hilbert_series_U(b).coefficients()
    assert betti_table(g).nonzero() == betti_table(b).nonzero()


@pytest.mark.slow
def test_b4_matches_g4_to_degree_six():
    g, b = expand_tables(surface(2), 6), expand_tables(b_family(2), 6)
    assert g.dim_list() == b.dim_list()
    assert betti_table(g).nonzero() == betti_table(b).nonzero()


def test_double_annihilator_is_the_relation_space(g4):
    data = quadratic_data(g4)
    assert annihilator(data.annihilator).same_as(data.relations)
    rng = np.random.default_rng(5)
    for size in range(7):
        vectors = [{k: F101(int(c)) for k, c in enumerate(rng.integers(0, 101, size=6))} for _ in range(size)]
        space = EchelonSpace.span(vectors, 6, F101)
        perp = annihilator(space)
        assert perp.dim == 6 - space.dim
        assert annihilator(perp).same_as(space)


def random_basis_change(rng, p):
    n = len(p.generators)
    while True:
        rows = rng.integers(-3, 4, size=(n, n)).tolist()
        if ExactMatrix.from_rows(rows).rank() == n:
            break
    images = {}
    for i in range(n):
        image = LieElement.zero(p.generators, 1)
        for j, c in enumerate(rows[i]):
            image = image + LieElement.generator(p.generators, p.generators.names[j]).scale(RATIONALS(c))
        images[i] = image
    relations = tuple(substitute(r, images, p.generators) for r in p.relations)
    return Presentation(p.name, p.field, p.generators, relations)


@pytest.mark.parametrize('p, expected', [
    (surface(2), (2, 0)),
    (presentation('M', ['x', 'y', 'z'], ['[x,y]']), (1, 1)),
    (presentation('N', ['x', 'y', 'z', 'w', 'v'], ['[x,y] + [z,w]']), (2, 1)),
])
def test_one_relator_class_ignores_the_basis(p, expected):
    rng = np.random.default_rng(31)
    for _ in range(10):
        c = classify_one_relator(random_basis_change(rng, p))
        assert (c.genus, c.free_rank) == expected
