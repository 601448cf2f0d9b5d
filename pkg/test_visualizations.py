"""Plotly figures"""

from utils.cohomology import betti_table
from utils.quotient import expand_tables
from utils.spectrum import PoincarePoly, eigenvalues
from utils.visualizations import create_betti_heatmap, create_dimension_growth_bar, create_eigenvalue_plane


def test_betti_heatmap(h1):
    fig = create_betti_heatmap(betti_table(expand_tables(h1, 4)).to_frame(), 'h1')
    assert fig.layout.title.text == 'h1'
    assert len(fig.data) == 2


def test_dimension_growth_bar(g4_table):
    fig = create_dimension_growth_bar(g4_table.dims, [4, 6, 20, 60, 204])
    assert list(fig.data[0].y) == g4_table.dim_list()
    assert len(fig.data) == 2


def test_eigenvalue_plane():
    e = eigenvalues(PoincarePoly((1, 15, 21, 35, 35, 21, 7, 1)))
    fig = create_eigenvalue_plane([v for v, _ in e.values], [m for _, m in e.values])
    names = [trace.name for trace in fig.data]
    assert names == ['|λ| = 1', 'real', 'conjugate pairs']
