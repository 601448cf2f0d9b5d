import plotly.graph_objects as go
from plotly.subplots import make_subplots
import pandas as pd
import numpy as np
from typing import Dict, Optional, Sequence


def create_betti_heatmap(betti_frame: pd.DataFrame, title: Optional[str] = None) -> go.Figure:
    """Heat map of a Betti table, homological degree i on rows, internal degree j on columns"""
    if betti_frame.empty:
        return go.Figure().add_annotation(
            text="Empty Betti table",
            showarrow=False,
            font=dict(size=20)
        )

    # Blank out the region i > j and the zeros so only nonzero entries are coloured
    values = betti_frame.astype('float').where(betti_frame.fillna(0) != 0)
    text = betti_frame.astype('string').fillna('').replace('0', '')

    fig = go.Figure(go.Heatmap(
        z=values.values,
        x=[str(j) for j in betti_frame.columns],
        y=[str(i) for i in betti_frame.index],
        text=text.values,
        texttemplate="%{text}",
        colorscale='Blues',
        hovertemplate='b(%{y},%{x}) = %{z}<extra></extra>',
        colorbar=dict(title="b<sub>ij</sub>")
    ))

    # Koszul algebras live on this line
    n = len(betti_frame.columns) - 1
    fig.add_trace(go.Scatter(
        x=[str(k) for k in range(n + 1)],
        y=[str(k) for k in range(n + 1)],
        mode='lines',
        line=dict(color='red', dash='dash'),
        name='i = j',
        hoverinfo='skip'
    ))

    fig.update_layout(
        title=title or "Bigraded Betti numbers",
        xaxis_title="internal degree j",
        yaxis_title="homological degree i",
        yaxis=dict(autorange='reversed'),
        height=500
    )

    return fig


def create_dimension_growth_bar(dims: Dict[int, int], free_dims: Optional[Sequence[int]] = None,
                                title: Optional[str] = None) -> go.Figure:
    """Bar chart of dim L_d per degree, optionally against the free algebra on the same generators"""
    if not dims:
        return go.Figure()

    degrees = sorted(dims)
    fig = make_subplots(rows=1, cols=1)
    fig.add_trace(go.Bar(
        x=degrees,
        y=[dims[d] for d in degrees],
        name='dim L_d',
        marker=dict(color='#1f77b4'),
        hovertemplate='degree %{x}: %{y}<extra></extra>'
    ))
    if free_dims is not None:
        fig.add_trace(go.Scatter(
            x=degrees,
            y=[free_dims[d - 1] if d - 1 < len(free_dims) else None for d in degrees],
            mode='lines+markers',
            name='free',
            line=dict(color='gray', dash='dot')
        ))

    fig.update_layout(
        title=title or "Dimensions by degree",
        xaxis_title="degree",
        yaxis_title="dimension",
        yaxis_type='log' if max(dims.values(), default=0) > 100 else 'linear',
        height=450,
        showlegend=free_dims is not None
    )

    return fig


def create_eigenvalue_plane(values: Sequence[complex], multiplicities: Optional[Sequence[int]] = None,
                            title: Optional[str] = None) -> go.Figure:
    """Eigenvalues in the complex plane with the unit circle for scale"""
    multiplicities = list(multiplicities) if multiplicities is not None else [1] * len(values)
    df = pd.DataFrame({
        're': [complex(v).real for v in values],
        'im': [complex(v).imag for v in values],
        'multiplicity': multiplicities,
    })

    theta = np.linspace(0, 2 * np.pi, 361)
    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=np.cos(theta),
        y=np.sin(theta),
        mode='lines',
        name='|λ| = 1',
        line=dict(color='lightgray'),
        hoverinfo='skip'
    ))

    if not df.empty:
        real = df[df['im'] == 0]
        paired = df[df['im'] != 0]
        if not real.empty:
            fig.add_trace(go.Scatter(
                x=real['re'], y=real['im'],
                mode='markers+text',
                name='real',
                text=[f"×{m}" if m > 1 else '' for m in real['multiplicity']],
                textposition='top center',
                marker=dict(color=np.where(real['re'] > 0, 'green', 'red'), size=10),
                hovertemplate='%{x:.6f}<extra></extra>'
            ))
        if not paired.empty:
            fig.add_trace(go.Scatter(
                x=paired['re'], y=paired['im'],
                mode='markers',
                name='conjugate pairs',
                marker=dict(color='orange', size=10, symbol='diamond'),
                hovertemplate='%{x:.6f} %{y:+.6f}i<extra></extra>'
            ))

    fig.update_layout(
        title=title or "Eigenvalues",
        xaxis_title="Re λ",
        yaxis_title="Im λ",
        yaxis=dict(scaleanchor='x', scaleratio=1),
        height=550
    )

    return fig
