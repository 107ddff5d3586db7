"""
SirsNet Graph - Graphes et analyse spectrale
"""

from .graph_core import (
    Graph, GraphKind, SpectralReport, generate, graph_summary, load_edge_list,
    parse_graph_spec, spectral_radius,
)

__all__ = [
    'Graph', 'GraphKind', 'SpectralReport', 'generate', 'graph_summary',
    'load_edge_list', 'parse_graph_spec', 'spectral_radius',
]
