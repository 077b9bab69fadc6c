"""This module defines the DerivedGraph model built from a simplicial complex.
"""
from enum import Enum

import networkx as nx


class GraphKind(str, Enum):
    """Which derived graph of the complex a DerivedGraph is."""
    CONNECTIVITY = "connectivity"
    HASSE = "hasse_level"


class DerivedGraph:
    """Model class for Con_d(K) and Hasse_d(K).

    Attributes:
        graph (networkx.Graph): Simple graph whose vertices are Simplex objects.
        kind (GraphKind): Connectivity graph or Hasse level.
        level (int): The d of Con_d / Hasse_d.
    """

    def __init__(self, graph, kind, level):
        self.graph = graph
        self.kind = GraphKind(kind)
        self.level = level

    @property
    def vertices(self):
        return sorted(self.graph.nodes)

    @property
    def edges(self):
        return sorted(tuple(sorted(edge)) for edge in self.graph.edges)

    def number_of_vertices(self):
        return self.graph.number_of_nodes()

    def number_of_edges(self):
        return self.graph.number_of_edges()

    def is_bipartite(self):
        return nx.is_bipartite(self.graph)

    def __repr__(self):
        return (f'DerivedGraph({self.kind.value}, level={self.level}, '
                f'{self.number_of_vertices()} vertices, {self.number_of_edges()} edges)')
