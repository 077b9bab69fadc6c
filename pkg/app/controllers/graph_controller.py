"""
This module builds the two graphs whose treewidth parameterizes the solvers: the
d-connectivity graph and level d of the Hasse diagram.
"""
from itertools import combinations

import networkx as nx

from app.errors import DimensionMismatchError
from app.models.graph import DerivedGraph, GraphKind


def connectivity_graph(complex_, d):
    """d-simplices as vertices, joined when they share a (d-1)-face.

    Parameters:
    - complex_: the SimplicialComplex.
    - d: the simplex dimension of the vertices, at least 1.
    """
    if d < 1:
        raise DimensionMismatchError(f"connectivity graphs need d >= 1, got {d}")
    graph = nx.Graph()
    graph.add_nodes_from(complex_.simplices_of_dim(d))
    for face in complex_.simplices_of_dim(d - 1):
        graph.add_edges_from(combinations(complex_.cofaces(face), 2))
    return DerivedGraph(graph, GraphKind.CONNECTIVITY, d)


def hasse_level(complex_, d):
    """Bipartite face graph between d- and (d-1)-simplices.

    (d-1)-simplices without a coface stay in the graph as isolated vertices.
    """
    if d < 1:
        raise DimensionMismatchError(f"Hasse levels need d >= 1, got {d}")
    graph = nx.Graph()
    graph.add_nodes_from(complex_.simplices_of_dim(d - 1), dim=d - 1)
    graph.add_nodes_from(complex_.simplices_of_dim(d), dim=d)
    for simplex in complex_.simplices_of_dim(d):
        graph.add_edges_from((simplex, face) for face in simplex.faces())
    return DerivedGraph(graph, GraphKind.HASSE, d)


def export_edge_list(derived):
    """One edge per line, each endpoint as a comma-joined sorted vertex list."""
    lines = [f"{','.join(map(str, a))}\t{','.join(map(str, b))}" for a, b in derived.edges]
    return "\n".join(lines) + ("\n" if lines else "")


def vertex_numbering(derived):
    """Map every graph vertex to its 1-based PACE id, in canonical order."""
    return {vertex: index for index, vertex in enumerate(derived.vertices, start=1)}


def export_pace_graph(derived):
    """PACE `.gr` text of the graph plus the id -> simplex mapping it uses.

    Returns:
        tuple: (text, mapping) where mapping is ``{id: Simplex}``.
    """
    numbering = vertex_numbering(derived)
    edges = sorted(sorted((numbering[a], numbering[b])) for a, b in derived.graph.edges)
    lines = [f"p tw {len(numbering)} {len(edges)}"]
    lines.extend(f"{a} {b}" for a, b in edges)
    return "\n".join(lines) + "\n", {index: vertex for vertex, index in numbering.items()}
