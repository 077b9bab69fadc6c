"""
This module contains the tree decomposition machinery: min-degree and min-fill
elimination heuristics, validation, conversion to nice form, and the constructions
relating decompositions of the connectivity graph, the Hasse level and the suspension.
"""
import heapq
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from app.controllers.graph_controller import connectivity_graph, hasse_level
from app.errors import InvalidDecompositionError, InvalidParameterError
from app.logger import setup_logger
from app.models.decomposition import NiceNode, NiceTreeDecomposition, NodeKind, TreeDecomposition
from app.models.graph import DerivedGraph, GraphKind

logger = setup_logger(__name__)

HEURISTICS = ("min_degree", "min_fill")


@dataclass
class ValidationReport:
    """Outcome of a decomposition check; falsy when any violation was found."""
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def _as_nx(graph):
    return graph.graph if isinstance(graph, DerivedGraph) else graph


def width(td):
    """max(|X_t|) - 1 over all bags; -1 for the empty decomposition."""
    return td.width()


def _degree_score(adjacency, vertex):
    return len(adjacency[vertex])


def _fill_score(adjacency, vertex):
    neighbours = sorted(adjacency[vertex])
    return sum(1 for a, b in combinations(neighbours, 2) if b not in adjacency[a])


def _eliminate(graph, heuristic):
    """Greedy elimination ordering; ties go to the smallest vertex.

    Returns:
        list: (vertex, bag) pairs in elimination order, bag = vertex plus its
        neighbours at elimination time.
    """
    if heuristic not in HEURISTICS:
        raise InvalidParameterError(f"unknown heuristic {heuristic!r}, expected one of {HEURISTICS}")
    score = _degree_score if heuristic == "min_degree" else _fill_score
    adjacency = {v: set(graph[v]) - {v} for v in graph.nodes}
    current = {v: score(adjacency, v) for v in adjacency}
    heap = [(s, v) for v, s in current.items()]
    heapq.heapify(heap)

    eliminated = []
    while heap:
        value, vertex = heapq.heappop(heap)
        if vertex not in adjacency or current[vertex] != value:
            continue
        neighbours = adjacency.pop(vertex)
        eliminated.append((vertex, frozenset(neighbours | {vertex})))
        for a in neighbours:
            adjacency[a].discard(vertex)
        for a, b in combinations(sorted(neighbours), 2):
            adjacency[a].add(b)
            adjacency[b].add(a)

        affected = set(neighbours)
        if heuristic == "min_fill":
            for a in neighbours:
                affected |= adjacency[a]
        for a in sorted(affected):
            new_score = score(adjacency, a)
            if new_score != current[a]:
                current[a] = new_score
                heapq.heappush(heap, (new_score, a))
    return eliminated


def _contract_subset_bags(bags, tree):
    """Merge every bag that is contained in a neighbouring bag into that neighbour."""
    queue = deque(sorted(tree.nodes))
    while queue:
        node = queue.popleft()
        if node not in tree:
            continue
        for other in sorted(tree[node]):
            if bags[node] <= bags[other]:
                for moved in list(tree[node]):
                    if moved != other:
                        tree.add_edge(other, moved)
                tree.remove_node(node)
                del bags[node]
                queue.append(other)
                queue.extend(sorted(tree[other]))
                break


def heuristic_td(graph, heuristic="min_degree"):
    """Tree decomposition from a min-degree or min-fill elimination ordering.

    Parameters:
    - graph: a DerivedGraph or a networkx graph with comparable vertices.
    - heuristic: "min_degree" or "min_fill".
    Returns:
        TreeDecomposition: valid for the graph, node 0 is the first surviving bag.
    """
    graph = _as_nx(graph)
    eliminated = _eliminate(graph, heuristic)
    position = {vertex: index for index, (vertex, _) in enumerate(eliminated)}

    bags = {}
    tree = nx.Graph()
    roots = []
    for index, (vertex, bag) in enumerate(eliminated):
        bags[index] = bag
        tree.add_node(index)
        rest = bag - {vertex}
        if rest:
            tree.add_edge(index, min(position[v] for v in rest))
        else:
            roots.append(index)
    # one tree per connected component; chain their roots together
    tree.add_edges_from(zip(roots, roots[1:]))

    _contract_subset_bags(bags, tree)
    renumber = {old: new for new, old in enumerate(sorted(bags))}
    td = TreeDecomposition({renumber[old]: bag for old, bag in bags.items()},
                           [(renumber[a], renumber[b]) for a, b in tree.edges])
    logger.debug("%s decomposition: %d bags, width %d", heuristic, len(td), td.width())
    return td


def best_td(graph):
    """Run both heuristics and keep the narrower decomposition (min-degree on ties)."""
    by_degree = heuristic_td(graph, "min_degree")
    by_fill = heuristic_td(graph, "min_fill")
    return by_fill if by_fill.width() < by_degree.width() else by_degree


def validate_td(graph, td):
    """Check the tree shape and the three tree decomposition conditions.

    Violations are collected, never raised; each message starts with its category:
    tree, unknown_vertex, vertex_coverage, edge_coverage or connectivity.
    """
    graph = _as_nx(graph)
    report = ValidationReport()
    if td.bags and not nx.is_tree(td.tree):
        report.violations.append("tree: the node graph is not a tree")
    if set(td.tree.nodes) != set(td.bags):
        report.violations.append("tree: tree nodes and bag ids differ")

    occurrences = {}
    for node, bag in td.bags.items():
        for vertex in bag:
            occurrences.setdefault(vertex, set()).add(node)

    for vertex in sorted(set(occurrences) - set(graph.nodes)):
        report.violations.append(f"unknown_vertex: {_show(vertex)} is not a graph vertex")
    for vertex in sorted(set(graph.nodes) - set(occurrences)):
        report.violations.append(f"vertex_coverage: {_show(vertex)} is in no bag")
    for a, b in sorted(tuple(sorted(edge)) for edge in graph.edges):
        if not occurrences.get(a, set()) & occurrences.get(b, set()):
            report.violations.append(f"edge_coverage: no bag holds both {_show(a)} and {_show(b)}")
    for vertex, nodes in sorted(occurrences.items()):
        if not nx.is_connected(td.tree.subgraph(nodes)):
            report.violations.append(f"connectivity: bags holding {_show(vertex)} are not connected")
    return report


def _show(vertex):
    return list(vertex) if isinstance(vertex, tuple) else vertex


def _require_valid(graph, td):
    report = validate_td(graph, td)
    if not report:
        raise InvalidDecompositionError("invalid tree decomposition: " + "; ".join(report.violations[:3]),
                                        report.violations)


def make_nice(td, root=None, graph=None):
    """Convert a tree decomposition into a nice one with the same width.

    Parameters:
    - td: a valid TreeDecomposition.
    - root: the node to root at, default the smallest node id.
    - graph: when given, td is validated against it; otherwise only the tree shape
      and the connectivity condition are checked.
    Returns:
        NiceTreeDecomposition: introduce/forget chains in canonical vertex order,
        binary joins, empty root bag.
    """
    if graph is None:
        graph = nx.Graph()
        graph.add_nodes_from(td.vertices())
    _require_valid(graph, td)

    nodes = {}

    def new_node(kind, bag, vertex=None, children=()):
        node_id = len(nodes)
        nodes[node_id] = NiceNode(node_id, kind, bag, vertex, children)
        return node_id

    if not td.bags:
        leaf = new_node(NodeKind.LEAF, ())
        return NiceTreeDecomposition(leaf, nodes)

    root = min(td.bags) if root is None else root
    if root not in td.bags:
        raise InvalidDecompositionError(f"root {root} is not a node of the decomposition")

    order = list(nx.bfs_tree(td.tree, root))
    parent = {root: None}
    for node in order:
        for other in td.tree[node]:
            if other not in parent:
                parent[other] = node
    children = {node: [] for node in order}
    for node in order[1:]:
        children[parent[node]].append(node)
    descendants = {}
    for node in reversed(order):
        descendants[node] = 1 + sum(descendants[c] for c in children[node])

    def move(start, source, target):
        """Chain of forgets then introduces from bag source to bag target."""
        current, bag = start, set(source)
        for vertex in sorted(source - target):
            bag.discard(vertex)
            current = new_node(NodeKind.FORGET, bag, vertex, [current])
        for vertex in sorted(target - source):
            bag.add(vertex)
            current = new_node(NodeKind.INTRODUCE, bag, vertex, [current])
        return current

    top = {}
    for node in reversed(order):
        bag = td.bags[node]
        kids = sorted(children[node], key=lambda c: (-descendants[c], c))
        if not kids:
            top[node] = move(new_node(NodeKind.LEAF, ()), frozenset(), bag)
            continue
        branches = [move(top[child], td.bags[child], bag) for child in kids]
        current = branches[0]
        for branch in branches[1:]:
            current = new_node(NodeKind.JOIN, bag, None, [current, branch])
        top[node] = current

    final = move(top[root], td.bags[root], frozenset())
    nice = NiceTreeDecomposition(final, nodes)
    logger.debug("nice decomposition: %d nodes from %d bags, width %d", len(nice), len(td), nice.width())
    return nice


def validate_nice(graph, ntd):
    """Check node kinds, bag relations, the empty root bag, and TD validity for graph."""
    report = ValidationReport()
    if ntd.nodes[ntd.root].bag:
        report.violations.append("root: the root bag is not empty")
    seen = set(ntd.postorder())
    if seen != set(ntd.nodes):
        report.violations.append("tree: some nodes are unreachable from the root")

    for node in ntd.nodes.values():
        kids = [ntd.nodes[c] for c in node.children]
        label = f"node {node.node_id} ({node.kind.value})"
        if node.kind is NodeKind.LEAF:
            if kids or node.bag:
                report.violations.append(f"kind: {label} must have no children and an empty bag")
        elif node.kind is NodeKind.JOIN:
            if len(kids) != 2 or any(k.bag != node.bag for k in kids):
                report.violations.append(f"kind: {label} needs two children with its bag")
        elif len(kids) != 1:
            report.violations.append(f"kind: {label} needs exactly one child")
        elif node.kind is NodeKind.INTRODUCE:
            if node.vertex in kids[0].bag or node.bag != kids[0].bag | {node.vertex}:
                report.violations.append(f"kind: {label} does not introduce {_show(node.vertex)}")
        elif node.vertex not in kids[0].bag or node.vertex in node.bag \
                or node.bag | {node.vertex} != kids[0].bag:
            report.violations.append(f"kind: {label} does not forget {_show(node.vertex)}")

    if graph is not None:
        report.violations.extend(validate_td(graph, ntd.as_tree_decomposition()).violations)
    return report


def hasse_td_from_conn_td(complex_, d, td_conn):
    """Turn a decomposition of Con_d(K) into one of Hasse_d(K), width at most one larger.

    For every (d-1)-simplex with cofaces, a bag holding all of its cofaces is copied,
    the copy gets the (d-1)-simplex and hangs off the original as a new leaf.
    Cofaceless (d-1)-simplices get singleton bags.
    """
    _require_valid(connectivity_graph(complex_, d), td_conn)
    bags = dict(td_conn.bags)
    edges = list(td_conn.edges)
    next_id = max(bags, default=-1) + 1

    occurrences = {}
    for node, bag in bags.items():
        for vertex in bag:
            occurrences.setdefault(vertex, set()).add(node)

    anchor = min(bags, default=None)
    for face in complex_.simplices_of_dim(d - 1):
        cofaces = complex_.cofaces(face)
        if cofaces:
            hosts = set.intersection(*(occurrences[c] for c in cofaces))
            if not hosts:
                raise InvalidDecompositionError(f"no bag holds every coface of {list(face)}")
            host = min(hosts)
            bags[next_id] = bags[host] | {face}
            edges.append((host, next_id))
        else:
            bags[next_id] = frozenset({face})
            if anchor is not None:
                edges.append((anchor, next_id))
        if anchor is None:
            anchor = next_id
        next_id += 1
    return TreeDecomposition(bags, edges)


def suspend_td(td, apexes, kind, level):
    """Lift a decomposition of Con_level(K) or Hasse_level(K) to the suspension S(K).

    Every bag vertex s is replaced by the two cones s+v+ and s+v-. For the Hasse kind
    each level-dimensional simplex s also gets a leaf bag {s+v+, s+v-, s}, since s
    itself is a vertex of the suspended Hasse level. The complex must have no
    simplices above dimension ``level``.

    Args:
        td (TreeDecomposition): Decomposition of the level graph of K.
        apexes (tuple): (v+, v-) from the suspension.
        kind (GraphKind | str): Which graph td decomposes.
        level (int): The level of the input graph; the output is for level + 1.
    """
    kind = GraphKind(kind)
    plus, minus = apexes
    bags = {node: frozenset(s.join(apex) for s in bag for apex in (plus, minus))
            for node, bag in td.bags.items()}
    edges = list(td.edges)
    if kind is GraphKind.HASSE:
        next_id = max(bags, default=-1) + 1
        tops = sorted({s for bag in td.bags.values() for s in bag if s.dim == level})
        host = {}
        for node in sorted(td.bags):
            for simplex in td.bags[node]:
                host.setdefault(simplex, node)
        for simplex in tops:
            bags[next_id] = frozenset({simplex.join(plus), simplex.join(minus), simplex})
            edges.append((host[simplex], next_id))
            next_id += 1
    return TreeDecomposition(bags, edges)
