"""This module defines the TreeDecomposition and NiceTreeDecomposition models.
"""
from enum import Enum

import networkx as nx


class TreeDecomposition:
    """Model class for an unrooted tree decomposition.

    Attributes:
        bags (dict): Node id -> frozenset of graph vertices.
        tree (networkx.Graph): The tree on the node ids.
    """

    def __init__(self, bags, tree_edges=()):
        self.bags = {node: frozenset(bag) for node, bag in dict(bags).items()}
        self.tree = nx.Graph()
        self.tree.add_nodes_from(sorted(self.bags))
        self.tree.add_edges_from(tree_edges)

    @property
    def nodes(self):
        return sorted(self.bags)

    @property
    def edges(self):
        return sorted(tuple(sorted(edge)) for edge in self.tree.edges)

    def width(self):
        """Largest bag size minus one; -1 when there is no vertex in any bag."""
        return max((len(bag) for bag in self.bags.values()), default=0) - 1

    def vertices(self):
        return frozenset().union(*self.bags.values()) if self.bags else frozenset()

    def __len__(self):
        return len(self.bags)

    def __repr__(self):
        return f'TreeDecomposition({len(self.bags)} bags, width={self.width()})'


class NodeKind(str, Enum):
    """Node kinds of a nice tree decomposition."""
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


class NiceNode:
    """One node of a nice tree decomposition.

    Attributes:
        node_id (int): Identifier, unique in its decomposition.
        kind (NodeKind): Leaf, introduce, forget or join.
        bag (frozenset): The bag X_t.
        vertex: The introduced or forgotten vertex, None for leaves and joins.
        children (list): Child node ids, at most two.
    """
    __slots__ = ("node_id", "kind", "bag", "vertex", "children")

    def __init__(self, node_id, kind, bag, vertex=None, children=()):
        self.node_id = node_id
        self.kind = NodeKind(kind)
        self.bag = frozenset(bag)
        self.vertex = vertex
        self.children = list(children)

    def __repr__(self):
        vertex = f", {self.vertex!r}" if self.vertex is not None else ""
        return f'NiceNode({self.node_id}, {self.kind.value}{vertex}, |bag|={len(self.bag)})'


class NiceTreeDecomposition:
    """Model class for a rooted nice tree decomposition.

    Attributes:
        root (int): Id of the root node, whose bag is empty.
        nodes (dict): Node id -> NiceNode.
    """

    def __init__(self, root, nodes):
        self.root = root
        self.nodes = dict(nodes)
        self.parent = {child: node.node_id for node in self.nodes.values() for child in node.children}

    def __getitem__(self, node_id):
        return self.nodes[node_id]

    def __len__(self):
        return len(self.nodes)

    def width(self):
        return max((len(node.bag) for node in self.nodes.values()), default=0) - 1

    def postorder(self):
        """Node ids in DFS post-order from the root, children in list order."""
        order = []
        stack = [(self.root, False)]
        while stack:
            node_id, expanded = stack.pop()
            if expanded:
                order.append(node_id)
                continue
            stack.append((node_id, True))
            for child in reversed(self.nodes[node_id].children):
                stack.append((child, False))
        return order

    def as_tree_decomposition(self):
        """Forget the rooting and node kinds."""
        edges = [(parent, child) for child, parent in self.parent.items()]
        return TreeDecomposition({nid: node.bag for nid, node in self.nodes.items()}, edges)

    def kind_counts(self):
        counts = {kind.value: 0 for kind in NodeKind}
        for node in self.nodes.values():
            counts[node.kind.value] += 1
        return counts

    def __repr__(self):
        return f'NiceTreeDecomposition({len(self.nodes)} nodes, width={self.width()})'
