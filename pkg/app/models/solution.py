"""This module defines the DP table, the solver statistics and the Solution model.
"""
from dataclasses import dataclass, field


class DPTable:
    """Sparse table of one nice decomposition node.

    Keys are ``(q, p)`` bitmask pairs over the canonical indices of K_{d+1} and K_d.
    Values are ``(cost, backpointer)``. A missing key means infinite cost.
    """
    __slots__ = ("node_id", "entries")

    def __init__(self, node_id, entries=None):
        self.node_id = node_id
        self.entries = entries if entries is not None else {}

    def offer(self, key, value, back):
        """Keep the cheaper candidate; equal costs keep the smaller backpointer."""
        current = self.entries.get(key)
        if current is None or value < current[0] or (value == current[0] and back < current[1]):
            self.entries[key] = (value, back)

    def cost(self, key):
        entry = self.entries.get(key)
        return None if entry is None else entry[0]

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def __repr__(self):
        return f'DPTable(node={self.node_id}, {len(self.entries)} entries)'


@dataclass
class SolveStats:
    """Bookkeeping of one solve.

    Attributes:
        algorithm (str): "conn", "hasse" or "brute".
        width (int): Width of the nice decomposition, -1 for brute force.
        nodes (int): Number of nice decomposition nodes.
        entries_peak (int): Largest table at one node.
        entries_total (int): Entries stored over all nodes.
        time_ms (float): Wall time of the solve.
        dp_value (float | None): Root value as accumulated by the DP.
    """
    algorithm: str
    width: int = -1
    nodes: int = 0
    entries_peak: int = 0
    entries_total: int = 0
    time_ms: float = 0.0
    dp_value: float = None

    def to_dict(self):
        return {
            'algorithm': self.algorithm,
            'width': self.width,
            'nodes': self.nodes,
            'entries_peak': self.entries_peak,
            'entries_total': self.entries_total,
            'time_ms': self.time_ms,
            'dp_value': self.dp_value
        }


@dataclass
class Solution:
    """An optimal homologous cycle.

    Attributes:
        cost (float): cost(K, cycle), summed in canonical order.
        cycle (Chain): U = V + boundary(chain).
        chain (Chain): W, the (d+1)-chain witnessing the homology.
        stats (SolveStats): How the solution was found.
    """
    cost: float
    cycle: object
    chain: object
    stats: SolveStats = field(default=None)

    def to_dict(self):
        """Return the witness file representation of the solution.
        """
        return {
            'algo': self.stats.algorithm if self.stats else None,
            'cost': self.cost,
            'dim': self.cycle.dim,
            'simplices': [list(s) for s in self.cycle.sorted()],
            'chain': [list(s) for s in self.chain.sorted()]
        }
