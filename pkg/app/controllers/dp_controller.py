"""
This module contains the two tree decomposition dynamic programs for homology
localization over Z2.

Algorithm "conn" walks a nice decomposition of the (d+1)-connectivity graph; a bag
scope is the bag plus the d-faces of its simplices. Algorithm "hasse" walks a nice
decomposition of level d+1 of the Hasse diagram; a bag scope is the bag itself.

At node t the table maps (Q, P) to the cheapest cost(U restricted to the forgotten
d-simplices) over (d+1)-chains W inside the processed region with W = Q on the bag
and U = V + boundary(W) equal to P on the bag scope. Q and P are bitmasks over the
canonical order of K_{d+1} and K_d.
"""
import time
from dataclasses import dataclass

from app.config import Config
from app.controllers.complex_controller import boundary, chain_in_complex, cost, is_cycle
from app.controllers.graph_controller import connectivity_graph, hasse_level
from app.controllers.treewidth_controller import best_td, make_nice, validate_nice
from app.errors import DimensionMismatchError, InfeasibleError, InvalidDecompositionError, InvalidParameterError, \
    NotACycleError, ResourceLimitExceeded
from app.logger import setup_logger
from app.models.decomposition import NodeKind
from app.models.simplex import Chain
from app.models.solution import DPTable, Solution, SolveStats

logger = setup_logger(__name__)

ALGORITHMS = ("conn", "hasse")
EMPTY_KEY = (0, 0)


class DPContext:
    """Bit indices and incidence masks shared by every node of one solve.

    Attributes:
        upper (tuple): K_{d+1} in canonical order; bit i of Q is upper[i].
        lower (tuple): K_d in canonical order; bit i of P is lower[i].
    """

    def __init__(self, complex_, cycle, d):
        self.complex = complex_
        self.cycle = cycle
        self.d = d
        self.upper = complex_.simplices_of_dim(d + 1)
        self.lower = complex_.simplices_of_dim(d)
        self.q_bit = {s: 1 << i for i, s in enumerate(self.upper)}
        self.p_bit = {s: 1 << i for i, s in enumerate(self.lower)}
        self.boundary_mask = {s: _mask(self.p_bit[f] for f in s.faces()) for s in self.upper}
        self.coface_mask = {s: _mask(self.q_bit[c] for c in complex_.cofaces(s)) for s in self.lower}
        self.cycle_mask = _mask(self.p_bit[s] for s in cycle.elements)
        self._lower_weights = [complex_.weight(s) for s in self.lower]
        self._upper_boundaries = [self.boundary_mask[s] for s in self.upper]
        self._boundary_cache = {}

    def mask_cost(self, mask):
        """Weight of the d-simplices in a P mask, summed in canonical order."""
        total = 0.0
        while mask:
            low = mask & -mask
            total += self._lower_weights[low.bit_length() - 1]
            mask ^= low
        return total

    def boundary_of(self, q_mask):
        """P mask of the boundary of the (d+1)-chain encoded by a Q mask."""
        cached = self._boundary_cache.get(q_mask)
        if cached is None:
            cached, mask = 0, q_mask
            while mask:
                low = mask & -mask
                cached ^= self._upper_boundaries[low.bit_length() - 1]
                mask ^= low
            self._boundary_cache[q_mask] = cached
        return cached

    def upper_mask(self, simplices):
        return _mask(self.q_bit[s] for s in simplices if s in self.q_bit)

    def lower_mask(self, simplices):
        return _mask(self.p_bit[s] for s in simplices if s in self.p_bit)

    def faces_mask(self, simplices):
        """P mask of every d-face of the given (d+1)-simplices."""
        return _mask(self.boundary_mask[s] for s in simplices if s in self.boundary_mask)


def _mask(bits):
    total = 0
    for bit in bits:
        total |= bit
    return total


@dataclass
class DPRun:
    """Tables of a finished DP pass, kept for reconstruction and inspection."""
    context: DPContext
    ntd: object
    tables: dict
    stats: SolveStats
    root_value: float


# -- algorithm C: connectivity graph ---------------------------------------------

def conn_introduce(child, sigma, context, child_scope):
    """Introduce the (d+1)-simplex sigma.

    N_t are the d-faces of sigma outside the child scope; sigma is their only coface
    in the processed region, so their P bits are forced.
    """
    table = DPTable(None)
    bit = context.q_bit[sigma]
    faces = context.boundary_mask[sigma]
    new_faces = faces & ~child_scope
    kept = context.cycle_mask & new_faces
    flipped_new = (context.cycle_mask ^ faces) & new_faces
    flip_old = faces & child_scope
    for key, (value, _) in child.items():
        q, p = key
        table.offer((q, p | kept), value, key)
        table.offer((q | bit, (p ^ flip_old) | flipped_new), value, key)
    return table


def conn_forget(child, sigma, context, scope, child_scope):
    """Forget sigma; the old d-faces O_t leave the scope and their P bits are paid for."""
    table = DPTable(None)
    keep_q = ~context.q_bit[sigma]
    old_faces = child_scope & ~scope
    for key, (value, _) in child.items():
        q, p = key
        table.offer((q & keep_q, p & scope), value + context.mask_cost(p & old_faces), key)
    return table


def conn_join(left, right, context, scope):
    """Combine two children with P = P_s + P_s' + boundary(Q) + (V on the scope)."""
    return _join(left, right, context, scope)


def finalize_unprocessed(complex_, cycle, d, root_cost):
    """Add the weight of cycle simplices the connectivity DP never sees.

    Those are the d-simplices of V without any (d+1)-coface.
    """
    if root_cost is None:
        raise InfeasibleError("the root table has no (empty, empty) entry")
    unseen = Chain(d, (s for s in cycle.elements if not complex_.cofaces(s)))
    return root_cost + cost(complex_, unseen)


# -- algorithm H: Hasse level ----------------------------------------------------

def hasse_introduce(child, vertex, context, p_scope):
    """Introduce a (d+1)-simplex or a d-simplex.

    A d-simplex rho enters with its P bit forced to (V + boundary(Q))(rho): its
    cofaces inside the processed region are exactly the bag ones.
    """
    table = DPTable(None)
    if vertex in context.q_bit:
        bit = context.q_bit[vertex]
        flip = context.boundary_mask[vertex] & p_scope
        for key, (value, _) in child.items():
            q, p = key
            table.offer(key, value, key)
            table.offer((q | bit, p ^ flip), value, key)
        return table

    bit = context.p_bit[vertex]
    cofaces = context.coface_mask[vertex]
    in_cycle = bool(context.cycle_mask & bit)
    for key, (value, _) in child.items():
        q, p = key
        if in_cycle ^ ((q & cofaces).bit_count() & 1):
            table.offer((q, p | bit), value, key)
        else:
            table.offer(key, value, key)
    return table


def hasse_forget(child, vertex, context):
    """Forget a vertex; a forgotten d-simplex in P pays its weight."""
    table = DPTable(None)
    if vertex in context.q_bit:
        keep_q = ~context.q_bit[vertex]
        for key, (value, _) in child.items():
            table.offer((key[0] & keep_q, key[1]), value, key)
        return table

    bit = context.p_bit[vertex]
    weight = context.complex.weight(vertex)
    for key, (value, _) in child.items():
        q, p = key
        if p & bit:
            table.offer((q, p & ~bit), value + weight, key)
        else:
            table.offer(key, value, key)
    return table


def hasse_join(left, right, context, p_scope):
    """Combine two children with P = (P_s + P_s' + boundary(Q) + V) on the bag."""
    return _join(left, right, context, p_scope)


def _join(left, right, context, scope):
    """Shared join: one right lookup per (left entry, right entry with the same Q)."""
    table = DPTable(None)
    right_by_q = {}
    for key, (value, _) in right.items():
        right_by_q.setdefault(key[0], []).append((key, value))
    offsets = {}
    for left_key, (left_value, _) in left.items():
        q, p_left = left_key
        partners = right_by_q.get(q)
        if not partners:
            continue
        offset = offsets.get(q)
        if offset is None:
            offset = offsets[q] = (context.boundary_of(q) ^ context.cycle_mask) & scope
        for right_key, right_value in partners:
            p = p_left ^ right_key[1] ^ offset
            table.offer((q, p), left_value + right_value, (left_key, right_key))
    return table


# -- driver ----------------------------------------------------------------------

def _check_inputs(complex_, cycle, d):
    if cycle.dim != d:
        raise DimensionMismatchError(f"input cycle has dimension {cycle.dim}, expected {d}")
    chain_in_complex(complex_, cycle)
    if not is_cycle(cycle):
        raise NotACycleError("the input chain is not a cycle")


def _level_graph(complex_, d, algorithm):
    return connectivity_graph(complex_, d + 1) if algorithm == "conn" else hasse_level(complex_, d + 1)


def prepare_decomposition(complex_, d, algorithm, ntd=None):
    """Return a validated nice decomposition of the graph the algorithm needs.

    Without ntd, the narrower of the two heuristic decompositions is made nice.
    """
    graph = _level_graph(complex_, d, algorithm)
    if ntd is None:
        return make_nice(best_td(graph), graph=graph)
    report = validate_nice(graph, ntd)
    if not report:
        raise InvalidDecompositionError("invalid nice decomposition: " + "; ".join(report.violations[:3]),
                                        report.violations)
    return ntd


def _run(complex_, cycle, d, ntd, algorithm, time_limit, mem_cap_entries):
    started = time.perf_counter()
    _check_inputs(complex_, cycle, d)
    ntd = prepare_decomposition(complex_, d, algorithm, ntd)
    context = DPContext(complex_, cycle, d)
    time_limit = Config.TIME_LIMIT if time_limit is None else time_limit
    mem_cap_entries = Config.MEM_CAP_ENTRIES if mem_cap_entries is None else mem_cap_entries

    stats = SolveStats(algorithm=algorithm, width=ntd.width(), nodes=len(ntd))
    tables = {}
    scopes = {}
    for node_id in ntd.postorder():
        if time_limit and time.perf_counter() - started > time_limit:
            raise ResourceLimitExceeded("timeout", f"{algorithm} solve exceeded {time_limit} s")
        node = ntd[node_id]
        if algorithm == "conn":
            scope = context.faces_mask(node.bag)
        else:
            scope = context.lower_mask(node.bag)
        scopes[node_id] = scope

        if node.kind is NodeKind.LEAF:
            table = DPTable(node_id, {EMPTY_KEY: (0.0, None)})
        elif node.kind is NodeKind.JOIN:
            left, right = (tables[c] for c in node.children)
            join = conn_join if algorithm == "conn" else hasse_join
            table = join(left, right, context, scope)
        else:
            child_id = node.children[0]
            child = tables[child_id]
            if algorithm == "conn" and node.kind is NodeKind.INTRODUCE:
                table = conn_introduce(child, node.vertex, context, scopes[child_id])
            elif algorithm == "conn":
                table = conn_forget(child, node.vertex, context, scope, scopes[child_id])
            elif node.kind is NodeKind.INTRODUCE:
                table = hasse_introduce(child, node.vertex, context, scope)
            else:
                table = hasse_forget(child, node.vertex, context)
        table.node_id = node_id
        tables[node_id] = table
        for child_id in node.children:
            scopes.pop(child_id, None)

        stats.entries_total += len(table)
        stats.entries_peak = max(stats.entries_peak, len(table))
        if mem_cap_entries and stats.entries_total > mem_cap_entries:
            raise ResourceLimitExceeded(
                "memory_cap", f"{algorithm} solve stored more than {mem_cap_entries} table entries")

    root_value = tables[ntd.root].cost(EMPTY_KEY)
    if algorithm == "conn":
        root_value = finalize_unprocessed(complex_, cycle, d, root_value)
    elif root_value is None:
        raise InfeasibleError("the root table has no (empty, empty) entry")
    stats.dp_value = root_value
    stats.time_ms = (time.perf_counter() - started) * 1000.0
    logger.info("%s: width %d, %d nodes, peak %d entries, total %d, %.1f ms",
                algorithm, stats.width, stats.nodes, stats.entries_peak, stats.entries_total, stats.time_ms)
    return DPRun(context, ntd, tables, stats, root_value)


def run_conn(complex_, cycle, d, ntd=None, time_limit=None, mem_cap_entries=None):
    """Run algorithm C and keep every table."""
    return _run(complex_, cycle, d, ntd, "conn", time_limit, mem_cap_entries)


def run_hasse(complex_, cycle, d, ntd=None, time_limit=None, mem_cap_entries=None):
    """Run algorithm H and keep every table."""
    return _run(complex_, cycle, d, ntd, "hasse", time_limit, mem_cap_entries)


def reconstruct(run):
    """Follow backpointers from the root entry and rebuild (W, U).

    A (d+1)-simplex belongs to W when the child key at its forget node holds it in Q.
    """
    context = run.context
    chosen = set()
    stack = [(run.ntd.root, EMPTY_KEY)]
    while stack:
        node_id, key = stack.pop()
        node = run.ntd[node_id]
        back = run.tables[node_id].entries[key][1]
        if node.kind is NodeKind.LEAF:
            continue
        if node.kind is NodeKind.JOIN:
            stack.append((node.children[0], back[0]))
            stack.append((node.children[1], back[1]))
            continue
        if node.kind is NodeKind.FORGET and node.vertex in context.q_bit \
                and back[0] & context.q_bit[node.vertex]:
            chosen.add(node.vertex)
        stack.append((node.children[0], back))

    chain = Chain(context.d + 1, chosen)
    cycle = context.cycle + boundary(chain) if chosen else context.cycle
    return chain, cycle


def _solution(run):
    chain, cycle = reconstruct(run)
    value = cost(run.context.complex, cycle)
    if abs(value - run.root_value) > 1e-9 * max(1.0, abs(value)):
        logger.warning("%s: witness cost %r differs from DP value %r",
                       run.stats.algorithm, value, run.root_value)
    return Solution(cost=value, cycle=cycle, chain=chain, stats=run.stats)


def solve_conn(complex_, cycle, d, ntd=None, time_limit=None, mem_cap_entries=None):
    """Minimum-cost cycle homologous to V using a decomposition of Con_{d+1}(K).

    Parameters:
    - complex_: the weighted SimplicialComplex.
    - cycle: the input d-cycle V.
    - d: the cycle dimension.
    - ntd: optional nice decomposition of Con_{d+1}(K); built heuristically if absent.
    - time_limit, mem_cap_entries: optional limits, Config defaults when None.
    """
    return _solution(run_conn(complex_, cycle, d, ntd, time_limit, mem_cap_entries))


def solve_hasse(complex_, cycle, d, ntd=None, time_limit=None, mem_cap_entries=None):
    """Minimum-cost cycle homologous to V using a decomposition of Hasse_{d+1}(K)."""
    return _solution(run_hasse(complex_, cycle, d, ntd, time_limit, mem_cap_entries))


def solve(complex_, cycle, d, algorithm, ntd=None, time_limit=None, mem_cap_entries=None):
    """Dispatch to solve_conn or solve_hasse by name."""
    if algorithm == "conn":
        return solve_conn(complex_, cycle, d, ntd, time_limit, mem_cap_entries)
    if algorithm == "hasse":
        return solve_hasse(complex_, cycle, d, ntd, time_limit, mem_cap_entries)
    raise InvalidParameterError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
