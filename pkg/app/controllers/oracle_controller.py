"""
This module contains the ground truth used to check the solvers: exhaustive search
over (d+1)-chains, homology tests and ranks by Z2 elimination, and a homology
representative for building non-trivial input cycles.
"""
import time

from app.config import Config
from app.controllers.complex_controller import chain_in_complex, cost, is_cycle
from app.errors import DimensionMismatchError, NotACycleError, OracleCapExceeded, ResourceLimitExceeded
from app.logger import setup_logger
from app.models.simplex import Chain
from app.models.solution import Solution, SolveStats
from app.models.z2matrix import Z2Matrix

logger = setup_logger(__name__)

# power of two
CLOCK_STEPS = 4096
CLOCK_MASK = CLOCK_STEPS - 1


def _require_cycle(complex_, chain, d):
    if chain.dim != d:
        raise DimensionMismatchError(f"chain has dimension {chain.dim}, expected {d}")
    chain_in_complex(complex_, chain)
    if not is_cycle(chain):
        raise NotACycleError(f"{chain!r} is not a cycle")


def brute_force_min(complex_, cycle, d, cap=None, time_limit=None):
    """Minimum of cost(V + boundary(W)) over every W in K_{d+1}.

    W is enumerated in Gray-code order so each step toggles one (d+1)-simplex; the
    first optimum met in that order is returned.

    Parameters:
    - cap: largest |K_{d+1}| accepted, Config.BRUTE_FORCE_CAP when None.
    - time_limit: seconds, Config.TIME_LIMIT when None; checked every CLOCK_STEPS steps.

    Raises:
        OracleCapExceeded: too many (d+1)-simplices.
        ResourceLimitExceeded: status "timeout" once the time limit has passed.
    """
    started = time.perf_counter()
    _require_cycle(complex_, cycle, d)
    cap = Config.BRUTE_FORCE_CAP if cap is None else cap
    time_limit = Config.TIME_LIMIT if time_limit is None else time_limit
    upper = complex_.simplices_of_dim(d + 1)
    if len(upper) > cap:
        raise OracleCapExceeded(f"{len(upper)} (d+1)-simplices exceed the brute force cap of {cap}")

    matrix = Z2Matrix.boundary_matrix(complex_, d + 1)
    lower = complex_.simplices_of_dim(d)
    weights = [complex_.weight(s) for s in lower]

    def exact(mask):
        total = 0.0
        while mask:
            low = mask & -mask
            total += weights[low.bit_length() - 1]
            mask ^= low
        return total

    current = matrix.vector(cycle.elements)
    running = best = exact(current)
    best_w, best_u, w_mask = 0, current, 0
    for step in range(1, 1 << len(upper)):
        if time_limit and not step & CLOCK_MASK and time.perf_counter() - started > time_limit:
            raise ResourceLimitExceeded("timeout", f"brute force exceeded {time_limit} s after {step} steps")
        index = (step & -step).bit_length() - 1
        changed = matrix.columns[index]
        current ^= changed
        w_mask ^= 1 << index
        running += exact(changed & current) - exact(changed & ~current)
        if running <= best + 1e-9 * max(1.0, best):
            value = exact(current)
            running = value
            if value < best:
                best, best_w, best_u = value, w_mask, current

    chain = Chain(d + 1, (s for i, s in enumerate(upper) if best_w >> i & 1))
    result = Chain(d, matrix.labels(best_u))
    elapsed = (time.perf_counter() - started) * 1000.0
    logger.info("brute: %d (d+1)-simplices, cost %r, %.1f ms", len(upper), best, elapsed)
    stats = SolveStats(algorithm="brute", time_ms=elapsed, dp_value=best)
    return Solution(cost=cost(complex_, result), cycle=result, chain=chain, stats=stats)


def homologous(complex_, u, v, d):
    """True iff U + V lies in the image of the (d+1)-boundary map."""
    _require_cycle(complex_, u, d)
    _require_cycle(complex_, v, d)
    matrix = Z2Matrix.boundary_matrix(complex_, d + 1)
    return matrix.in_column_space(matrix.vector(u.elements ^ v.elements))


def homology_rank(complex_, d):
    """Dimension of H_d over Z2: nullity of the d-boundary minus rank of the (d+1)-boundary."""
    lower = Z2Matrix.boundary_matrix(complex_, d)
    upper = Z2Matrix.boundary_matrix(complex_, d + 1)
    return len(lower.cols) - lower.rank() - upper.rank()


def representative_cycle(complex_, d):
    """First kernel basis cycle of the d-boundary that is not a boundary, or None.

    Deterministic: the kernel basis follows the canonical simplex order.
    """
    cycles = Z2Matrix.boundary_matrix(complex_, d)
    boundaries = Z2Matrix.boundary_matrix(complex_, d + 1)
    for combo in cycles.kernel_basis():
        members = [s for i, s in enumerate(cycles.cols) if combo >> i & 1]
        if not boundaries.in_column_space(boundaries.vector(members)):
            return Chain(d, members)
    return None
