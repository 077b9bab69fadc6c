"""
This module contains the Z2 chain algebra on weighted simplicial complexes: closure,
boundary, addition, cost, the cycle test and the suspension construction.
"""
from collections import Counter

from app.errors import DimensionMismatchError, InvalidComplexError, NotACycleError
from app.models.simplex import Chain, Simplex, SimplicialComplex


def closure(simplices, weight=1.0):
    """Return the smallest complex containing every given simplex.

    Parameters:
    - simplices: any iterable of vertex collections.
    - weight: the weight given to every simplex of the result.
    """
    members = set()
    for simplex in simplices:
        simplex = Simplex(simplex)
        if simplex not in members:
            members.update(simplex.subsets())
    return SimplicialComplex({s: weight for s in members})


def boundary(chain):
    """Z2 boundary: a face survives iff it bounds an odd number of elements.

    The boundary of a 0-chain is the empty chain of dimension -1.
    """
    if chain.dim <= 0:
        return Chain(-1)
    parity = Counter(face for simplex in chain.elements for face in simplex.faces())
    return Chain(chain.dim - 1, (face for face, count in parity.items() if count % 2))


def chain_add(u, v):
    """Symmetric difference of two chains of the same dimension."""
    if u.dim != v.dim:
        raise DimensionMismatchError(f"cannot add chains of dimension {u.dim} and {v.dim}")
    return Chain(u.dim, u.elements ^ v.elements)


def cost(complex_, chain):
    """Sum of the weights of the chain, accumulated in canonical simplex order.

    Raises InvalidComplexError when an element is not in the complex.
    """
    total = 0.0
    for simplex in chain.sorted():
        if simplex not in complex_:
            raise InvalidComplexError(f"{list(simplex)} is not in the complex")
        total += complex_.weight(simplex)
    return total


def is_cycle(chain):
    return not boundary(chain).elements


def chain_in_complex(complex_, chain):
    """Raise InvalidComplexError unless every element of the chain is in the complex."""
    missing = [list(s) for s in chain.sorted() if s not in complex_]
    if missing:
        raise InvalidComplexError(f"chain simplices not in the complex: {missing[:5]}")


def apex_vertices(complex_):
    """The two fresh vertex ids used by the suspension: max id + 1 and max id + 2."""
    top = max(complex_.vertex_ids, default=-1)
    return top + 1, top + 2


def suspension(complex_):
    """Return the suspension S(K) and its apex ids (v+, v-).

    Each simplex keeps its weight, both cones over it inherit that weight and the
    two apex vertices weigh 1.0, so suspending a chain doubles its cost.
    """
    plus, minus = apex_vertices(complex_)
    weights = {Simplex((plus,)): 1.0, Simplex((minus,)): 1.0}
    for simplex in complex_.simplices:
        weight = complex_.weight(simplex)
        weights[simplex] = weight
        weights[simplex.join(plus)] = weight
        weights[simplex.join(minus)] = weight
    return SimplicialComplex(weights), (plus, minus)


def suspend_cycle(cycle, apexes):
    """Map a d-cycle V to the (d+1)-cycle made of both cones over V.

    Args:
        cycle (Chain): A cycle of the original complex.
        apexes (tuple): The (v+, v-) pair returned by ``suspension``.
    """
    if not is_cycle(cycle):
        raise NotACycleError("only cycles can be suspended")
    plus, minus = apexes
    cones = [s.join(apex) for s in cycle.elements for apex in (plus, minus)]
    return Chain(cycle.dim + 1, cones)
