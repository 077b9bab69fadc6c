"""This module defines the Simplex, Chain and SimplicialComplex value types.
"""
import math
from collections import defaultdict
from itertools import combinations

from app.errors import DimensionMismatchError, InvalidComplexError


class Simplex(tuple):
    """A simplex stored canonically as a strictly increasing tuple of vertex ids.

    Equality, hashing and ordering are those of the vertex tuple.
    """
    __slots__ = ()

    def __new__(cls, vertices):
        if isinstance(vertices, Simplex):
            return vertices
        ordered = tuple(sorted(int(v) for v in vertices))
        if not ordered:
            raise InvalidComplexError("a simplex needs at least one vertex")
        if ordered[0] < 0:
            raise InvalidComplexError(f"negative vertex id in {ordered}")
        if any(a == b for a, b in zip(ordered, ordered[1:])):
            raise InvalidComplexError(f"repeated vertex in {ordered}")
        return super().__new__(cls, ordered)

    @property
    def dim(self):
        """Dimension, one less than the number of vertices."""
        return len(self) - 1

    @property
    def vertices(self):
        return tuple(self)

    def faces(self):
        """Return the codimension-one faces in canonical order."""
        if len(self) == 1:
            return ()
        return tuple(Simplex(face) for face in combinations(self, len(self) - 1))

    def subsets(self):
        """Every nonempty subset of the vertex set, including the simplex itself."""
        for size in range(1, len(self) + 1):
            for subset in combinations(self, size):
                yield Simplex(subset)

    def join(self, vertex):
        return Simplex(self + (vertex,))

    def label(self):
        return "-".join(str(v) for v in self)

    def __repr__(self):
        return f"Simplex({list(self)})"


class Chain:
    """A Z2 chain: a set of simplices of one dimension.

    Attributes:
        dim (int): Dimension of every element; -1 only for the empty chain below vertices.
        elements (frozenset): The simplices with coefficient one.
    """
    __slots__ = ("dim", "elements")

    def __init__(self, dim, elements=()):
        elements = frozenset(Simplex(s) for s in elements)
        for simplex in elements:
            if simplex.dim != dim:
                raise DimensionMismatchError(
                    f"simplex {list(simplex)} has dimension {simplex.dim}, chain has {dim}")
        if dim < -1 or (dim == -1 and elements):
            raise DimensionMismatchError(f"invalid chain dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "elements", elements)

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and self.elements == other.elements

    def __hash__(self):
        return hash((self.dim, self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, simplex):
        return Simplex(simplex) in self.elements

    def __bool__(self):
        return bool(self.elements)

    def __add__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if self.dim != other.dim:
            raise DimensionMismatchError(f"cannot add chains of dimension {self.dim} and {other.dim}")
        return Chain(self.dim, self.elements ^ other.elements)

    def sorted(self):
        return sorted(self.elements)

    def __repr__(self):
        return f"Chain(dim={self.dim}, {[list(s) for s in self.sorted()]})"

    def to_dict(self):
        """Return the cycle file representation of the chain.
        """
        return {
            'dim': self.dim,
            'simplices': [list(s) for s in self.sorted()]
        }


class SimplicialComplex:
    """A finite, face-closed, weighted simplicial complex.

    The incidence structure (simplices by dimension, cofaces) is computed once at
    construction; the object never changes afterwards.
    """

    def __init__(self, weights):
        normalized = {}
        for simplex, weight in dict(weights).items():
            simplex = Simplex(simplex)
            weight = float(weight)
            if not math.isfinite(weight) or weight < 0:
                raise InvalidComplexError(f"weight of {list(simplex)} must be finite and >= 0, got {weight}")
            normalized[simplex] = weight

        cofaces = defaultdict(list)
        for simplex in normalized:
            for face in simplex.faces():
                if face not in normalized:
                    raise InvalidComplexError(
                        f"not face-closed: {list(face)} missing below {list(simplex)}")
                cofaces[face].append(simplex)

        by_dim = defaultdict(list)
        for simplex in normalized:
            by_dim[simplex.dim].append(simplex)

        self._weights = normalized
        self._by_dim = {dim: tuple(sorted(members)) for dim, members in by_dim.items()}
        self._cofaces = {face: tuple(sorted(members)) for face, members in cofaces.items()}

    @classmethod
    def from_simplices(cls, simplices, weight=1.0):
        """Build a complex giving every listed simplex the same weight.

        The listing must already be face-closed.
        """
        return cls({Simplex(s): weight for s in simplices})

    @property
    def simplices(self):
        return frozenset(self._weights)

    @property
    def dim(self):
        """Largest simplex dimension, -1 for the empty complex."""
        return max(self._by_dim, default=-1)

    @property
    def vertex_ids(self):
        return tuple(s[0] for s in self.simplices_of_dim(0))

    def simplices_of_dim(self, dim):
        """The dim-simplices in canonical order."""
        return self._by_dim.get(dim, ())

    def weight(self, simplex):
        try:
            return self._weights[Simplex(simplex)]
        except KeyError as error:
            raise InvalidComplexError(f"{list(simplex)} is not in the complex") from error

    def weights(self):
        return dict(self._weights)

    def cofaces(self, simplex):
        """The codimension-one cofaces of a member simplex, in canonical order."""
        return self._cofaces.get(Simplex(simplex), ())

    def __contains__(self, simplex):
        try:
            return Simplex(simplex) in self._weights
        except InvalidComplexError:
            return False

    def __len__(self):
        return len(self._weights)

    def __iter__(self):
        return iter(sorted(self._weights))

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._weights == other._weights

    def __repr__(self):
        counts = {dim: len(members) for dim, members in sorted(self._by_dim.items())}
        return f"SimplicialComplex({counts})"

    def to_dict(self):
        """Return the complex file representation: every simplex with its weight.
        """
        ordered = sorted(self._weights, key=lambda s: (s.dim, s))
        return {
            'd': self.dim,
            'simplices': [{'v': list(s), 'w': self._weights[s]} for s in ordered]
        }
