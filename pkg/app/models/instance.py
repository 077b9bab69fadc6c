"""This module defines the Instance and PointCloud models.
"""
from app.controllers.complex_controller import chain_in_complex, is_cycle
from app.errors import DimensionMismatchError, NotACycleError


class Instance:
    """Model class representing one homology localization problem.

    Attributes:
        complex (SimplicialComplex): The weighted complex K.
        cycle (Chain): The input d-cycle V.
        d (int): Cycle dimension.
        meta (dict): Generator name, parameters, seed, PRNG id and format version.
    """

    def __init__(self, complex_, cycle, d, meta=None):
        if cycle.dim != d:
            raise DimensionMismatchError(f"cycle has dimension {cycle.dim}, instance has d = {d}")
        chain_in_complex(complex_, cycle)
        if not is_cycle(cycle):
            raise NotACycleError("the instance cycle is not a cycle")
        self.complex = complex_
        self.cycle = cycle
        self.d = d
        self.meta = dict(meta or {})

    @property
    def name(self):
        """Stable identifier built from generator, parameters and seed."""
        params = "x".join(str(p) for p in self.meta.get("params", []))
        return f"{self.meta.get('generator', 'custom')}-{params}-s{self.meta.get('seed', 0)}"

    def __repr__(self):
        return f'Instance({self.name}, d={self.d}, |V|={len(self.cycle)})'

    def to_dict(self):
        """Return the instance file representation.
        """
        return {
            'format_version': self.meta.get('format_version', 1),
            'meta': self.meta,
            'd': self.d,
            'complex': self.complex.to_dict(),
            'cycle': self.cycle.to_dict()
        }


class PointCloud:
    """Model class representing a sampled point cloud in R^3.

    Attributes:
        points (numpy.ndarray): Array of shape (n, 3).
        seed (int): Seed the cloud was drawn with.
    """

    def __init__(self, points, seed):
        self.points = points
        self.seed = seed

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f'PointCloud({len(self.points)} points, seed={self.seed})'
