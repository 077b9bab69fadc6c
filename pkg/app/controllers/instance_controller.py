"""
This module contains the instance generators: triangulated grids, cylinders, tori,
M-spaces and annuli, the K^(d,k) family, Vietoris-Rips complexes of noisy circle
samples, and the builder of input cycles V = X + boundary(B).
"""
import math

import networkx as nx
import numpy as np

from app.config import Config
from app.controllers.complex_controller import boundary, closure
from app.controllers.oracle_controller import homology_rank, representative_cycle
from app.errors import InvalidParameterError
from app.logger import setup_logger
from app.models.instance import Instance, PointCloud
from app.models.simplex import Chain, Simplex, SimplicialComplex

logger = setup_logger(__name__)

PRNG_NAME = "numpy.PCG64"
MODES = ("boundary_only", "homology_rep")


def make_rng(seed):
    """Seeded PCG64 generator; the algorithm name is recorded as PRNG_NAME."""
    return np.random.Generator(np.random.PCG64(seed))


def normal_draws(rng, size, mean, std):
    """Gaussian draws by the Box-Muller transform of two uniform draws."""
    u1 = rng.random(size)
    u2 = rng.random(size)
    return mean + std * np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def _squares(rows, cols, vid):
    """(a, b, c, e) corner ids of every unit square (i, j), i < rows, j < cols."""
    return ((vid(i, j), vid(i, j + 1), vid(i + 1, j), vid(i + 1, j + 1))
            for i in range(rows) for j in range(cols))


def _triangulate(squares):
    """Two triangles per square (a, b, c, e), cut along the a-e diagonal.

    a = (i, j), b = (i, j+1), c = (i+1, j), e = (i+1, j+1) as vertex ids.
    """
    triangles = []
    for a, b, c, e in squares:
        triangles.append((a, b, e))
        triangles.append((a, c, e))
    return closure(triangles)


def gen_grid(rows, cols):
    """Triangulated rows x cols grid; vertex (i, j) has id i*cols + j."""
    if rows < 2 or cols < 2:
        raise InvalidParameterError(f"grid needs rows, cols >= 2, got {rows}x{cols}")
    return _triangulate(_squares(rows - 1, cols - 1, lambda i, j: i * cols + j))


def gen_cylinder(m, n):
    """Grid with n rows of m vertices whose last column is glued to column 0."""
    if m < 3 or n < 2:
        raise InvalidParameterError(f"cylinder needs circumference m >= 3 and rows n >= 2, got {m}, {n}")
    return _triangulate(_squares(n - 1, m, lambda i, j: i * m + j % m))


def gen_torus(m, n):
    """Cylinder whose last row is glued to row 0 as well."""
    if m < 3 or n < 3:
        raise InvalidParameterError(f"torus needs m, n >= 3, got {m}, {n}")
    return _triangulate(_squares(n, m, lambda i, j: (i % n) * m + j % m))


def gen_mspace(m, k, t):
    """k strips of 2 x (m+1) vertices glued along a central m-vertex circle.

    Row 0 of every strip is the central circle (column m is column 0). Row 1 holds
    m fresh vertices per strip and its column m is the column 0 vertex of row 1 of
    strip (i + t) mod k. Circle vertices are 0..m-1, the outer vertices of strip i
    are m + i*m + j.
    """
    if m < 3 or k < 1 or not 0 <= t < k:
        raise InvalidParameterError(f"M-space needs m >= 3, k >= 1, 0 <= t < k, got {m}, {k}, {t}")

    def outer(i, j):
        if j == m:
            i, j = (i + t) % k, 0
        return m + i * m + j

    return _triangulate((j, (j + 1) % m, outer(i, j), outer(i, j + 1))
                        for i in range(k) for j in range(m))


def gen_annulus(inner, outer):
    """Annulus between an inner circle (ids 0..inner-1) and an outer one.

    Inner vertex i fans over an arc of the outer circle; consecutive inner vertices
    close a triangle on the outer vertex their arcs share.
    """
    if inner < 3 or outer < inner:
        raise InvalidParameterError(f"annulus needs 3 <= inner <= outer, got {inner}, {outer}")

    def ring(j):
        return inner + j % outer

    splits = [outer * i // inner for i in range(inner + 1)]
    triangles = []
    for i in range(inner):
        for j in range(splits[i], splits[i + 1]):
            triangles.append((i, ring(j), ring(j + 1)))
        triangles.append((i, (i + 1) % inner, ring(splits[i + 1])))
    return closure(triangles)


def gen_kdk(d, k):
    """k (d+1)-simplices glued along the common d-face {0, ..., d}."""
    if d < 1 or k < 1:
        raise InvalidParameterError(f"K^(d,k) needs d >= 1 and k >= 1, got {d}, {k}")
    base = tuple(range(d + 1))
    return closure(base + (d + 1 + apex,) for apex in range(k))


def circle_chain(vertex_ids):
    """The 1-cycle through the given vertices in order, closing back to the first."""
    ids = list(vertex_ids)
    return Chain(1, (Simplex((a, b)) for a, b in zip(ids, ids[1:] + ids[:1])))


def torus_meridian(m):
    """Row 0 of gen_torus(m, n): a non-bounding cycle of m edges."""
    return circle_chain(range(m))


def cylinder_boundary(m, n, side=0):
    """One of the two boundary circles of gen_cylinder(m, n)."""
    row = 0 if side == 0 else n - 1
    return circle_chain(row * m + j for j in range(m))


def annulus_circles(inner, outer):
    """(inner circle, outer circle) of gen_annulus(inner, outer)."""
    return circle_chain(range(inner)), circle_chain(range(inner, inner + outer))


def _noisy_circle(rng, angles):
    radii = normal_draws(rng, len(angles), 1.0, 0.1)
    heights = normal_draws(rng, len(angles), 0.0, 0.1)
    return np.column_stack((radii * np.cos(angles), radii * np.sin(angles), heights))


def sample_unfiltered(n, seed):
    """n points on a noisy unit circle: uniform angle, radius N(1, 0.1), height N(0, 0.1)."""
    rng = make_rng(seed)
    angles = 2.0 * np.pi * rng.random(n)
    return PointCloud(_noisy_circle(rng, angles), seed)


def sample_filtered(n, seed):
    """Max-min subsample of an unfiltered cloud keeping ceil(n/2) points.

    Starts from a random point and repeatedly adds the point furthest from those chosen.
    """
    cloud = sample_unfiltered(n, seed).points
    keep = math.ceil(n / 2)
    if keep == 0:
        return PointCloud(cloud[:0], seed)
    rng = make_rng(seed + 1)
    chosen = [int(rng.integers(n))]
    distance = np.linalg.norm(cloud - cloud[chosen[0]], axis=1)
    while len(chosen) < keep:
        nxt = int(np.argmax(distance))
        chosen.append(nxt)
        distance = np.minimum(distance, np.linalg.norm(cloud - cloud[nxt], axis=1))
    return PointCloud(cloud[chosen], seed)


def sample_sector(arcs, per_arc, seed):
    """per_arc points with uniform angle inside each of arcs equal arc segments."""
    rng = make_rng(seed)
    width = 2.0 * np.pi / arcs
    starts = np.repeat(np.arange(arcs) * width, per_arc)
    angles = starts + width * rng.random(arcs * per_arc)
    return PointCloud(_noisy_circle(rng, angles), seed)


def gen_vr(cloud, radius):
    """2-skeleton of the Vietoris-Rips complex at the given radius.

    Edges join points at distance <= radius and weigh their length; vertices and
    triangles weigh 0.
    """
    if radius <= 0:
        raise InvalidParameterError(f"VR radius must be positive, got {radius}")
    points = np.asarray(cloud.points, dtype=float)
    n = len(points)
    distance = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    weights = {Simplex((i,)): 0.0 for i in range(n)}
    neighbours = {i: set() for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if distance[i, j] <= radius:
                weights[Simplex((i, j))] = float(distance[i, j])
                neighbours[i].add(j)
                neighbours[j].add(i)
    for i in range(n):
        for j in sorted(v for v in neighbours[i] if v > i):
            for k in sorted(v for v in neighbours[i] & neighbours[j] if v > j):
                weights[Simplex((i, j, k))] = 0.0
    return SimplicialComplex(weights)


def suggest_vr_radius(cloud):
    """1.1 times the smallest radius whose 1-skeleton is connected."""
    points = np.asarray(cloud.points, dtype=float)
    if len(points) < 2:
        return 1.0
    graph = nx.Graph()
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            graph.add_edge(i, j, weight=float(np.linalg.norm(points[i] - points[j])))
    tree = nx.minimum_spanning_tree(graph)
    return 1.1 * max(w for _, _, w in tree.edges(data="weight"))


def build_input_cycle(complex_, d, seed, mode="boundary_only"):
    """V = X + boundary(B), B holding each (d+1)-simplex with probability 0.5.

    X is empty for "boundary_only" and a non-bounding representative for
    "homology_rep", which fails when H_d(K) = 0.
    """
    if mode not in MODES:
        raise InvalidParameterError(f"unknown mode {mode!r}, expected one of {MODES}")
    upper = complex_.simplices_of_dim(d + 1)
    picks = make_rng(seed).random(len(upper)) < 0.5
    filling = boundary(Chain(d + 1, (s for s, keep in zip(upper, picks) if keep)))
    if mode == "boundary_only":
        base = Chain(d)
    else:
        base = representative_cycle(complex_, d)
        if base is None:
            raise InvalidParameterError(f"H_{d} is trivial, no homology representative exists")
    return base + filling


def _vr_complex(cloud, params):
    radius = float(params[0]) if params else suggest_vr_radius(cloud)
    return gen_vr(cloud, radius), radius


FAMILIES = {
    "grid": (2, "rows cols"),
    "cylinder": (2, "m n"),
    "torus": (2, "m n"),
    "mspace": (3, "m k t"),
    "annulus": (2, "inner outer"),
    "kdk": (2, "d k"),
    "vr_unfiltered": (1, "n [radius]"),
    "vr_filtered": (1, "n [radius]"),
    "vr_sector": (2, "arcs per_arc [radius]"),
}


def generate_instance(family, params, seed=0, mode=None):
    """Build an Instance of a named family.

    Parameters:
    - family: a key of FAMILIES.
    - params: the family parameters; VR families accept an optional trailing radius.
    - seed: drives point sampling and the random boundary B.
    - mode: "boundary_only", "homology_rep" or None, which picks homology_rep for VR
      complexes with non-trivial H_1 and boundary_only otherwise.
    """
    if family not in FAMILIES:
        raise InvalidParameterError(f"unknown family {family!r}, expected one of {sorted(FAMILIES)}")
    arity, usage = FAMILIES[family]
    params = list(params)
    optional = 1 if family.startswith("vr_") else 0
    if not arity <= len(params) <= arity + optional:
        raise InvalidParameterError(f"{family} expects parameters: {usage}")
    counts = [int(p) for p in params[:arity]]
    params = counts + [float(p) for p in params[arity:]]

    meta = {"generator": family, "params": params, "seed": seed}
    d = 1
    if family == "grid":
        complex_ = gen_grid(*counts)
    elif family == "cylinder":
        complex_ = gen_cylinder(*counts)
    elif family == "torus":
        complex_ = gen_torus(*counts)
    elif family == "mspace":
        complex_ = gen_mspace(*counts)
    elif family == "annulus":
        complex_ = gen_annulus(*counts)
    elif family == "kdk":
        d = counts[0]
        complex_ = gen_kdk(*counts)
    else:
        if family == "vr_unfiltered":
            cloud = sample_unfiltered(counts[0], seed)
        elif family == "vr_filtered":
            cloud = sample_filtered(counts[0], seed)
        else:
            cloud = sample_sector(counts[0], counts[1], seed)
        complex_, radius = _vr_complex(cloud, params[arity:])
        meta["radius"] = radius

    if mode is None:
        vr = family.startswith("vr_")
        mode = "homology_rep" if vr and homology_rank(complex_, d) > 0 else "boundary_only"
    cycle = build_input_cycle(complex_, d, seed, mode)
    meta.update({"mode": mode, "prng": PRNG_NAME, "format_version": Config.FORMAT_VERSION})
    logger.info("generated %s %s seed %d: %d simplices, |V| = %d", family, params, seed, len(complex_), len(cycle))
    return Instance(complex_, cycle, d, meta)
