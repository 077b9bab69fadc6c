"""Module to define fixtures for pytest tests.
"""
import numpy as np
import pytest

from app.app import app
from app.controllers.complex_controller import closure
from app.controllers.instance_controller import build_input_cycle, gen_annulus, generate_instance
from app.controllers.oracle_controller import homology_rank
from app.models.instance import Instance
from app.models.simplex import Chain, SimplicialComplex
from tests.data_prueba import small_families, subcomplex_bases


@pytest.fixture
def client():
    """Fixture for creating a test client for the Flask application.

    Returns:
        FlaskClient: A test client for making requests to the Flask application.
    """
    client = app.test_client()
    return client


@pytest.fixture
def filled_square():
    """Two triangles glued along the diagonal 0-2."""
    return closure([(0, 1, 2), (0, 2, 3)])


@pytest.fixture
def square_loop():
    return Chain(1, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def hollow_triangle():
    """A 1-dimensional circle: three edges, no triangle."""
    return closure([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def triangle_fan():
    return closure([(0, 1, 2), (0, 2, 3), (0, 3, 4)])


@pytest.fixture
def annulus():
    return gen_annulus(4, 14)


def reweight(complex_, seed):
    """Same complex with integer weights 1..5 drawn from seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    simplices = sorted(complex_.simplices)
    weights = rng.integers(1, 6, size=len(simplices))
    return SimplicialComplex({s: float(w) for s, w in zip(simplices, weights)})


def make_random_instances(count):
    instances = []
    for seed in range(count):
        family, params, mode = small_families[seed % len(small_families)]
        instance = generate_instance(family, params, seed, mode)
        instances.append(Instance(reweight(instance.complex, seed), instance.cycle, instance.d, instance.meta))
    return instances


@pytest.fixture
def random_instances():
    """Thirty small instances with random integer weights, brute force sized."""
    return make_random_instances(30)


def random_subcomplex_instance(family, params, seed, max_upper=12):
    """Random weighted sub-complex of a generated complex with at most max_upper (d+1)-simplices.

    A random share of the (d+1)-simplices is kept together with about half of the
    remaining d-simplices; V is a homology representative plus a random boundary
    whenever H_d of the sub-complex is non-trivial.
    """
    base = generate_instance(family, params, seed, "boundary_only")
    d = base.d
    rng = np.random.Generator(np.random.PCG64(seed))
    upper = base.complex.simplices_of_dim(d + 1)
    most = min(max_upper, len(upper))
    kept = rng.choice(len(upper), size=int(rng.integers(max(1, most // 2), most + 1)), replace=False)
    lower = base.complex.simplices_of_dim(d)
    loose = [s for s, keep in zip(lower, rng.random(len(lower)) < 0.5) if keep]
    complex_ = reweight(closure([upper[i] for i in sorted(kept)] + loose), seed)
    mode = "homology_rep" if homology_rank(complex_, d) > 0 else "boundary_only"
    meta = {"generator": f"sub{family}", "params": params, "seed": seed}
    return Instance(complex_, build_input_cycle(complex_, d, seed, mode), d, meta)


def make_subcomplex_instances(count):
    return [random_subcomplex_instance(*subcomplex_bases[seed % len(subcomplex_bases)], seed)
            for seed in range(count)]
