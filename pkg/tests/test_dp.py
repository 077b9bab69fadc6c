"""Tests for the two tree decomposition dynamic programs and witness reconstruction.
"""
from itertools import combinations

import pytest

from app.controllers.complex_controller import boundary, closure, cost, is_cycle, suspend_cycle, suspension
from app.controllers.dp_controller import EMPTY_KEY, DPContext, conn_introduce, conn_join, finalize_unprocessed, \
    hasse_forget, hasse_introduce, hasse_join, prepare_decomposition, run_conn, run_hasse, solve, solve_conn, \
    solve_hasse
from app.controllers.graph_controller import connectivity_graph, hasse_level
from app.controllers.instance_controller import annulus_circles, circle_chain, cylinder_boundary, \
    gen_annulus, gen_cylinder, gen_grid, gen_torus, generate_instance, torus_meridian
from app.controllers.oracle_controller import brute_force_min, homologous
from app.controllers.solve_controller import costs_agree
from app.controllers.treewidth_controller import best_td, make_nice, suspend_td
from app.errors import InvalidDecompositionError, NotACycleError, ResourceLimitExceeded
from app.models.decomposition import NodeKind
from app.models.graph import GraphKind
from app.models.simplex import Chain, Simplex, SimplicialComplex
from app.models.solution import DPTable
from tests.conftest import make_subcomplex_instances
from tests.data_prueba import named_optima, small_families, vr_families


def named_cycle(family, params):
    if family == "annulus":
        return annulus_circles(*params)[1]
    if family == "cylinder":
        return cylinder_boundary(*params)
    return torus_meridian(params[0])


BUILDERS = {"annulus": gen_annulus, "cylinder": gen_cylinder, "torus": gen_torus}


def restricted_optima(run, node_id, algorithm):
    """Exhaustive restricted subproblem at one node: min cost(U on forgotten d-simplices)
    keyed by (W on the bag, U on the bag scope), over every W inside the processed region."""
    context, ntd = run.context, run.ntd
    below, stack = set(), [node_id]
    while stack:
        current = ntd[stack.pop()]
        below |= current.bag
        stack.extend(current.children)
    bag = ntd[node_id].bag
    processed_upper = sorted(s for s in below if s in context.q_bit)
    if algorithm == "conn":
        scope = context.faces_mask(bag)
        processed_lower = context.faces_mask(below)
    else:
        scope = context.lower_mask(bag)
        processed_lower = context.lower_mask(below)
    forgotten = processed_lower & ~scope

    optima = {}
    for size in range(len(processed_upper) + 1):
        for chosen in combinations(processed_upper, size):
            w_mask = context.upper_mask(chosen)
            u_mask = context.cycle_mask ^ context.boundary_of(w_mask)
            key = (w_mask & context.upper_mask(bag), u_mask & scope)
            value = context.mask_cost(u_mask & forgotten)
            if key not in optima or value < optima[key]:
                optima[key] = value
    return optima


@pytest.mark.parametrize("run", [run_conn, run_hasse])
def test_every_table_matches_exhaustive_search(run, triangle_fan):
    """Each stored cost is the exhaustive optimum of its restricted subproblem."""
    for cycle in (Chain(1, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
                  Chain(1, [(0, 1), (1, 2), (0, 2)]),
                  Chain(1)):
        result = run(triangle_fan, cycle, 1)
        for node_id in result.ntd.postorder():
            table = result.tables[node_id]
            expected = restricted_optima(result, node_id, result.stats.algorithm)
            assert {key: entry[0] for key, entry in table.items()} == expected


@pytest.mark.parametrize("run", [run_conn, run_hasse])
def test_tables_on_grid_patch(run):
    grid = gen_grid(3, 3)
    cycle = boundary(Chain(2, [(0, 1, 4), (4, 5, 8)]))
    result = run(grid, cycle, 1)
    for node_id in result.ntd.postorder():
        expected = restricted_optima(result, node_id, result.stats.algorithm)
        assert {key: entry[0] for key, entry in result.tables[node_id].items()} == expected


@pytest.mark.parametrize("solver", [solve_conn, solve_hasse])
def test_empty_cycle_costs_zero(solver, filled_square):
    solution = solver(filled_square, Chain(1), 1)
    assert solution.cost == 0.0
    assert not solution.cycle


@pytest.mark.parametrize("solver", [solve_conn, solve_hasse])
def test_boundary_cycle_costs_zero(solver, filled_square, square_loop):
    solution = solver(filled_square, square_loop, 1)
    assert solution.cost == 0.0
    assert solution.chain == Chain(2, [(0, 1, 2), (0, 2, 3)])


@pytest.mark.parametrize("solver", [solve_conn, solve_hasse])
def test_random_boundaries_on_grid_cost_zero(solver):
    for seed in range(5):
        instance = generate_instance("grid", [4, 4], seed, "boundary_only")
        assert solver(instance.complex, instance.cycle, 1).cost == 0.0


@pytest.mark.parametrize("family, params", [
    ("grid", [3, 3]), ("cylinder", [3, 2]), ("torus", [3, 3]), ("mspace", [3, 2, 1]), ("annulus", [3, 4]),
    ("kdk", [2, 3]), ("vr_unfiltered", [6]), ("vr_filtered", [8]), ("vr_sector", [3, 2]),
])
@pytest.mark.parametrize("solver", [solve_conn, solve_hasse])
def test_boundaries_cost_zero_in_every_family(solver, family, params):
    instance = generate_instance(family, params, 1, "boundary_only")
    assert solver(instance.complex, instance.cycle, instance.d).cost == 0.0


@pytest.mark.parametrize("solver", [solve_conn, solve_hasse])
def test_circle_without_triangles(solver, hollow_triangle):
    """The only cycle homologous to V is V itself."""
    cycle = circle_chain([0, 1, 2])
    solution = solver(hollow_triangle, cycle, 1)
    assert solution.cost == 3.0
    assert solution.cycle == cycle


@pytest.mark.parametrize("family, params, name, input_cost, optimum", named_optima)
@pytest.mark.parametrize("algorithm", ["conn", "hasse"])
def test_named_optima(algorithm, family, params, name, input_cost, optimum):
    complex_ = BUILDERS[family](*params)
    cycle = named_cycle(family, params)
    assert cost(complex_, cycle) == input_cost
    solution = solve(complex_, cycle, 1, algorithm)
    assert solution.cost == optimum
    assert homologous(complex_, solution.cycle, cycle, 1)


def test_annulus_shrinks_to_inner_circle(annulus):
    inner, outer = annulus_circles(4, 14)
    solution = solve_hasse(annulus, outer, 1)
    assert solution.cost == 4.0
    assert solution.cycle == inner


def test_small_cylinder_against_oracle():
    cylinder = gen_cylinder(3, 3)
    cycle = cylinder_boundary(3, 3, side=1)
    expected = brute_force_min(cylinder, cycle, 1).cost
    assert solve_conn(cylinder, cycle, 1).cost == solve_hasse(cylinder, cycle, 1).cost == expected == 3.0


def test_torus_class_against_oracle():
    instance = generate_instance("torus", [3, 3], 0, "homology_rep")
    expected = brute_force_min(instance.complex, instance.cycle, 1).cost
    assert solve_conn(instance.complex, instance.cycle, 1).cost == expected
    assert solve_hasse(instance.complex, instance.cycle, 1).cost == expected


@pytest.mark.slow
@pytest.mark.parametrize("m, n", [(4, 3), (3, 4)])
def test_larger_torus_classes_against_oracle(m, n):
    instance = generate_instance("torus", [m, n], 0, "homology_rep")
    expected = brute_force_min(instance.complex, instance.cycle, 1).cost
    assert solve_conn(instance.complex, instance.cycle, 1).cost == expected
    assert solve_hasse(instance.complex, instance.cycle, 1).cost == expected


@pytest.mark.slow
def test_solvers_agree_on_a_large_torus():
    instance = generate_instance("torus", [6, 6], 0, "homology_rep")
    assert solve_conn(instance.complex, instance.cycle, 1).cost == solve_hasse(instance.complex, instance.cycle, 1).cost


@pytest.mark.slow
def test_hasse_finishes_a_large_grid():
    instance = generate_instance("grid", [15, 15], 0, "boundary_only")
    assert solve_hasse(instance.complex, instance.cycle, 1, time_limit=60.0).cost == 0.0


def test_exactness_against_brute_force(random_instances):
    for instance in random_instances:
        expected = brute_force_min(instance.complex, instance.cycle, instance.d).cost
        for algorithm in ("conn", "hasse"):
            solution = solve(instance.complex, instance.cycle, instance.d, algorithm)
            assert solution.cost == expected, (instance.name, algorithm)


def test_exactness_on_random_subcomplexes():
    for instance in make_subcomplex_instances(20):
        assert len(instance.complex.simplices_of_dim(instance.d + 1)) <= 12
        expected = brute_force_min(instance.complex, instance.cycle, instance.d).cost
        conn = solve_conn(instance.complex, instance.cycle, instance.d)
        hasse = solve_hasse(instance.complex, instance.cycle, instance.d)
        assert conn.cost == hasse.cost == expected, instance.name


@pytest.mark.slow
def test_exactness_on_two_hundred_instances():
    for instance in make_subcomplex_instances(200):
        expected = brute_force_min(instance.complex, instance.cycle, instance.d).cost
        conn = solve_conn(instance.complex, instance.cycle, instance.d)
        hasse = solve_hasse(instance.complex, instance.cycle, instance.d)
        assert conn.cost == hasse.cost == expected, instance.name


@pytest.mark.parametrize("family, params", vr_families)
def test_exactness_with_float_weights(family, params):
    for seed in range(5):
        instance = generate_instance(family, params, seed)
        expected = brute_force_min(instance.complex, instance.cycle, instance.d).cost
        for solver in (solve_conn, solve_hasse):
            found = solver(instance.complex, instance.cycle, instance.d).cost
            assert costs_agree(found, expected), (instance.name, solver.__name__, found, expected)


def test_witnesses_are_valid(random_instances):
    """U is a cycle homologous to V, equal to V + boundary(W), and its cost is the optimum."""
    for instance in random_instances:
        for solver in (solve_conn, solve_hasse):
            solution = solver(instance.complex, instance.cycle, instance.d)
            assert is_cycle(solution.cycle)
            assert homologous(instance.complex, solution.cycle, instance.cycle, instance.d)
            assert instance.cycle + boundary(solution.chain) == solution.cycle
            assert solution.cost == cost(instance.complex, solution.cycle) == solution.stats.dp_value


def test_scaling_weights_scales_cost(random_instances):
    for instance in random_instances[:10]:
        scaled = SimplicialComplex({s: 4.0 * w for s, w in instance.complex.weights().items()})
        base = solve_hasse(instance.complex, instance.cycle, instance.d)
        bigger = solve_hasse(scaled, instance.cycle, instance.d)
        assert bigger.cost == 4.0 * base.cost


def test_table_size_bounds(random_instances):
    for instance in random_instances[:10]:
        for algorithm, run in (("conn", run_conn), ("hasse", run_hasse)):
            result = run(instance.complex, instance.cycle, instance.d)
            for node_id, table in result.tables.items():
                bag = result.ntd[node_id].bag
                if algorithm == "hasse":
                    assert len(table) <= 2 ** len(bag)
                else:
                    faces = {f for s in bag for f in s.faces()}
                    assert len(table) <= 2 ** (len(bag) + len(faces))


def test_solves_are_deterministic(random_instances):
    for instance in random_instances[:10]:
        for solver in (solve_conn, solve_hasse):
            first = solver(instance.complex, instance.cycle, instance.d)
            second = solver(instance.complex, instance.cycle, instance.d)
            assert first.to_dict() == second.to_dict()


def test_suspension_doubles_the_optimum(random_instances):
    """Suspending K and V doubles the optimal cost, also on lifted decompositions."""
    for instance in random_instances[:6]:
        d, level = instance.d, instance.d + 1
        base = solve_hasse(instance.complex, instance.cycle, d)
        suspended, apexes = suspension(instance.complex)
        lifted = suspend_cycle(instance.cycle, apexes)
        assert solve_hasse(suspended, lifted, d + 1).cost == 2 * base.cost
        for kind, solver, builder in ((GraphKind.HASSE, solve_hasse, hasse_level),
                                      (GraphKind.CONNECTIVITY, solve_conn, connectivity_graph)):
            td = suspend_td(best_td(builder(instance.complex, level)), apexes, kind, level)
            nice = make_nice(td, graph=builder(suspended, level + 1))
            assert solver(suspended, lifted, d + 1, ntd=nice).cost == 2 * base.cost


@pytest.mark.slow
def test_suspension_on_twenty_unweighted_instances():
    for seed in range(20):
        family, params, mode = small_families[seed % len(small_families)]
        instance = generate_instance(family, params, seed, mode)
        level = instance.d + 1
        base = brute_force_min(instance.complex, instance.cycle, instance.d).cost
        suspended, apexes = suspension(instance.complex)
        lifted = suspend_cycle(instance.cycle, apexes)
        for kind, solver, builder in ((GraphKind.HASSE, solve_hasse, hasse_level),
                                      (GraphKind.CONNECTIVITY, solve_conn, connectivity_graph)):
            td = suspend_td(best_td(builder(instance.complex, level)), apexes, kind, level)
            nice = make_nice(td, graph=builder(suspended, level + 1))
            assert solver(suspended, lifted, level, ntd=nice).cost == 2 * base, (instance.name, kind)


def test_root_entry_always_exists(random_instances):
    for instance in random_instances[:5]:
        result = run_hasse(instance.complex, instance.cycle, instance.d)
        assert EMPTY_KEY in result.tables[result.ntd.root]


def test_not_a_cycle_is_rejected(filled_square):
    with pytest.raises(NotACycleError):
        solve_conn(filled_square, Chain(1, [(0, 1)]), 1)


def test_invalid_nice_decomposition_is_rejected(filled_square, triangle_fan):
    other = make_nice(best_td(connectivity_graph(triangle_fan, 2)), graph=connectivity_graph(triangle_fan, 2))
    with pytest.raises(InvalidDecompositionError):
        prepare_decomposition(filled_square, 1, "conn", other)


def test_supplied_decomposition_is_used(filled_square, square_loop):
    graph = connectivity_graph(filled_square, 2)
    nice = make_nice(best_td(graph), graph=graph)
    solution = solve_conn(filled_square, square_loop, 1, ntd=nice)
    assert solution.stats.nodes == len(nice)
    assert solution.stats.width == nice.width()


def test_memory_cap_and_time_limit(triangle_fan):
    cycle = Chain(1, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    with pytest.raises(ResourceLimitExceeded) as error:
        solve_conn(triangle_fan, cycle, 1, mem_cap_entries=2)
    assert error.value.status == "memory_cap"
    with pytest.raises(ResourceLimitExceeded) as error:
        solve_hasse(triangle_fan, cycle, 1, time_limit=1e-12)
    assert error.value.status == "timeout"


def test_conn_introduce_on_leaf():
    complex_ = closure([(0, 1, 2)])
    context = DPContext(complex_, Chain(1), 1)
    sigma = Simplex((0, 1, 2))
    leaf = DPTable(0, {EMPTY_KEY: (0.0, None)})
    table = conn_introduce(leaf, sigma, context, 0)
    assert table.cost(EMPTY_KEY) == 0.0
    assert table.cost((context.q_bit[sigma], context.boundary_mask[sigma])) == 0.0
    assert len(table) == 2


def test_conn_join_neutral_child_and_symmetry(filled_square, square_loop):
    context = DPContext(filled_square, square_loop, 1)
    bag = [Simplex((0, 1, 2))]
    scope = context.faces_mask(bag)
    q = context.upper_mask(bag)
    left = DPTable(1, {(q, 0): (2.0, None), (0, scope & context.cycle_mask): (1.0, None)})
    neutral = DPTable(2, {(q, (context.boundary_of(q) ^ context.cycle_mask) & scope): (0.0, None),
                          (0, context.cycle_mask & scope): (0.0, None)})
    joined = conn_join(left, neutral, context, scope)
    assert {k: v[0] for k, v in joined.items()} == {k: v[0] for k, v in left.items()}
    swapped = conn_join(neutral, left, context, scope)
    assert {k: v[0] for k, v in swapped.items()} == {k: v[0] for k, v in joined.items()}


def test_hasse_join_symmetry(filled_square, square_loop):
    context = DPContext(filled_square, square_loop, 1)
    bag = [Simplex((0, 1, 2)), Simplex((0, 1)), Simplex((1, 2))]
    scope = context.lower_mask(bag)
    q = context.upper_mask(bag)
    left = DPTable(1, {(q, context.p_bit[Simplex((0, 1))]): (1.0, None), (0, 0): (3.0, None)})
    right = DPTable(2, {(q, 0): (0.5, None), (0, scope): (0.0, None)})
    first = hasse_join(left, right, context, scope)
    second = hasse_join(right, left, context, scope)
    assert {k: v[0] for k, v in first.items()} == {k: v[0] for k, v in second.items()}


def test_hasse_introduce_cycle_simplex():
    complex_ = closure([(0, 1, 2)])
    cycle = boundary(Chain(2, [(0, 1, 2)]))
    context = DPContext(complex_, cycle, 1)
    rho = Simplex((0, 1))
    leaf = DPTable(0, {EMPTY_KEY: (0.0, None)})
    table = hasse_introduce(leaf, rho, context, context.p_bit[rho])
    assert (0, context.p_bit[rho]) in table
    assert EMPTY_KEY not in table


def test_hasse_forget_pays_weight():
    complex_ = closure([(0, 1, 2)])
    context = DPContext(complex_, Chain(1), 1)
    rho = Simplex((0, 1))
    child = DPTable(0, {(0, 0): (5.0, None), (0, context.p_bit[rho]): (3.0, None)})
    table = hasse_forget(child, rho, context)
    assert {k: v[0] for k, v in table.items()} == {(0, 0): 4.0}


def test_finalize_adds_cofaceless_cycle_simplices():
    complex_ = SimplicialComplex({(0,): 1.0, (1,): 1.0, (2,): 1.0,
                                  (0, 1): 3.0, (1, 2): 1.0, (0, 2): 1.0})
    cycle = circle_chain([0, 1, 2])
    assert finalize_unprocessed(complex_, cycle, 1, 0.0) == 5.0
    filled = closure([(0, 1, 2)])
    assert finalize_unprocessed(filled, boundary(Chain(2, [(0, 1, 2)])), 1, 2.0) == 2.0


def test_nice_decomposition_kinds(random_instances):
    instance = random_instances[0]
    nice = prepare_decomposition(instance.complex, instance.d, "hasse")
    assert not nice[nice.root].bag
    assert all(node.kind in NodeKind for node in nice.nodes.values())
