"""
This module contains the verbs shared by the command line and the HTTP surface:
writing generated instances, solving an instance with one or more algorithms, and
verifying a witness against its instance.
"""
import math
import os

from app.controllers.complex_controller import boundary, chain_in_complex, cost, is_cycle
from app.controllers.dp_controller import solve
from app.controllers.graph_controller import connectivity_graph, hasse_level
from app.controllers.instance_controller import FAMILIES, generate_instance
from app.controllers.oracle_controller import brute_force_min, homologous
from app.controllers.treewidth_controller import hasse_td_from_conn_td, make_nice
from app.errors import InvalidComplexError, InvalidParameterError, VerificationError
from app.logger import setup_logger
from app.models.graph import GraphKind
from app.storage.json_files import instance_from_dict, save_instance, witness_from_dict
from app.storage.pace import read_pace_td

logger = setup_logger(__name__)

SOLVE_ALGOS = ("conn", "hasse", "brute", "both")


def costs_agree(a, b):
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def instance_summary(instance):
    """Simplex counts per dimension and the size of V, as printed after generation."""
    complex_ = instance.complex
    return {
        'instance': instance.name,
        'd': instance.d,
        'simplices': {str(dim): len(complex_.simplices_of_dim(dim)) for dim in range(complex_.dim + 1)},
        'cycle_size': len(instance.cycle),
        'cycle_cost': cost(complex_, instance.cycle)
    }


def generate_instance_files(family, params, seeds, out_dir, mode=None):
    """Generate one instance per seed and write ``<out_dir>/<name>.json``.

    Returns:
        list: (path, Instance) pairs in seed order.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for seed in seeds:
        instance = generate_instance(family, params, seed, mode)
        path = os.path.join(out_dir, f"{instance.name}.json")
        save_instance(path, instance)
        written.append((path, instance))
    return written


def decompositions_from_file(instance, algo, td_path):
    """Nice decompositions per algorithm built from a PACE `.td` file.

    The file decomposes Con_{d+1} for "conn" and "both" and Hasse_{d+1} for
    "hasse"; with "both" the Hasse decomposition is derived from the connectivity one.
    """
    complex_, level = instance.complex, instance.d + 1
    if algo == "hasse":
        td = read_pace_td(td_path, GraphKind.HASSE, level)
        return {"hasse": make_nice(td, graph=hasse_level(complex_, level))}
    if algo not in ("conn", "both"):
        raise InvalidParameterError(f"--td-file cannot be used with algorithm {algo!r}")
    td = read_pace_td(td_path, GraphKind.CONNECTIVITY, level)
    nice = {"conn": make_nice(td, graph=connectivity_graph(complex_, level))}
    if algo == "both":
        derived = hasse_td_from_conn_td(complex_, level, td)
        nice["hasse"] = make_nice(derived, graph=hasse_level(complex_, level))
    return nice


def solve_instance(instance, algo, td_path=None, time_limit=None, mem_cap_entries=None, brute_cap=None):
    """Solve an instance and return ``{algorithm: Solution}`` in run order.

    Parameters:
    - algo: "conn", "hasse", "brute" or "both" (conn then hasse, costs must agree).
    - td_path: optional PACE `.td` file, see decompositions_from_file.
    - time_limit: seconds per solve, brute force included; Config default when None.
    - mem_cap_entries: DP table entry limit, Config default when None.
    - brute_cap: largest |K_{d+1}| for brute force.

    Raises:
        VerificationError: with "both", when the two optima differ.
    """
    if algo not in SOLVE_ALGOS:
        raise InvalidParameterError(f"unknown algorithm {algo!r}, expected one of {SOLVE_ALGOS}")
    nice = decompositions_from_file(instance, algo, td_path) if td_path else {}
    algorithms = ["conn", "hasse"] if algo == "both" else [algo]

    solutions = {}
    for name in algorithms:
        if name == "brute":
            solutions[name] = brute_force_min(instance.complex, instance.cycle, instance.d, brute_cap, time_limit)
        else:
            solutions[name] = solve(instance.complex, instance.cycle, instance.d, name,
                                    nice.get(name), time_limit, mem_cap_entries)

    if algo == "both" and not costs_agree(solutions["conn"].cost, solutions["hasse"].cost):
        logger.error("%s: conn found %r, hasse found %r", instance.name,
                     solutions["conn"].cost, solutions["hasse"].cost)
        raise VerificationError("disagreement", f"conn cost {solutions['conn'].cost!r} != "
                                                f"hasse cost {solutions['hasse'].cost!r}")
    return solutions


def verify_witness(instance, witness):
    """Check a witness Solution against its instance.

    Checks run in order and the first failure raises VerificationError naming it:
    "dimension mismatch", "not in complex", "not a cycle", "not homologous",
    "chain mismatch" (only when the witness lists W), "cost mismatch".

    Returns:
        float: The recomputed cost of U.
    """
    complex_, d, cycle = instance.complex, instance.d, witness.cycle
    if cycle.dim != d:
        raise VerificationError("dimension mismatch", f"witness has dimension {cycle.dim}, instance has {d}")
    try:
        chain_in_complex(complex_, cycle)
        chain_in_complex(complex_, witness.chain)
    except InvalidComplexError as error:
        raise VerificationError("not in complex", str(error)) from error
    if not is_cycle(cycle):
        raise VerificationError("not a cycle", "the witness chain has a non-empty boundary")
    if not homologous(complex_, cycle, instance.cycle, d):
        raise VerificationError("not homologous", "U + V is not a boundary")
    if witness.chain and instance.cycle + boundary(witness.chain) != cycle:
        raise VerificationError("chain mismatch", "U differs from V + boundary(W)")
    value = cost(complex_, cycle)
    if not costs_agree(value, witness.cost):
        raise VerificationError("cost mismatch", f"claimed {witness.cost!r}, recomputed {value!r}")
    logger.info("%s: witness verified, cost %r", instance.name, value)
    return value


def family_catalog():
    """Every generator family with its parameter usage."""
    return [{'family': name, 'arity': arity, 'params': usage}
            for name, (arity, usage) in sorted(FAMILIES.items())]


def generate_payload(family, params, seed=0, mode=None):
    """Generate one instance and return its file representation with a summary."""
    instance = generate_instance(family, params, seed, mode)
    return {'instance': instance.to_dict(), 'summary': instance_summary(instance)}


def solve_payload(instance_data, algo="both", time_limit=None, mem_cap_entries=None, brute_cap=None):
    """Solve an instance given as a dict; one witness with its stats per algorithm."""
    instance = instance_from_dict(instance_data)
    solutions = solve_instance(instance, algo, None, time_limit, mem_cap_entries, brute_cap)
    return {name: dict(solution.to_dict(), stats=solution.stats.to_dict())
            for name, solution in solutions.items()}


def verify_payload(instance_data, witness_data):
    """Verify a witness dict; failures are reported in the result, not raised."""
    instance = instance_from_dict(instance_data)
    witness = witness_from_dict(witness_data)
    try:
        value = verify_witness(instance, witness)
    except VerificationError as error:
        return {'ok': False, 'check': error.check, 'message': str(error)}
    return {'ok': True, 'cost': value}
