"""
Command line front end.
Usage: python -m app.cli <verb> ...
Verbs:
    generate family params... [--seed N ...] [--mode MODE] [--out DIR]
    solve instance.json [--algo conn|hasse|brute|both] [--td-file FILE.td]
          [--time-limit S] [--mem-cap-entries N] [--brute-cap N] [--witness OUT.json]
    verify instance.json witness.json
    bench suite.json [--out results.csv] [--workers N]
Exit codes: 0 ok, 1 usage or bad input, 2 verification or agreement failure,
3 resource limit.
"""
import argparse
import sys

from app.controllers.bench_controller import hasse_speed_share, run_bench
from app.controllers.instance_controller import FAMILIES, MODES
from app.controllers.solve_controller import SOLVE_ALGOS, generate_instance_files, instance_summary, \
    solve_instance, verify_witness
from app.errors import HomologyError, OracleCapExceeded, ResourceLimitExceeded, VerificationError
from app.logger import setup_logger
from app.storage.json_files import load_instance, load_witness, save_witness

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_RESOURCE = 3


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def number(text):
    """Parse a generator parameter: int when possible, float otherwise."""
    try:
        return int(text)
    except ValueError:
        try:
            return float(text)
        except ValueError as error:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from error


def cmd_generate(args):
    written = generate_instance_files(args.family, args.params, args.seed, args.out, args.mode)
    for path, instance in written:
        summary = instance_summary(instance)
        counts = ", ".join(f"{count} {dim}-simplices" for dim, count in summary['simplices'].items())
        print(f"{path}: {counts}; |V| = {summary['cycle_size']}, cost(V) = {summary['cycle_cost']}")
    return EXIT_OK


def cmd_solve(args):
    instance = load_instance(args.instance)
    try:
        solutions = solve_instance(instance, args.algo, args.td_file, args.time_limit,
                                   args.mem_cap_entries, args.brute_cap)
    except ResourceLimitExceeded as error:
        print(f"{instance.name}: status {error.status} ({error})")
        return EXIT_RESOURCE
    except OracleCapExceeded as error:
        print(f"{instance.name}: status memory_cap ({error})")
        return EXIT_RESOURCE

    for name, solution in solutions.items():
        stats = solution.stats
        print(f"{instance.name} {name}: cost {solution.cost!r}, |U| = {len(solution.cycle)}, "
              f"width {stats.width}, {stats.time_ms:.1f} ms, peak {stats.entries_peak} entries")
    if args.algo == "both":
        print(f"{instance.name}: conn and hasse agree")
    if args.witness:
        save_witness(args.witness, next(iter(solutions.values())))
        print(f"witness written to {args.witness}")
    return EXIT_OK


def cmd_verify(args):
    instance = load_instance(args.instance)
    witness = load_witness(args.witness)
    try:
        value = verify_witness(instance, witness)
    except VerificationError as error:
        print(f"fail: {error.check} ({error})")
        return EXIT_VERIFICATION
    print(f"ok: cost {value!r}")
    return EXIT_OK


def cmd_bench(args):
    frame = run_bench(args.suite, args.out, args.workers)
    counts = frame["status"].value_counts().to_dict()
    print(f"{len(frame)} rows written to {args.out}: "
          + ", ".join(f"{count} {status}" for status, count in sorted(counts.items())))
    share, counted = hasse_speed_share(frame)
    if share is not None:
        print(f"hasse at least as fast as conn on {share:.0%} of {counted} instances over 1 s")
    return EXIT_OK


def build_parser():
    parser = CommandParser(prog="hl", description="Minimum homologous cycles over Z2 on bounded treewidth")
    verbs = parser.add_subparsers(dest="verb", required=True)

    generate = verbs.add_parser("generate", help="Write generated instance files")
    generate.add_argument("family", choices=sorted(FAMILIES), help="Instance family")
    generate.add_argument("params", nargs="+", type=number, help="Family parameters")
    generate.add_argument("--seed", nargs="+", type=int, default=[0], help="One instance per seed")
    generate.add_argument("--mode", choices=MODES, default=None, help="How the input cycle is built")
    generate.add_argument("--out", default="instances", help="Output directory")
    generate.set_defaults(handler=cmd_generate)

    solve = verbs.add_parser("solve", help="Solve an instance file")
    solve.add_argument("instance", help="Instance JSON file")
    solve.add_argument("--algo", choices=SOLVE_ALGOS, default="both", help="Algorithm to run")
    solve.add_argument("--td-file", default=None, help="PACE .td decomposition with its .map.json sidecar")
    solve.add_argument("--time-limit", type=float, default=None, help="Seconds per solve, 0 for none")
    solve.add_argument("--mem-cap-entries", type=int, default=None, help="Total DP entries per solve, 0 for none")
    solve.add_argument("--brute-cap", type=int, default=None, help="Largest |K_{d+1}| for brute force")
    solve.add_argument("--witness", "--out", dest="witness", default=None, help="Write the witness JSON here")
    solve.set_defaults(handler=cmd_solve)

    verify = verbs.add_parser("verify", help="Check a witness against its instance")
    verify.add_argument("instance", help="Instance JSON file")
    verify.add_argument("witness", help="Witness JSON file")
    verify.set_defaults(handler=cmd_verify)

    bench = verbs.add_parser("bench", help="Run a benchmark suite")
    bench.add_argument("suite", help="Suite JSON file")
    bench.add_argument("--out", default="bench.csv", help="CSV output path")
    bench.add_argument("--workers", type=int, default=None, help="Parallel worker slots")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv=None):
    """Parse arguments, run the verb and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except VerificationError as error:
        print(f"fail: {error.check} ({error})", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ResourceLimitExceeded, OracleCapExceeded) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_RESOURCE
    except HomologyError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
