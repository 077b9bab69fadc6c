"""
Benchmark harness: expands a suite into (instance, algorithm) cells, runs the cells
in parallel worker slots and writes one BenchRecord row per cell with pandas.
"""
import asyncio
import time
from dataclasses import dataclass

import pandas as pd

from app.config import Config
from app.controllers.dp_controller import solve
from app.controllers.graph_controller import connectivity_graph, hasse_level
from app.controllers.instance_controller import generate_instance
from app.controllers.oracle_controller import brute_force_min
from app.controllers.solve_controller import costs_agree
from app.controllers.treewidth_controller import best_td, make_nice
from app.errors import OracleCapExceeded, ResourceLimitExceeded
from app.logger import setup_logger
from app.models.bench_record import CSV_COLUMNS, BenchRecord
from app.storage.json_files import load_suite

logger = setup_logger(__name__)

INTEGER_COLUMNS = ["seed", "n_d", "n_d1", "tw_conn", "tw_hasse", "bags", "entries_peak"]
TEXT_COLUMNS = ["instance", "generator", "params", "algo", "status"]


@dataclass
class PreparedInstance:
    """An instance with the decompositions every DP cell on it shares."""
    instance: object
    nice: dict
    tw_conn: int
    tw_hasse: int

    def base_row(self):
        complex_, d = self.instance.complex, self.instance.d
        meta = self.instance.meta
        return {
            'instance': self.instance.name,
            'generator': meta.get('generator', 'custom'),
            'params': "x".join(str(p) for p in meta.get('params', [])),
            'seed': meta.get('seed', 0),
            'n_d': len(complex_.simplices_of_dim(d)),
            'n_d1': len(complex_.simplices_of_dim(d + 1)),
            'tw_conn': self.tw_conn,
            'tw_hasse': self.tw_hasse
        }


def expand_suite(suite):
    """(family, params, seed) triples in configuration order."""
    return [(entry["family"], list(params), seed)
            for entry in suite["families"]
            for params in entry["params"]
            for seed in entry["seeds"]]


def prepare_instance(family, params, seed, mode=None):
    """Generate an instance and build the heuristic nice decompositions of both graphs."""
    instance = generate_instance(family, params, seed, mode)
    level = instance.d + 1
    nice, widths = {}, {}
    for algorithm, graph in (("conn", connectivity_graph(instance.complex, level)),
                             ("hasse", hasse_level(instance.complex, level))):
        td = best_td(graph)
        widths[algorithm] = td.width()
        nice[algorithm] = make_nice(td, graph=graph)
    return PreparedInstance(instance, nice, widths["conn"], widths["hasse"])


def run_cell(prepared, algorithm, suite):
    """Solve one cell; failures become rows, never exceptions."""
    instance = prepared.instance
    started = time.perf_counter()
    row = dict(prepared.base_row(), algo=algorithm, bags=None, entries_peak=None, cost=None)
    try:
        if algorithm == "brute":
            solution = brute_force_min(instance.complex, instance.cycle, instance.d, suite.get("brute_cap"),
                                       suite.get("time_limit"))
        else:
            solution = solve(instance.complex, instance.cycle, instance.d, algorithm, prepared.nice[algorithm],
                             suite.get("time_limit"), suite.get("mem_cap_entries"))
            row.update(bags=solution.stats.nodes, entries_peak=solution.stats.entries_peak)
        row.update(time_ms=solution.stats.time_ms, cost=solution.cost, status="ok")
    except ResourceLimitExceeded as error:
        row.update(time_ms=(time.perf_counter() - started) * 1000.0, status=error.status)
    except OracleCapExceeded:
        row.update(time_ms=0.0, status="memory_cap")
    except Exception:  # pylint: disable=broad-exception-caught
        logger.exception("%s %s failed", instance.name, algorithm)
        row.update(time_ms=(time.perf_counter() - started) * 1000.0, status="error")
    return BenchRecord(**row)


def _error_records(family, params, seed, algorithms):
    name = f"{family}-{'x'.join(str(p) for p in params)}-s{seed}"
    return [BenchRecord(instance=name, generator=family, params="x".join(str(p) for p in params), seed=seed,
                        n_d=None, n_d1=None, tw_conn=None, tw_hasse=None, bags=None, algo=algorithm,
                        time_ms=0.0, entries_peak=None, cost=None, status="error")
            for algorithm in algorithms]


def check_agreement(records):
    """Instance names whose ok rows report different costs."""
    costs = {}
    for record in records:
        if record.status == "ok":
            costs.setdefault(record.instance, []).append(record.cost)
    return sorted(name for name, values in costs.items()
                  if any(not costs_agree(values[0], value) for value in values[1:]))


async def run_suite(suite, workers=None):
    """Run every (instance, algorithm) cell of a loaded suite.

    Instances are generated in order before any cell starts. Cells then run through
    ``workers`` thread slots and append their rows under a lock; the returned list is
    in (instance, algorithm) configuration order.
    """
    workers = workers or suite.get("workers") or Config.BENCH_WORKERS
    algorithms = suite["algorithms"]
    semaphore = asyncio.Semaphore(workers)
    lock = asyncio.Lock()
    rows = {}

    async def run_one(index, prepared, algorithm):
        async with semaphore:
            record = await asyncio.to_thread(run_cell, prepared, algorithm, suite)
        async with lock:
            rows[index] = record
            logger.info("%s %s: %s %s", record.instance, record.algo, record.status,
                        "" if record.cost is None else record.cost)

    tasks = []
    index = 0
    for family, params, seed in expand_suite(suite):
        try:
            prepared = prepare_instance(family, params, seed, suite.get("mode"))
        except Exception:  # pylint: disable=broad-exception-caught
            logger.exception("could not generate %s %s seed %d", family, params, seed)
            for record in _error_records(family, params, seed, algorithms):
                rows[index] = record
                index += 1
            continue
        for algorithm in algorithms:
            tasks.append(run_one(index, prepared, algorithm))
            index += 1
    await asyncio.gather(*tasks)

    records = [rows[index] for index in sorted(rows)]
    for name in check_agreement(records):
        logger.error("%s: algorithms disagree on the optimal cost", name)
    return records


def records_frame(records):
    """Rows as a DataFrame; integer columns use the nullable Int64 dtype."""
    frame = pd.DataFrame([record.to_dict() for record in records], columns=CSV_COLUMNS)
    return frame.astype({column: "Int64" for column in INTEGER_COLUMNS})


def write_bench_csv(records, path):
    frame = records_frame(records)
    frame.to_csv(path, index=False)
    return frame


def load_bench_csv(path):
    """Reload a benchmark CSV; text columns stay strings, empty cells become NaN."""
    dtypes = {column: "Int64" for column in INTEGER_COLUMNS}
    dtypes.update({column: str for column in TEXT_COLUMNS})
    return pd.read_csv(path, dtype=dtypes)


def hasse_speed_share(frame, min_total_ms=1000.0):
    """Share of instances on which hasse ran at least as fast as conn.

    Only instances where both DP rows are ok and their times add up to more than
    min_total_ms count.

    Returns:
        tuple: (share or None when nothing counts, number of instances counted).
    """
    ok = frame[(frame["status"] == "ok") & frame["algo"].isin(["conn", "hasse"])]
    times = ok.pivot(index="instance", columns="algo", values="time_ms")
    if not {"conn", "hasse"} <= set(times.columns):
        return None, 0
    times = times.dropna(subset=["conn", "hasse"])
    times = times[times["conn"] + times["hasse"] > min_total_ms]
    if times.empty:
        return None, 0
    return float((times["hasse"] <= times["conn"]).mean()), len(times)


def run_bench(suite_path, out_csv, workers=None):
    """Load a suite file, run it and write the CSV.

    Returns:
        pandas.DataFrame: The rows as written.
    """
    suite = load_suite(suite_path)
    records = asyncio.run(run_suite(suite, workers))
    frame = write_bench_csv(records, out_csv)
    logger.info("bench: %d rows written to %s", len(frame), out_csv)
    share, counted = hasse_speed_share(frame)
    if share is not None:
        logger.info("bench: hasse at least as fast as conn on %.0f%% of %d instances over 1 s", 100 * share, counted)
    return frame
