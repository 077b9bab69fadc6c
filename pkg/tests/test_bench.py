"""Tests for the benchmark harness and its CSV output.
"""
import asyncio
from unittest.mock import patch

import pandas as pd
import pytest

from app.controllers import bench_controller
from app.controllers.bench_controller import check_agreement, expand_suite, hasse_speed_share, load_bench_csv, \
    prepare_instance, records_frame, run_bench, run_cell, run_suite, write_bench_csv
from app.models.bench_record import CSV_COLUMNS, STATUSES, BenchRecord
from app.storage.json_files import dumps, suite_from_dict
from tests.data_prueba import bench_columns, bench_suite


@pytest.fixture
def suite():
    return suite_from_dict(bench_suite)


@pytest.fixture
def prepared():
    return prepare_instance("cylinder", [3, 3], 0, "homology_rep")


def record(instance, cost, status="ok", algo="conn"):
    return BenchRecord(instance=instance, generator="grid", params="3x3", seed=0, n_d=16, n_d1=8, tw_conn=2,
                       tw_hasse=3, bags=40, algo=algo, time_ms=1.0, entries_peak=8, cost=cost, status=status)


def test_columns():
    assert CSV_COLUMNS == bench_columns
    assert list(record("a", 1.0).to_dict()) == bench_columns
    assert STATUSES == ("ok", "timeout", "memory_cap", "error")


def test_expand_suite(suite):
    assert expand_suite(suite) == [("grid", [3, 3], 0), ("grid", [3, 4], 0), ("grid", [4, 4], 0)]


def test_prepare_instance(prepared):
    row = prepared.base_row()
    assert row["instance"] == "cylinder-3x3-s0"
    assert row["params"] == "3x3"
    assert (row["n_d"], row["n_d1"]) == (21, 12)
    assert row["tw_conn"] >= 1
    assert set(prepared.nice) == {"conn", "hasse"}


def test_run_cells_agree(prepared, suite):
    rows = [run_cell(prepared, algorithm, suite) for algorithm in ("conn", "hasse", "brute")]
    assert [row.status for row in rows] == ["ok", "ok", "ok"]
    assert rows[0].cost == rows[1].cost == rows[2].cost == 3.0
    assert rows[2].bags is None
    assert rows[2].entries_peak is None
    assert rows[0].bags == len(prepared.nice["conn"])
    assert not check_agreement(rows)


@pytest.mark.parametrize("limits, algorithm", [
    ({"mem_cap_entries": 1}, "conn"),
    ({"mem_cap_entries": 1}, "hasse"),
    ({"brute_cap": 1}, "brute"),
])
def test_run_cell_memory_cap(prepared, suite, limits, algorithm):
    row = run_cell(prepared, algorithm, dict(suite, **limits))
    assert row.status == "memory_cap"
    assert row.cost is None


def test_run_cell_timeout(prepared, suite):
    row = run_cell(prepared, "hasse", dict(suite, time_limit=1e-12))
    assert row.status == "timeout"
    assert row.cost is None


def test_run_cell_brute_timeout(suite):
    torus = prepare_instance("torus", [4, 3], 0, "homology_rep")
    assert len(torus.instance.complex.simplices_of_dim(2)) == 24
    row = run_cell(torus, "brute", dict(suite, time_limit=1e-9))
    assert row.status == "timeout"
    assert row.cost is None
    assert row.time_ms > 0.0


@patch('app.controllers.bench_controller.solve')
def test_run_cell_error(mock_solve, prepared, suite):
    mock_solve.side_effect = RuntimeError("boom")
    row = run_cell(prepared, "conn", suite)
    assert row.status == "error"
    assert row.cost is None
    assert row.instance == "cylinder-3x3-s0"


def test_check_agreement():
    rows = [record("a", 1.0), record("a", 1.0, algo="hasse"), record("b", 2.0), record("b", 2.5, algo="hasse"),
            record("c", 4.0), record("c", None, status="timeout", algo="hasse")]
    assert check_agreement(rows) == ["b"]


def test_run_suite_order_and_costs(suite):
    records = asyncio.run(run_suite(suite))
    assert [(r.instance, r.algo) for r in records] == [
        (name, algo) for name in ("grid-3x3-s0", "grid-3x4-s0", "grid-4x4-s0") for algo in ("conn", "hasse")]
    assert all(r.status == "ok" for r in records)
    assert all(r.cost == 0.0 for r in records)


def test_run_suite_generation_failure():
    suite = suite_from_dict({"families": [{"family": "grid", "params": [[1, 1], [3, 3]]}],
                             "algorithms": ["conn", "hasse", "brute"]})
    records = asyncio.run(run_suite(suite, workers=1))
    assert [r.status for r in records] == ["error"] * 3 + ["ok"] * 3
    assert records[0].instance == "grid-1x1-s0"


def test_csv_reload(tmp_path, prepared, suite):
    rows = [run_cell(prepared, "conn", suite), run_cell(prepared, "brute", suite),
            run_cell(prepared, "hasse", dict(suite, mem_cap_entries=1))]
    path = tmp_path / "bench.csv"
    written = write_bench_csv(rows, path)
    loaded = load_bench_csv(path)
    assert list(loaded.columns) == bench_columns
    assert str(loaded["tw_conn"].dtype) == "Int64"
    assert loaded["params"].tolist() == ["3x3"] * 3
    assert pd.isna(loaded.loc[1, "bags"])
    assert pd.isna(loaded.loc[2, "cost"])
    assert loaded["status"].tolist() == ["ok", "ok", "memory_cap"]
    assert loaded["bags"].equals(written["bags"])


def test_records_frame_dtypes():
    frame = records_frame([record("a", 1.0), record("a", None, status="error", algo="brute")])
    assert str(frame["seed"].dtype) == "Int64"
    assert str(frame["entries_peak"].dtype) == "Int64"
    assert frame["cost"].isna().tolist() == [False, True]


def test_run_bench(tmp_path):
    suite_path = tmp_path / "suite.json"
    suite_path.write_text(dumps(bench_suite), encoding="utf-8")
    out = tmp_path / "out.csv"
    frame = run_bench(suite_path, out, workers=3)
    assert len(frame) == 6
    assert len(load_bench_csv(out)) == 6


def test_run_suite_runs_every_cell_once(mocker, suite):
    spy = mocker.spy(bench_controller, "run_cell")
    asyncio.run(run_suite(dict(suite, algorithms=["hasse"]), workers=2))
    assert spy.call_count == 3
    assert sorted(call.args[0].instance.name for call in spy.call_args_list) == [
        "grid-3x3-s0", "grid-3x4-s0", "grid-4x4-s0"]


def test_hasse_speed_share():
    frame = pd.DataFrame({
        "instance": ["a", "a", "b", "b", "c", "c", "d", "d", "d"],
        "algo": ["conn", "hasse", "conn", "hasse", "conn", "hasse", "conn", "hasse", "brute"],
        "time_ms": [700.0, 700.0, 200.0, 900.0, 100.0, 50.0, 5000.0, None, 1.0],
        "status": ["ok", "ok", "ok", "ok", "ok", "ok", "ok", "timeout", "ok"]})
    assert hasse_speed_share(frame) == (0.5, 2)
    assert hasse_speed_share(frame, min_total_ms=100.0) == (2 / 3, 3)
    assert hasse_speed_share(frame, min_total_ms=1e6) == (None, 0)
    assert hasse_speed_share(frame[frame["algo"] != "hasse"]) == (None, 0)


@pytest.mark.slow
def test_hasse_is_faster_on_long_runs():
    suite = suite_from_dict({"families": [{"family": "grid", "params": [[10, 10], [12, 12]], "seeds": [0, 1]},
                                          {"family": "torus", "params": [[6, 6], [7, 7]], "seeds": [0]},
                                          {"family": "cylinder", "params": [[8, 8]], "seeds": [0]}],
                             "algorithms": ["conn", "hasse"], "time_limit": 120, "workers": 1})
    share, counted = hasse_speed_share(records_frame(asyncio.run(run_suite(suite))))
    if share is None:
        pytest.skip("no instance took longer than a second")
    assert share >= 0.9, f"hasse was at least as fast on {share:.0%} of {counted} instances"
