"""This module defines the BenchRecord model, one row of the benchmark CSV.
"""
from dataclasses import asdict, dataclass

CSV_COLUMNS = ["instance", "generator", "params", "seed", "n_d", "n_d1", "tw_conn", "tw_hasse",
               "bags", "algo", "time_ms", "entries_peak", "cost", "status"]
STATUSES = ("ok", "timeout", "memory_cap", "error")


@dataclass
class BenchRecord:
    """Model class representing one (instance, algorithm) benchmark cell.

    Attributes:
        instance (str): Instance name.
        generator (str): Family the instance was generated from.
        params (str): Family parameters joined with "x".
        seed (int): Generation seed.
        n_d (int): |K_d|.
        n_d1 (int): |K_{d+1}|.
        tw_conn (int): Width of the decomposition of Con_{d+1}.
        tw_hasse (int): Width of the decomposition of Hasse_{d+1}.
        bags (int | None): Nice decomposition nodes used by the algorithm, None for brute.
        algo (str): "conn", "hasse" or "brute".
        time_ms (float): Wall time of the cell.
        entries_peak (int | None): Largest DP table, None for brute.
        cost (float | None): Optimal cost; present exactly when status is "ok".
        status (str): One of STATUSES.
    """
    instance: str
    generator: str
    params: str
    seed: int
    n_d: int
    n_d1: int
    tw_conn: int
    tw_hasse: int
    bags: int
    algo: str
    time_ms: float
    entries_peak: int
    cost: float
    status: str

    def to_dict(self):
        """Return the record as an ordered CSV row."""
        row = asdict(self)
        return {column: row[column] for column in CSV_COLUMNS}
