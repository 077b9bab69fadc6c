""" Module for solver, benchmark and file format configuration"""

import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """
    Configuration class for the solvers, the CLI and the Flask application.

    Attributes:
        BRUTE_FORCE_CAP (int): Largest number of (d+1)-simplices the brute force oracle enumerates.
        TIME_LIMIT (float | None): Seconds a single solve may take, None for no limit.
        MEM_CAP_ENTRIES (int | None): Total DP table entries a single solve may store, None for no limit.
        BENCH_WORKERS (int): Parallel worker slots of the benchmark runner.
        LOG_LEVEL (str): Level name for every package logger.
        FORMAT_VERSION (int): Version written into instance metadata.
    """
    BRUTE_FORCE_CAP = int(os.getenv("HL_BRUTE_FORCE_CAP", "24"))

    # 0 disables the limit
    TIME_LIMIT = float(os.getenv("HL_TIME_LIMIT", "0")) or None
    MEM_CAP_ENTRIES = int(os.getenv("HL_MEM_CAP_ENTRIES", "0")) or None

    BENCH_WORKERS = int(os.getenv("HL_BENCH_WORKERS", "2"))
    LOG_LEVEL = os.getenv("HL_LOG_LEVEL", "INFO").upper()
    FORMAT_VERSION = int(os.getenv("HL_FORMAT_VERSION", "1"))

    JSON_SORT_KEYS = False
