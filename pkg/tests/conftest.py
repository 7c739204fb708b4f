import random
from pathlib import Path

import pytest

from profbench import TimingMatrix, parse_timings

DATA_DIR = Path(__file__).parent / "data"

TABLE1_CSV = DATA_DIR / "table1.csv"


@pytest.fixture(scope="session")
def table1() -> TimingMatrix:
    """The 5-problem, 3-solver artificial benchmark table."""
    return parse_timings(TABLE1_CSV.read_bytes(), "csv")


@pytest.fixture(scope="session")
def table1_csv_path() -> Path:
    return TABLE1_CSV


def random_matrix(
    rng: random.Random,
    n_problems: int | None = None,
    n_solvers: int | None = None,
    fail_rate: float = 0.1,
    lo: float = 0.5,
    hi: float = 10.0,
) -> TimingMatrix:
    """Random timing table used across the randomized suites."""
    n_p = n_problems if n_problems is not None else rng.randint(5, 50)
    n_s = n_solvers if n_solvers is not None else rng.randint(2, 8)
    cells = tuple(
        tuple(
            None if rng.random() < fail_rate else rng.uniform(lo, hi)
            for _ in range(n_s)
        )
        for _ in range(n_p)
    )
    return TimingMatrix(
        problems=tuple(f"p{i}" for i in range(1, n_p + 1)),
        solvers=tuple(f"s{j}" for j in range(1, n_s + 1)),
        cells=cells,
    )


def replace_row(
    m: TimingMatrix, row: int, rng: random.Random, fail_rate: float = 0.1
) -> TimingMatrix:
    """Copy of ``m`` with fresh random times on one problem row."""
    new_row = tuple(
        None if rng.random() < fail_rate else rng.uniform(0.5, 10.0)
        for _ in range(m.n_solvers)
    )
    cells = tuple(
        new_row if i == row else r for i, r in enumerate(m.cells)
    )
    return TimingMatrix(m.problems, m.solvers, cells)
