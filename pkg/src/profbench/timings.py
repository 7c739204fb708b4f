"""Timing tables: the raw problems-by-solvers matrix of measured durations.

A cell is either a strictly positive finite duration (any consistent unit)
or an explicit failure. Failure is a fact recorded in the data file, never
inferred from magnitude; on disk it is spelled ``fail``, ``nan`` or an
empty cell (case-insensitive).

Supported formats:

* CSV — header ``problem,<solver1>,...,<solverN>``, one row per problem.
  UTF-8, LF or CRLF accepted on input, LF emitted.
* JSON — ``{"problems": [...], "solvers": [...], "times": [[...]]}`` with
  rows ordered by problem and a number or the string ``"fail"`` per cell.

Parsing and writing round-trip bit-exactly: labels, ordering, failure
states and every float survive ``parse_timings(write_timings(m, f), f)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .errors import DuplicateLabel, FormatError, InvalidTime, ShapeError

FAILURE_TOKENS = frozenset({"fail", "nan", ""})

FORMATS = ("csv", "json")


def format_number(x: float) -> str:
    """Shortest decimal string that parses back to exactly ``x``.

    Integer-valued floats are printed without a fractional part
    (``1.0`` -> ``"1"``); everything else uses repr, which Python
    guarantees to round-trip.
    """
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


@dataclass(frozen=True)
class TimingMatrix:
    """Complete problems x solvers table of durations.

    ``cells`` is row-major by problem; ``None`` marks a failure. Labels
    are opaque strings; their order in the table is the canonical index
    order used for deterministic tie-breaking downstream.
    """

    problems: tuple[str, ...]
    solvers: tuple[str, ...]
    cells: tuple[tuple[float | None, ...], ...]

    def __post_init__(self):
        if not self.problems:
            raise ShapeError("timing table needs at least one problem row")
        if not self.solvers:
            raise ShapeError("timing table needs at least one solver column")
        _check_unique(self.problems, "problem")
        _check_unique(self.solvers, "solver")
        if len(self.cells) != len(self.problems):
            raise ShapeError(
                f"{len(self.cells)} cell rows for {len(self.problems)} problems"
            )
        for i, row in enumerate(self.cells):
            if len(row) != len(self.solvers):
                raise ShapeError(
                    f"row {i} ({self.problems[i]!r}) has {len(row)} cells, "
                    f"expected {len(self.solvers)}"
                )
            for j, cell in enumerate(row):
                if cell is None:
                    continue
                if not (isinstance(cell, (int, float)) and math.isfinite(cell) and cell > 0):
                    raise InvalidTime(
                        f"time for problem {self.problems[i]!r}, solver "
                        f"{self.solvers[j]!r} must be finite and > 0, got {cell!r}",
                        row=i,
                        col=j,
                    )

    @property
    def n_problems(self) -> int:
        return len(self.problems)

    @property
    def n_solvers(self) -> int:
        return len(self.solvers)

    def solver_index(self, solver: str) -> int:
        try:
            return self.solvers.index(solver)
        except ValueError:
            raise KeyError(solver) from None

    def time(self, problem_idx: int, solver: str) -> float | None:
        return self.cells[problem_idx][self.solver_index(solver)]

    def column(self, solver: str) -> tuple[float | None, ...]:
        j = self.solver_index(solver)
        return tuple(row[j] for row in self.cells)

    def restrict(self, solvers) -> "TimingMatrix":
        """Sub-table keeping only ``solvers``, in original column order."""
        keep = set(solvers)
        idx = [j for j, s in enumerate(self.solvers) if s in keep]
        missing = keep - set(self.solvers)
        if missing:
            raise KeyError(f"unknown solvers: {sorted(missing)}")
        return TimingMatrix(
            problems=self.problems,
            solvers=tuple(self.solvers[j] for j in idx),
            cells=tuple(tuple(row[j] for j in idx) for row in self.cells),
        )


def _check_unique(labels, kind: str) -> None:
    seen = set()
    for label in labels:
        if label in seen:
            raise DuplicateLabel(f"duplicate {kind} label {label!r}")
        seen.add(label)


def _parse_cell(text: str, row: int, col: int) -> float | None:
    token = text.strip()
    if token.lower() in FAILURE_TOKENS:
        return None
    try:
        value = float(token)
    except ValueError:
        raise InvalidTime(
            f"cell at row {row}, column {col}: {text!r} is neither a number "
            f"nor a failure token",
            row=row,
            col=col,
        ) from None
    if not math.isfinite(value) or value <= 0:
        raise InvalidTime(
            f"cell at row {row}, column {col}: time must be finite and > 0, "
            f"got {text!r}",
            row=row,
            col=col,
        )
    return value


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_timings(source, format: str = "csv") -> TimingMatrix:
    """Parse a timing table from bytes, text, or a readable stream."""
    if format == "csv":
        return _parse_csv(_as_text(source))
    if format == "json":
        return _parse_json(_as_text(source))
    raise FormatError(f"unknown format {format!r}, expected one of {FORMATS}")


def _parse_csv(text: str) -> TimingMatrix:
    rows = [r for r in csv.reader(io.StringIO(text, newline="")) if r]
    if not rows:
        raise FormatError("empty CSV document")
    header = rows[0]
    if len(header) < 2:
        raise ShapeError("CSV header must name at least one solver column")
    solvers = tuple(header[1:])
    problems = []
    cells = []
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise ShapeError(
                f"row {i} has {len(row)} fields, header has {len(header)}"
            )
        problems.append(row[0])
        cells.append(tuple(_parse_cell(c, i, j) for j, c in enumerate(row[1:])))
    if not problems:
        raise ShapeError("CSV has a header but no problem rows")
    return TimingMatrix(tuple(problems), solvers, tuple(cells))


def matrix_from_obj(obj) -> TimingMatrix:
    """Build a TimingMatrix from the JSON object layout (already decoded)."""
    if not isinstance(obj, dict):
        raise FormatError("JSON timing table must be an object")
    try:
        problems = obj["problems"]
        solvers = obj["solvers"]
        times = obj["times"]
    except (KeyError, TypeError):
        raise FormatError(
            "JSON timing table needs 'problems', 'solvers' and 'times' keys"
        ) from None
    if not isinstance(problems, list) or not isinstance(solvers, list) \
            or not isinstance(times, list):
        raise FormatError("'problems', 'solvers' and 'times' must be arrays")
    if len(times) != len(problems):
        raise ShapeError(
            f"{len(times)} time rows for {len(problems)} problems"
        )
    cells = []
    for i, row in enumerate(times):
        if not isinstance(row, list):
            raise FormatError(f"time row {i} is not an array")
        if len(row) != len(solvers):
            raise ShapeError(
                f"time row {i} has {len(row)} entries for {len(solvers)} solvers"
            )
        parsed = []
        for j, v in enumerate(row):
            if isinstance(v, str):
                if v.strip().lower() in FAILURE_TOKENS:
                    parsed.append(None)
                    continue
                raise FormatError(
                    f"time row {i}, entry {j}: unexpected string {v!r}"
                )
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise FormatError(
                    f"time row {i}, entry {j}: expected number or 'fail'"
                )
            if not math.isfinite(v) or v <= 0:
                raise InvalidTime(
                    f"time row {i}, entry {j}: time must be finite and > 0, "
                    f"got {v!r}",
                    row=i,
                    col=j,
                )
            parsed.append(float(v))
        cells.append(tuple(parsed))
    return TimingMatrix(
        tuple(str(p) for p in problems),
        tuple(str(s) for s in solvers),
        tuple(cells),
    )


def _parse_json(text: str) -> TimingMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None
    return matrix_from_obj(obj)


def matrix_to_obj(m: TimingMatrix) -> dict:
    """JSON-ready object for a timing table ("fail" marks failures)."""
    return {
        "problems": list(m.problems),
        "solvers": list(m.solvers),
        "times": [
            ["fail" if c is None else c for c in row] for row in m.cells
        ],
    }


def write_timings(m: TimingMatrix, format: str = "csv") -> bytes:
    """Serialize a timing table; inverse of :func:`parse_timings`."""
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["problem", *m.solvers])
        for label, row in zip(m.problems, m.cells):
            writer.writerow(
                [label, *("fail" if c is None else format_number(c) for c in row)]
            )
        return out.getvalue().encode("utf-8")
    if format == "json":
        return (json.dumps(matrix_to_obj(m), indent=2) + "\n").encode("utf-8")
    raise FormatError(f"unknown format {format!r}, expected one of {FORMATS}")
