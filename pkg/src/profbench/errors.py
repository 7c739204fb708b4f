"""Exception types raised across the package.

Everything derives from ProfbenchError so callers (CLI, HTTP service) can
map any domain failure to a single "data error" outcome.
"""


class ProfbenchError(Exception):
    """Base class for all profbench domain errors."""


# --- timing-table ingestion ---

class DuplicateLabel(ProfbenchError):
    """A problem or solver label occurs more than once."""


class InvalidTime(ProfbenchError):
    """A timing cell is not a strictly positive finite number.

    Carries the offending location: ``row`` and ``col`` are 0-based
    indices into the table body (row = problem, col = solver).
    """

    def __init__(self, message: str, row: int, col: int):
        super().__init__(message)
        self.row = row
        self.col = col


class ShapeError(ProfbenchError):
    """Ragged rows, or dimensions that do not line up."""


class FormatError(ProfbenchError):
    """Unknown serialization format or malformed document structure."""


# --- ratio / profile computation ---

class EmptyActiveSet(ProfbenchError):
    """The set of solvers under consideration is empty."""


class InvalidRM(ProfbenchError):
    """A user-supplied failure ratio does not exceed every finite ratio."""


class UnknownSolver(ProfbenchError):
    """The named solver has no row in the matrix at hand."""


class InvalidInterval(ProfbenchError):
    """Integration bounds are not a finite interval with lo < hi."""


# --- nested algorithm ---

class SolverNotActive(ProfbenchError):
    """Attempt to eliminate a solver that is not in the active set."""


class TooManyWaves(ProfbenchError):
    """Requested wave count exceeds the number of solvers minus one."""


# --- adversarial generator ---

class SpecInvariantViolated(ProfbenchError):
    """A partition layout breaks one of the construction inequalities."""


# --- plotting ---

class EmptyCurves(ProfbenchError):
    """A plot was requested with no curves."""


class NonPositiveTauOnLogScale(ProfbenchError):
    """A log-scale plot cannot place a breakpoint at tau <= 0."""


class InvalidPlotSpec(ProfbenchError):
    """Plot dimensions or axis bounds are out of range."""
