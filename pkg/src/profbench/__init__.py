"""Performance profiles for solver benchmarking.

Computes classic and nested performance profiles from problems-by-solvers
timing tables, ranks solvers without the bias that removing the best
solver introduces, generates adversarial tables that exhibit that bias,
and exports curves as CSV/JSON and static SVG step plots.
"""

from .adversarial import AdversarialSpec, FlipReport, check_flip, default_spec, generate
from .errors import ProfbenchError
from .nested import (
    FIRST_INDEX,
    FirstIndex,
    NestedResult,
    ProfileConfig,
    SeededRandom,
    SelectionRule,
    classic_ranking,
    nested_profiles,
    next_wave,
    select_best,
)
from .profiles import (
    AUTO,
    ProfileCurve,
    RatioMatrix,
    compute_profile,
    compute_ratios,
    evaluate,
    l1_distance,
    mean_curve,
    success_fraction,
    wins,
)
from .report import AutoFraction, PlotSpec, curves_from_json, export_curves, render_svg
from .timings import TimingMatrix, parse_timings, write_timings

__version__ = "0.1.0"

__all__ = [
    "AUTO",
    "AdversarialSpec",
    "AutoFraction",
    "FIRST_INDEX",
    "FirstIndex",
    "FlipReport",
    "NestedResult",
    "PlotSpec",
    "ProfbenchError",
    "ProfileConfig",
    "ProfileCurve",
    "RatioMatrix",
    "SeededRandom",
    "SelectionRule",
    "TimingMatrix",
    "check_flip",
    "classic_ranking",
    "compute_profile",
    "compute_ratios",
    "curves_from_json",
    "default_spec",
    "evaluate",
    "export_curves",
    "generate",
    "l1_distance",
    "mean_curve",
    "nested_profiles",
    "next_wave",
    "parse_timings",
    "render_svg",
    "select_best",
    "success_fraction",
    "wins",
    "write_timings",
]
