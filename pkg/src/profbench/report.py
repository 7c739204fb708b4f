"""Export of profile curves and nested results; static SVG step plots.

Curve tables are written with one row per breakpoint of the merged
breakpoint union, evaluating every curve right-continuously, so stepping
through the exported CSV reproduces ``evaluate`` exactly at every listed
threshold. Numbers are printed in the shortest form that parses back to
the identical float.

The SVG renderer is dependency-free on purpose: a step plot needs only
lines, text and a legend box, and generating the markup directly makes
the output byte-deterministic for identical inputs.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Union
from xml.sax.saxutils import escape

from .errors import (
    EmptyCurves,
    FormatError,
    InvalidPlotSpec,
    NonPositiveTauOnLogScale,
)
from .nested import RANKING_NOTE, NestedResult, SeededRandom
from .profiles import ProfileCurve, merged_breakpoints
from .timings import format_number


@dataclass(frozen=True)
class AutoFraction:
    """Truncate the tau axis at ``fraction`` times the largest breakpoint."""

    fraction: float = 0.6

    def __post_init__(self):
        if not 0 < self.fraction <= 1:
            raise InvalidPlotSpec(
                f"auto fraction must be in (0, 1], got {self.fraction!r}"
            )


@dataclass(frozen=True)
class PlotSpec:
    """Axis conventions and geometry for a step plot."""

    log_scale: bool = False
    tau_max: Union[float, AutoFraction] = AutoFraction(0.6)
    width: int = 800
    height: int = 500
    title: str = ""
    x_label: str = "within factor tau of the best"
    y_label: str = "fraction of problems"

    def __post_init__(self):
        if self.width < 100 or self.height < 100:
            raise InvalidPlotSpec("plot must be at least 100x100 pixels")


# --- data exports -----------------------------------------------------------


def _curve_obj(curve: ProfileCurve) -> dict:
    return {"tau": list(curve.taus), "value": list(curve.values)}


def _curve_from_obj(obj) -> ProfileCurve:
    try:
        return ProfileCurve(tuple(obj["tau"]), tuple(obj["value"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed curve object: {exc}") from None


def curves_to_csv(curves: Mapping[str, ProfileCurve]) -> bytes:
    """Curve table: header ``tau,<name>,...``, one row per breakpoint."""
    if not curves:
        raise EmptyCurves("no curves to export")
    names = list(curves)
    out = io.StringIO()
    out.write(",".join(["tau", *names]) + "\n")
    for t in merged_breakpoints(curves.values()):
        row = [format_number(t)]
        row.extend(format_number(curves[n].evaluate(t)) for n in names)
        out.write(",".join(row) + "\n")
    return out.getvalue().encode("utf-8")


def _config_obj(result: NestedResult) -> dict:
    cfg = result.config
    tie = (
        {"mode": "seeded", "seed": cfg.tie_break.seed}
        if isinstance(cfg.tie_break, SeededRandom)
        else {"mode": "first-index"}
    )
    return {
        "failure_ratio_policy": cfg.failure_ratio,
        "rule": cfg.rule.value,
        "tie_break": tie,
        "waves": cfg.waves,
        "reporting_tau": cfg.reporting_tau,
    }


def nested_to_obj(result: NestedResult) -> dict:
    """JSON-ready mirror of a NestedResult."""
    return {
        "problems": list(result.waves[0].problems),
        "solvers": list(result.solvers),
        "k": result.k,
        "failure_ratio": result.failure_ratio,
        "config": _config_obj(result),
        "eliminated": list(result.eliminated),
        "ranking": list(result.ranking),
        "ranking_convention": RANKING_NOTE,
        "waves": [
            {
                "active": list(w.active),
                "ratios": {s: list(w.ratios[s]) for s in result.solvers},
                "profiles": {
                    s: _curve_obj(result.wave_profiles[i][s])
                    for s in result.solvers
                },
            }
            for i, w in enumerate(result.waves)
        ],
        "overall": {s: _curve_obj(result.overall[s]) for s in result.solvers},
    }


def export_curves(source, format: str = "csv") -> bytes:
    """Serialize curves or a whole nested result.

    A NestedResult exports its overall curves as CSV, or its complete
    structure (waves, ratios, per-wave curves, ranking, config, failure
    ratio) as JSON. A plain name-to-curve mapping exports as a curve
    table in either format.
    """
    if isinstance(source, NestedResult):
        if format == "csv":
            return curves_to_csv({s: source.overall[s] for s in source.solvers})
        if format == "json":
            return (json.dumps(nested_to_obj(source), indent=2) + "\n").encode("utf-8")
        raise FormatError(f"unknown format {format!r}")
    if format == "csv":
        return curves_to_csv(source)
    if format == "json":
        obj = {
            "solvers": list(source),
            "curves": {name: _curve_obj(c) for name, c in source.items()},
        }
        return (json.dumps(obj, indent=2) + "\n").encode("utf-8")
    raise FormatError(f"unknown format {format!r}")


def curves_from_json(data) -> dict[str, ProfileCurve]:
    """Read curves back from either JSON export layout.

    Accepts the plain curve-table export (``{"curves": ...}``) and the
    full nested export, from which the overall curves are taken.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise FormatError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FormatError("curve document must be a JSON object")
    if "curves" in data:
        block = data["curves"]
    elif "overall" in data:
        block = data["overall"]
    else:
        raise FormatError("no 'curves' or 'overall' section in document")
    names = data.get("solvers", list(block))
    return {name: _curve_from_obj(block[name]) for name in names}


# --- SVG rendering ----------------------------------------------------------

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
)

_MARGIN_LEFT = 62
_MARGIN_RIGHT = 24
_MARGIN_TOP = 42
_MARGIN_BOTTOM = 52
_LEGEND_WIDTH = 130


def resolve_tau_max(curves: Mapping[str, ProfileCurve], spec: PlotSpec) -> float:
    """Concrete right edge of the tau axis for these curves."""
    if isinstance(spec.tau_max, AutoFraction):
        top = max(c.taus[-1] for c in curves.values())
        return spec.tau_max.fraction * top
    return spec.tau_max


def _fmt_px(x: float) -> str:
    return f"{x:.2f}"


def _fmt_tick(x: float) -> str:
    return f"{x:g}"


def render_svg(curves: Mapping[str, ProfileCurve], spec: PlotSpec = PlotSpec()) -> bytes:
    """Render named curves as an SVG 1.1 step plot.

    Each curve becomes one axis-aligned step polyline (horizontal, then
    vertical at each breakpoint), truncated at the resolved tau maximum
    with a final horizontal run to the boundary. With ``log_scale`` the
    tau axis is log base 2. Output bytes are identical for identical
    inputs.
    """
    if not curves:
        raise EmptyCurves("nothing to plot")
    if spec.log_scale:
        for name, c in curves.items():
            if c.taus[0] <= 0:
                raise NonPositiveTauOnLogScale(
                    f"curve {name!r} has breakpoint tau = {c.taus[0]} <= 0"
                )

    x_lo = min(c.domain_start for c in curves.values())
    x_hi = resolve_tau_max(curves, spec)
    if not isinstance(spec.tau_max, AutoFraction) and x_hi <= x_lo:
        raise InvalidPlotSpec(
            f"tau max {x_hi} does not exceed the curves' domain start {x_lo}"
        )
    x_hi = max(x_hi, x_lo)

    tx = (lambda t: math.log2(t)) if spec.log_scale else (lambda t: t)
    u_lo, u_hi = tx(x_lo), tx(x_hi)
    if u_hi <= u_lo:
        u_hi = u_lo + 1.0  # degenerate range: all mass at one breakpoint

    plot_w = spec.width - _MARGIN_LEFT - _MARGIN_RIGHT - _LEGEND_WIDTH
    plot_h = spec.height - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(t: float) -> float:
        return _MARGIN_LEFT + (tx(t) - u_lo) / (u_hi - u_lo) * plot_w

    def py(v: float) -> float:
        return _MARGIN_TOP + (1.0 - v) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">\n',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>\n',
    ]
    if spec.title:
        parts.append(
            f'<text x="{_fmt_px(_MARGIN_LEFT + plot_w / 2)}" y="24" '
            f'text-anchor="middle" font-family="sans-serif" font-size="16">'
            f"{escape(spec.title)}</text>\n"
        )

    # frame and y gridlines
    parts.append(
        f'<rect x="{_fmt_px(_MARGIN_LEFT)}" y="{_fmt_px(_MARGIN_TOP)}" '
        f'width="{_fmt_px(plot_w)}" height="{_fmt_px(plot_h)}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>\n'
    )
    for i in range(5):
        v = i / 4
        y = py(v)
        parts.append(
            f'<line x1="{_fmt_px(_MARGIN_LEFT)}" y1="{_fmt_px(y)}" '
            f'x2="{_fmt_px(_MARGIN_LEFT + plot_w)}" y2="{_fmt_px(y)}" '
            f'stroke="#dddddd" stroke-width="1"/>\n'
            f'<text x="{_fmt_px(_MARGIN_LEFT - 8)}" y="{_fmt_px(y + 4)}" '
            f'text-anchor="end" font-family="sans-serif" font-size="11">'
            f"{_fmt_tick(v)}</text>\n"
        )

    for t, label in _x_ticks(x_lo, x_hi, spec.log_scale):
        x = px(t)
        parts.append(
            f'<line x1="{_fmt_px(x)}" y1="{_fmt_px(_MARGIN_TOP + plot_h)}" '
            f'x2="{_fmt_px(x)}" y2="{_fmt_px(_MARGIN_TOP + plot_h + 5)}" '
            f'stroke="#333333" stroke-width="1"/>\n'
            f'<text x="{_fmt_px(x)}" y="{_fmt_px(_MARGIN_TOP + plot_h + 18)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{escape(label)}</text>\n"
        )

    parts.append(
        f'<text x="{_fmt_px(_MARGIN_LEFT + plot_w / 2)}" '
        f'y="{_fmt_px(spec.height - 14)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(spec.x_label)}</text>\n'
        f'<text x="16" y="{_fmt_px(_MARGIN_TOP + plot_h / 2)}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {_fmt_px(_MARGIN_TOP + plot_h / 2)})">'
        f"{escape(spec.y_label)}</text>\n"
    )

    legend_x = _MARGIN_LEFT + plot_w + 14
    for idx, (name, curve) in enumerate(curves.items()):
        color = PALETTE[idx % len(PALETTE)]
        pts = _step_points(curve, x_lo, x_hi)
        coords = " ".join(f"{_fmt_px(px(t))},{_fmt_px(py(v))}" for t, v in pts)
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" '
            f'points="{coords}"/>\n'
        )
        ly = _MARGIN_TOP + 12 + idx * 20
        parts.append(
            f'<line x1="{_fmt_px(legend_x)}" y1="{_fmt_px(ly)}" '
            f'x2="{_fmt_px(legend_x + 22)}" y2="{_fmt_px(ly)}" '
            f'stroke="{color}" stroke-width="2"/>\n'
            f'<text x="{_fmt_px(legend_x + 28)}" y="{_fmt_px(ly + 4)}" '
            f'font-family="sans-serif" font-size="12">{escape(name)}</text>\n'
        )

    parts.append("</svg>\n")
    return "".join(parts).encode("utf-8")


def _step_points(curve: ProfileCurve, x_lo: float, x_hi: float):
    """Vertex list of the step polyline over [x_lo, x_hi]."""
    value = curve.evaluate(x_lo)
    pts = [(x_lo, value)]
    for t, v in zip(curve.taus, curve.values):
        if t <= x_lo or t > x_hi:
            continue
        pts.append((t, value))
        pts.append((t, v))
        value = v
    if pts[-1][0] != x_hi:
        pts.append((x_hi, value))
    return pts


def _x_ticks(lo: float, hi: float, log_scale: bool):
    """Deterministic tick positions and labels for the tau axis."""
    if log_scale:
        lo_exp = math.ceil(math.log2(lo) - 1e-9)
        hi_exp = math.floor(math.log2(hi) + 1e-9)
        ticks = [
            (2.0**e, _fmt_tick(2.0**e)) for e in range(lo_exp, hi_exp + 1)
        ]
        if not ticks:
            ticks = [(lo, _fmt_tick(lo)), (hi, _fmt_tick(hi))]
        return ticks
    if hi <= lo:
        return [(lo, _fmt_tick(lo))]
    return [
        (lo + (hi - lo) * i / 4, _fmt_tick(lo + (hi - lo) * i / 4))
        for i in range(5)
    ]
