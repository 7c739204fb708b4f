"""Command-line client for the profile toolkit.

Subcommands wire the library end to end: parse a timing table, compute
classic or nested profiles, rank solvers, generate adversarial tables,
check rank flips, or render an SVG plot.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors. All
diagnostics go to stderr; stdout is byte-deterministic for a fixed
command line and input (with the default first-index tie-break).
Machine-readable output everywhere except ``rank``, whose table honors
the PROFBENCH_NO_COLOR environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import adversarial, nested, profiles, report, timings
from .errors import ProfbenchError

_USAGE_EXIT = 1
_DATA_EXIT = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_rm(text: str):
    if text.lower() == "auto":
        return profiles.AUTO
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a number or 'auto', got {text!r}"
        ) from None
    return value


def _parse_tie(text: str):
    if text.lower() == "first":
        return nested.FIRST_INDEX
    if text.lower().startswith("seed:"):
        try:
            return nested.SeededRandom(int(text[5:]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(
        f"expected 'first' or 'seed:<int>', got {text!r}"
    )


def _parse_waves(text: str):
    if text.lower() == "all":
        return "all"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected an integer or 'all', got {text!r}"
        ) from None
    if value < 1:
        raise argparse.ArgumentTypeError("wave count must be >= 1")
    return value


def _parse_tau_max(text: str):
    if text.lower().startswith("frac:"):
        try:
            return report.AutoFraction(float(text[5:]))
        except (ValueError, ProfbenchError):
            raise argparse.ArgumentTypeError(
                f"expected a fraction in (0, 1] after 'frac:', got {text!r}"
            ) from None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a number or 'frac:<f>', got {text!r}"
        ) from None


def _parse_sizes(text: str):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


def _add_config_flags(p: argparse.ArgumentParser, waves: bool = True):
    p.add_argument("--rm", type=_parse_rm, default=profiles.AUTO, metavar="VALUE|auto",
                   help="failure ratio sentinel (default: auto = 2x the largest finite ratio)")
    p.add_argument("--rule", choices=["wins", "mean"], default="wins",
                   help="best-solver selection rule (default: wins)")
    p.add_argument("--tie", type=_parse_tie, default=nested.FIRST_INDEX, metavar="first|seed:N",
                   help="tie-break for best-solver selection (default: first)")
    p.add_argument("--tau", type=float, default=1.0, metavar="TAU",
                   help="reporting threshold (default: 1)")
    if waves:
        p.add_argument("--waves", type=_parse_waves, default="all", metavar="N|all",
                       help="number of elimination waves (default: all)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="profbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("profile", help="classic profile curves from a timing table")
    p.add_argument("input", help="timing table path, or - for stdin")
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], help="output format (default: by extension, else csv)")
    p.add_argument("--rm", type=_parse_rm, default=profiles.AUTO, metavar="VALUE|auto")
    p.add_argument("--tau", type=float, default=None, metavar="TAU",
                   help="print per-solver values at this threshold instead of full curves")

    p = sub.add_parser("nested", help="nested profiles, ranking and curves")
    p.add_argument("input", help="timing table path, or - for stdin")
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"],
                   help="output format (default: by extension, else json; csv = overall curves)")
    _add_config_flags(p)

    p = sub.add_parser("rank", help="human-readable ranking table")
    p.add_argument("input", help="timing table path, or - for stdin")
    _add_config_flags(p)

    p = sub.add_parser("gen", help="generate an adversarial timing table")
    p.add_argument("--solvers", type=int, required=True, metavar="N")
    p.add_argument("--sizes", type=_parse_sizes, default=None, metavar="a,b,c",
                   help="partition sizes (default: canonical sizes for N)")
    p.add_argument("--base", type=float, default=1.0, metavar="SCALE",
                   help="time scale factor (default: 1)")
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], help="output format (default: by extension, else csv)")

    p = sub.add_parser("flipcheck", help="report rank flips under best-solver removal")
    p.add_argument("input", help="timing table path, or - for stdin")
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    _add_config_flags(p)

    p = sub.add_parser("plot", help="render profile curves as an SVG step plot")
    p.add_argument("input", help="timing table path, or - for stdin")
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    p.add_argument("--waves", type=_parse_waves, default=None, metavar="N|all",
                   help="plot nested overall curves with this many waves (default: classic curves)")
    p.add_argument("--rm", type=_parse_rm, default=profiles.AUTO, metavar="VALUE|auto")
    p.add_argument("--rule", choices=["wins", "mean"], default="wins")
    p.add_argument("--tie", type=_parse_tie, default=nested.FIRST_INDEX, metavar="first|seed:N")
    p.add_argument("--log2", action="store_true", help="log base-2 tau axis")
    p.add_argument("--tau-max", type=_parse_tau_max, default=report.AutoFraction(0.6),
                   metavar="VALUE|frac:F",
                   help="right edge of the tau axis (default: frac:0.6 of the largest finite ratio)")
    p.add_argument("--title", default="", help="plot title")

    return parser


def _read_input(path: str, stdin) -> timings.TimingMatrix:
    if path == "-":
        data = stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read()
        fmt = "csv"
    else:
        with open(path, "rb") as fh:
            data = fh.read()
        fmt = "json" if path.lower().endswith(".json") else "csv"
    if isinstance(data, str):
        data = data.encode("utf-8")
    stripped = data.lstrip()
    if stripped.startswith(b"{"):
        fmt = "json"
    return timings.parse_timings(data, fmt)


def _pick_format(explicit, output: str, default: str) -> str:
    if explicit:
        return explicit
    lowered = output.lower()
    if lowered.endswith(".json"):
        return "json"
    if lowered.endswith(".csv"):
        return "csv"
    return default


def _write_output(data: bytes, output: str, stdout) -> None:
    if output == "-":
        buffer = getattr(stdout, "buffer", None)
        if buffer is not None:
            buffer.write(data)
            buffer.flush()
        else:
            stdout.write(data.decode("utf-8"))
    else:
        with open(output, "wb") as fh:
            fh.write(data)


def _config_from_args(args) -> nested.ProfileConfig:
    return nested.ProfileConfig(
        failure_ratio=args.rm,
        rule=nested.SelectionRule(args.rule),
        tie_break=args.tie,
        waves=args.waves,
        reporting_tau=args.tau,
    )


def _cmd_profile(args, stdout, stdin) -> int:
    m = _read_input(args.input, stdin)
    r = profiles.compute_ratios(m, None, args.rm)
    curves = {s: profiles.compute_profile(r, s) for s in m.solvers}
    fmt = _pick_format(args.format, args.output, "csv")
    if args.tau is not None:
        values = {s: curves[s].evaluate(args.tau) for s in m.solvers}
        if fmt == "json":
            out = (json.dumps({"tau": args.tau, "values": values}, indent=2) + "\n").encode()
        else:
            lines = ["solver,rho"]
            lines.extend(f"{s},{timings.format_number(values[s])}" for s in m.solvers)
            out = ("\n".join(lines) + "\n").encode()
    else:
        out = report.export_curves(curves, fmt)
    _write_output(out, args.output, stdout)
    return 0


def _cmd_nested(args, stdout, stdin) -> int:
    m = _read_input(args.input, stdin)
    result = nested.nested_profiles(m, _config_from_args(args))
    fmt = _pick_format(args.format, args.output, "json")
    _write_output(report.export_curves(result, fmt), args.output, stdout)
    return 0


_BOLD = "\x1b[1m"
_GREEN = "\x1b[32m"
_RESET = "\x1b[0m"


def _cmd_rank(args, stdout, stdin) -> int:
    m = _read_input(args.input, stdin)
    result = nested.nested_profiles(m, _config_from_args(args))
    color = "PROFBENCH_NO_COLOR" not in os.environ

    tau = args.tau
    rows = []
    for pos, solver in enumerate(result.ranking, start=1):
        value = result.overall[solver].evaluate(tau)
        if solver in result.eliminated:
            via = f"best of wave {result.eliminated.index(solver) + 1}"
        else:
            via = f"overall value at tau={tau:g}"
        rows.append((str(pos), solver, f"{value:.6g}", via))

    header = ("rank", "solver", f"overall@tau={tau:g}", "via")
    widths = [
        max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(4)
    ]

    def fmt_row(cells) -> str:
        return "  ".join(c.ljust(widths[i]) for i, c in enumerate(cells)).rstrip()

    lines = []
    head = fmt_row(header)
    lines.append(f"{_BOLD}{head}{_RESET}" if color else head)
    for i, row in enumerate(rows):
        text = fmt_row(row)
        if color and i == 0:
            text = f"{_GREEN}{text}{_RESET}"
        lines.append(text)
    lines.append(f"order: {nested.RANKING_NOTE}")
    stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_gen(args, stdout) -> int:
    if args.sizes is None:
        spec = adversarial.default_spec(args.solvers)
        if args.base != 1.0:
            spec = adversarial.AdversarialSpec(
                spec.n_solvers, spec.partition_sizes, args.base
            )
    else:
        spec = adversarial.AdversarialSpec(args.solvers, args.sizes, args.base)
    m = adversarial.generate(spec)
    fmt = _pick_format(args.format, args.output, "csv")
    _write_output(timings.write_timings(m, fmt), args.output, stdout)
    return 0


def _cmd_flipcheck(args, stdout, stdin) -> int:
    m = _read_input(args.input, stdin)
    flip = adversarial.check_flip(m, _config_from_args(args))
    out = (json.dumps(flip.to_dict(), indent=2) + "\n").encode()
    _write_output(out, args.output, stdout)
    return 0


def _cmd_plot(args, stdout, stdin) -> int:
    m = _read_input(args.input, stdin)
    if args.waves is None:
        r = profiles.compute_ratios(m, None, args.rm)
        curves = {s: profiles.compute_profile(r, s) for s in m.solvers}
        rm = r.failure_ratio
        title = args.title or "performance profile"
    else:
        cfg = nested.ProfileConfig(
            failure_ratio=args.rm,
            rule=nested.SelectionRule(args.rule),
            tie_break=args.tie,
            waves=args.waves,
        )
        result = nested.nested_profiles(m, cfg)
        curves = {s: result.overall[s] for s in m.solvers}
        rm = result.failure_ratio
        title = args.title or "nested performance profile (overall)"

    tau_max = args.tau_max
    if isinstance(tau_max, report.AutoFraction):
        # fractions are taken of the largest *finite* ratio: breakpoints at
        # the failure sentinel must not stretch the axis
        finite = [t for c in curves.values() for t in c.taus if t < rm]
        if finite:
            tau_max = tau_max.fraction * max(finite)

    spec = report.PlotSpec(log_scale=args.log2, tau_max=tau_max, title=title)
    _write_output(report.render_svg(curves, spec), args.output, stdout)
    return 0


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    """Run the CLI; returns the process exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"profbench: error: {exc}", file=stderr)
        return _USAGE_EXIT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if args.command is None:
        parser.print_usage(stderr)
        return _USAGE_EXIT

    try:
        if args.command == "profile":
            return _cmd_profile(args, stdout, stdin)
        if args.command == "nested":
            return _cmd_nested(args, stdout, stdin)
        if args.command == "rank":
            return _cmd_rank(args, stdout, stdin)
        if args.command == "gen":
            return _cmd_gen(args, stdout)
        if args.command == "flipcheck":
            return _cmd_flipcheck(args, stdout, stdin)
        if args.command == "plot":
            return _cmd_plot(args, stdout, stdin)
        parser.print_usage(stderr)
        return _USAGE_EXIT
    except (ProfbenchError, ValueError) as exc:
        print(f"profbench: error: {exc}", file=stderr)
        return _DATA_EXIT
    except OSError as exc:
        print(f"profbench: error: {exc}", file=stderr)
        return _DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
