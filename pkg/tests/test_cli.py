import io
import json
import xml.etree.ElementTree as ET
from types import SimpleNamespace

import pytest

from profbench import default_spec, generate, write_timings
from profbench.cli import main


def run(*argv, stdin_bytes=b"", env=None, monkeypatch=None):
    """Drive the CLI in-process; returns (exit_code, stdout_text, stderr_text)."""
    out = io.StringIO()
    err = io.StringIO()
    stdin = SimpleNamespace(buffer=io.BytesIO(stdin_bytes))
    code = main(list(argv), stdin=stdin, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("PROFBENCH_NO_COLOR", "1")


def test_profile_values_at_tau(table1_csv_path):
    code, out, err = run("profile", "--tau", "1", str(table1_csv_path))
    assert code == 0 and err == ""
    assert out.splitlines() == ["solver,rho", "A,0.8", "B,0", "C,0.2"]


def test_profile_curve_table(table1_csv_path):
    code, out, _ = run("profile", str(table1_csv_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "tau,A,B,C"
    assert lines[1] == "1,0.8,0,0.2"


def test_profile_json_format(table1_csv_path):
    code, out, _ = run("profile", "--format", "json", "--tau", "2", str(table1_csv_path))
    assert code == 0
    obj = json.loads(out)
    assert obj["values"] == {"A": 1.0, "B": 0.4, "C": 0.6}


def test_nested_json_overall(table1_csv_path):
    code, out, _ = run("nested", "--waves", "all", "--rule", "wins", str(table1_csv_path))
    assert code == 0
    obj = json.loads(out)
    assert obj["ranking"] == ["A", "B", "C"]

    def value_at(solver, tau):
        curve = obj["overall"][solver]
        best = 0.0
        for t, v in zip(curve["tau"], curve["value"]):
            if t <= tau:
                best = v
        return best

    assert [value_at(s, 2.0) for s in "ABC"] == [1.0, 0.7, 0.6]
    assert [value_at(s, 1.0) for s in "ABC"] == [0.8, 0.3, 0.3]


def test_nested_csv_by_extension(table1_csv_path, tmp_path):
    target = tmp_path / "overall.csv"
    code, out, _ = run("nested", str(table1_csv_path), "-o", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "tau,A,B,C"


def test_explicit_format_beats_extension(table1_csv_path, tmp_path):
    target = tmp_path / "curves.csv"
    code, _, _ = run(
        "nested", "--format", "json", str(table1_csv_path), "-o", str(target)
    )
    assert code == 0
    assert json.loads(target.read_text())["ranking"] == ["A", "B", "C"]


def test_gen_matches_library():
    code, out, _ = run("gen", "--solvers", "3")
    assert code == 0
    expected = write_timings(generate(default_spec(3)), "csv").decode()
    assert out == expected


def test_gen_custom_sizes():
    code, out, _ = run("gen", "--solvers", "3", "--sizes", "4,2,1")
    assert code == 0
    assert out.splitlines()[0] == "problem,s1,s2,s3"
    assert len(out.splitlines()) == 1 + 7


def test_gen_pipes_into_flipcheck():
    for n in (3, 4, 5):
        _, gen_out, _ = run("gen", "--solvers", str(n))
        code, out, _ = run("flipcheck", "-", stdin_bytes=gen_out.encode())
        assert code == 0
        report = json.loads(out)
        assert report["flipped"] is True, f"n={n}"
        assert report["nested_stable"] is True, f"n={n}"


def test_flipcheck_table1(table1_csv_path):
    code, out, _ = run("flipcheck", str(table1_csv_path))
    assert code == 0
    report = json.loads(out)
    assert report["removed"] == "A"
    assert report["classic_full"] == ["A", "C", "B"]
    assert report["classic_reduced"] == ["B", "C"]
    assert report["flipped"] is True
    assert report["nested_ranking"] == ["A", "B", "C"]


def test_rank_table_plain(table1_csv_path):
    code, out, _ = run("rank", str(table1_csv_path))
    assert code == 0
    assert "\x1b[" not in out  # PROFBENCH_NO_COLOR is set
    lines = out.splitlines()
    assert lines[0].split() == ["rank", "solver", "overall@tau=1", "via"]
    assert lines[1].startswith("1")
    assert "A" in lines[1] and "best of wave 1" in lines[1]
    assert lines[2].split()[1] == "B"
    assert lines[3].split()[1] == "C"
    assert lines[-1].startswith("order:")


def test_rank_colored_without_env(table1_csv_path, monkeypatch):
    monkeypatch.delenv("PROFBENCH_NO_COLOR", raising=False)
    code, out, _ = run("rank", str(table1_csv_path))
    assert code == 0
    assert "\x1b[" in out


def test_rank_respects_tau(table1_csv_path):
    code, out, _ = run("rank", "--tau", "2", str(table1_csv_path))
    assert code == 0
    assert "overall@tau=2" in out.splitlines()[0]


def test_plot_svg(table1_csv_path, tmp_path):
    target = tmp_path / "plot.svg"
    code, _, _ = run("plot", str(table1_csv_path), "-o", str(target))
    assert code == 0
    svg = target.read_bytes()
    assert svg.startswith(b"<?xml")
    ET.fromstring(svg.decode())


def test_plot_nested_log2(table1_csv_path):
    code, out, _ = run(
        "plot", "--waves", "all", "--log2", "--tau-max", "frac:0.6", str(table1_csv_path)
    )
    assert code == 0
    assert "<svg" in out


def test_plot_deterministic(table1_csv_path):
    _, a, _ = run("plot", str(table1_csv_path))
    _, b, _ = run("plot", str(table1_csv_path))
    assert a == b


def test_stdout_deterministic(table1_csv_path):
    _, a, _ = run("nested", "--tie", "first", str(table1_csv_path))
    _, b, _ = run("nested", "--tie", "first", str(table1_csv_path))
    assert a == b


def test_usage_errors_exit_1(table1_csv_path):
    assert run("profile", "--bogus", str(table1_csv_path))[0] == 1
    assert run()[0] == 1
    assert run("nosuchcommand")[0] == 1
    code, _, err = run("nested", "--waves", "zero", str(table1_csv_path))
    assert code == 1 and "--waves" in err
    code, _, err = run("nested", "--rm", "banana", str(table1_csv_path))
    assert code == 1 and "--rm" in err
    assert run("nested", "--tie", "seed:x", str(table1_csv_path))[0] == 1
    assert run("plot", "--tau-max", "frac:2.0", str(table1_csv_path))[0] == 1


def test_data_errors_exit_2(tmp_path, table1_csv_path):
    missing = tmp_path / "nope.csv"
    code, _, err = run("profile", str(missing))
    assert code == 2 and err != ""

    bad = tmp_path / "bad.csv"
    bad.write_text("problem,S1\np1,0\n")
    code, _, err = run("profile", str(bad))
    assert code == 2 and "error" in err

    # a user failure ratio below the largest finite ratio is a data error
    code, _, err = run("nested", "--rm", "10", str(table1_csv_path))
    assert code == 2

    # flip checks need at least three solvers
    two = tmp_path / "two.csv"
    two.write_text("problem,S1,S2\np1,1,2\n")
    assert run("flipcheck", str(two))[0] == 2

    # too many waves for the solver count
    code, _, _ = run("nested", "--waves", "7", str(table1_csv_path))
    assert code == 2


def test_help_exits_0():
    assert run("--help")[0] == 0
    assert run("nested", "--help")[0] == 0


def test_json_input_detected(table1, tmp_path):
    target = tmp_path / "t.json"
    target.write_bytes(write_timings(table1, "json"))
    code, out, _ = run("profile", "--tau", "1", str(target))
    assert code == 0
    assert out.splitlines()[1] == "A,0.8"
