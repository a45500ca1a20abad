import io
import subprocess
import sys

import pytest

from muhasse.cli import main


def run(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def canonical_file(tmp_path):
    code, text = run(["canonical", "--ell", "3", "--a", "1", "--b", "2"])
    assert code == 0
    path = tmp_path / "canonical.txt"
    path.write_text(text)
    return path


def test_canonical_then_polygon_from_stdin(canonical_file, monkeypatch):
    code, out = run(["polygon", "--module", "-"], canonical_file.read_text(), monkeypatch)
    assert code == 0
    assert out == "newton_polygon: {0:2, 1/2:2, 1:2}\nmu_ordinary: true\n"


def test_polygon_csv_from_params():
    code, out = run(["polygon", "--a", "2", "--b", "3", "--format", "csv"])
    assert code == 0
    assert out == "slope,multiplicity\n0/1,4\n1/2,2\n1/1,4\n"


def test_hasse_on_canonical(canonical_file):
    code, out = run(["hasse", "--module", str(canonical_file)])
    assert code == 0
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    assert fields["mu_hasse_nonzero"] == "true"
    assert fields["ell_rank"] == "2"
    assert fields["newton_polygon"] == "{0:2, 1/2:2, 1:2}"


def test_round_trip_reproduces_results(canonical_file, tmp_path):
    from muhasse.dieudonne import PelParams, canonical_mu_ordinary, format_module, parse_module
    M = canonical_mu_ordinary(PelParams(3, 1, 2))
    assert parse_module(canonical_file.read_text()) == M
    assert format_module(parse_module(canonical_file.read_text())) == canonical_file.read_text()


def test_census_random_exit_zero_and_jobs_independent():
    base = ["census-random", "--ell", "2", "--a", "1", "--b", "2", "--count", "12", "--seed", "3"]
    c1, o1 = run(base)
    c2, o2 = run(base + ["--jobs", "2"])
    assert c1 == c2 == 0
    assert o1 == o2
    assert o1.endswith("verdict: pass\n")


def test_rigidity_sweep():
    code, out = run(["rigidity", "--max-height", "10"])
    assert code == 0
    assert out.splitlines()[-1] == "verdict: pass"
    assert "rigid[a=2 b=3 r=1 height=10]: true" in out


@pytest.mark.parametrize("argv", [
    ["polygon", "--bogus"],
    ["nonsense"],
    [],
    ["census-random", "--ell", "3", "--a", "2", "--b", "2"],
    ["census-random", "--ell", "4", "--a", "1", "--b", "2"],
    ["census-random", "--ell", "3", "--a", "1"],
    ["census-random", "--ell", "3", "--a", "1", "--b", "2", "--count", "0"],
    ["census-exhaustive", "--ell", "3", "--a", "1", "--b", "2"],
    ["hasse", "--module", "/nonexistent/module.txt"],
    ["polygon", "--ell", "3", "--a", "1", "--b", "2", "--form", "csv"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(argv)
    assert code == 2


def test_malformed_module_reports_position(monkeypatch, capsys):
    text = "ell=3\na=1\nb=2\nA:\n1 x 0\n"
    code, _ = run(["hasse", "--module", "-"], text, monkeypatch)
    assert code == 2
    assert "line 5, column 3" in capsys.readouterr().err


def test_conflicting_flag_and_header(canonical_file, capsys):
    code, _ = run(["hasse", "--module", str(canonical_file), "--ell", "5"])
    assert code == 2


def test_invalid_module_is_rejected(canonical_file, tmp_path, capsys):
    text = canonical_file.read_text().replace("A:\n0,0 3,0", "A:\n0,0 9,0")
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, _ = run(["hasse", "--module", str(path)])
    assert code == 2
    assert "fv:" in capsys.readouterr().err


def test_failed_verdict_exits_1(monkeypatch, capsys):
    import muhasse.cli as cli
    from muhasse.census import CensusRecord, CensusReport
    from muhasse.dieudonne import PelParams

    def fake(params, count, seed0, jobs):
        rec = CensusRecord("0", 1, None, True, "1", (1,), True, (("hasse_iff_max_ell_rank", False),))
        return CensusReport("census-random", params, "fake", [rec], ("hasse_iff_max_ell_rank",),
                            [(rec, "ell=3\n")])

    monkeypatch.setattr(cli, "run_random_census", fake)
    code, out = run(["census-random", "--ell", "3", "--a", "1", "--b", "2"])
    assert code == 1
    assert "failure[sample=0]: hasse_iff_max_ell_rank" in out
    assert out.endswith("verdict: FAIL\n")


def test_python_dash_m_entry_point():
    proc = subprocess.run([sys.executable, "-m", "muhasse", "polygon", "--a", "1", "--b", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("newton_polygon: {0:2, 1/2:2, 1:2}")
