from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from genhilbert.cli import OUTPUT_DIR_ENV, fmt, load_measure, main, read_sequence
from genhilbert.measure import Atom, lebesgue

QUICK_REPORT = ["--epsilons", "0.2,0.05", "--truncations", "128", "--sections", "1,2,4"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def lebesgue_file(tmp_path):
    path = tmp_path / "lebesgue.json"
    path.write_text('{"atoms":[],"densities":[{"coef":1,"a":1,"b":1}]}')
    return str(path)


@pytest.fixture
def atom_half_file(tmp_path):
    path = tmp_path / "atom_half.json"
    path.write_text('{"atoms":[{"t":0.5,"mass":1.0}],"densities":[]}')
    return str(path)


class TestHelpers:
    def test_fmt(self):
        assert fmt(math.pi) == "3.1415926535897931"
        assert fmt(2.0) == "2"
        assert float(fmt(1e-300)) == 1e-300
        assert "," not in fmt(1234567.0)

    def test_measure_aliases(self, tmp_path):
        assert load_measure("lebesgue") == lebesgue()
        assert load_measure("atom:0.25:2").atoms == (Atom(0.25, 2.0),)
        assert load_measure("atom:0.5").atoms == (Atom(0.5, 1.0),)
        inline = load_measure('{"atoms":[{"t":0.3,"mass":1}]}')
        assert inline.atoms == (Atom(0.3, 1.0),)

    def test_read_sequence(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("1\n0.5\n-2e-3\n")
        assert list(read_sequence(str(path))) == [1.0, 0.5, -0.002]


class TestConstant:
    def test_hilbert(self, capsys, lebesgue_file):
        code, out, _ = run(capsys, "constant", "--alpha", "0", "--beta", "0", "--p", "2", "--measure", lebesgue_file)
        assert code == 0
        assert out == "Finite 3.1415926535897931\n"

    def test_sup_atom(self, capsys, atom_half_file):
        code, out, _ = run(capsys, "constant", "--beta", "0", "--p", "inf", "--measure", atom_half_file)
        assert code == 0 and out == "Finite 2\n"

    def test_divergent_exit(self, capsys, lebesgue_file):
        code, out, _ = run(capsys, "constant", "--beta", "1", "--p", "2", "--measure", lebesgue_file)
        assert code == 2 and out == "Divergent both\n"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "constant", "--measure", "atom:0.5:1", "--beta", "0.5", "--p", "3", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "kind,param,value"
        assert float(lines[1].split(",")[2]) == pytest.approx(2**1.5, rel=1e-15)


class TestInputErrors:
    def test_bad_alpha_names_invariant(self, capsys):
        code, _, err = run(capsys, "kernel", "--m", "0", "--n", "0", "--alpha", "-1.5")
        assert code == 1 and "alpha > -1" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["constant", "--measure", "missing.json"],
            ["constant", "--measure", '{"atoms":[{"t":2,"mass":1}]}'],
            ["constant", "--measure", "{broken"],
            ["constant", "--p", "0.5"],
            ["kernel", "--m", "x", "--n", "0"],
            ["nonsense"],
            ["verify", "--only", "lemma99"],
            ["apply", "--measure", "lebesgue"],
        ],
    )
    def test_exit_one(self, capsys, argv):
        code = None
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
        assert code == 1
        assert capsys.readouterr().err


class TestKernel:
    def test_example(self, capsys):
        code, out, _ = run(capsys, "kernel", "--m", "2", "--n", "3")
        assert code == 0 and out == "10, 10, 10\n"

    def test_zero_zero_is_gamma_ratio(self, capsys):
        code, out, _ = run(capsys, "kernel", "--m", "0", "--n", "0", "--alpha", "0.5", "--beta", "1", "--format", "csv")
        header, row = out.splitlines()
        assert header == "kernel,m_form,n_form"
        expected = math.gamma(2) / (math.gamma(1.5) * math.gamma(1.5))
        assert all(float(v) == pytest.approx(expected, rel=1e-14) for v in row.split(","))


class TestApply:
    def test_sequence(self, capsys, tmp_path):
        seq = tmp_path / "a.csv"
        seq.write_text("1\n")
        code, out, _ = run(capsys, "apply", "--sequence", str(seq), "--n-max", "3")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "n,value"
        assert [float(l.split(",")[1]) for l in lines[1:]] == pytest.approx([1, 1 / 2, 1 / 3, 1 / 4], rel=1e-15)

    def test_generator_intervals(self, capsys):
        code, out, _ = run(
            capsys, "apply", "--generator", "extremal_inf", "--measure", "atom:0.5:1", "--n-max", "5", "--tol", "1e-12"
        )
        lines = out.splitlines()
        assert code == 0 and lines[0] == "n,lo,hi"
        for line in lines[1:]:
            _, lo, hi = line.split(",")
            assert float(lo) <= 2.0 <= float(hi)

    def test_budget_error_exits_one(self, capsys):
        code, _, err = run(
            capsys, "apply", "--generator", "extremal_lp", "--epsilon", "0.01", "--n-max", "2", "--tol", "1e-12", "--max-terms", "256"
        )
        assert code == 1 and "error" in err


class TestReport:
    def test_hilbert_table(self, capsys):
        code, out, _ = run(capsys, "report", *QUICK_REPORT)
        assert code == 0
        assert "Finite 3.1415926535897931" in out and "bounded_with_norm" in out
        assert "section curve" in out

    def test_atom_csv(self, capsys):
        code, out, _ = run(
            capsys, "report", "--measure", "atom:0.5:1", "--beta", "0.5", "--p", "3", "--format", "csv", *QUICK_REPORT
        )
        lines = out.splitlines()
        assert code == 0 and lines[0] == "kind,param,value"
        kind, param, value = lines[1].split(",")
        assert (kind, param) == ("constant", "finite") and float(value) == pytest.approx(2**1.5, rel=1e-15)
        assert lines[-1] == "verdict,,bounded_with_norm"
        assert any(l.startswith("lower_bound,eps=0.20000000000000001;M=128,") for l in lines)


class TestVerify:
    def test_only_single_row(self, capsys):
        code, out, _ = run(capsys, "verify", "--only", "lemma23")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "name,passed,worst_residual,samples"
        assert len(lines) == 2 and lines[1].startswith("lemma23,true,")

    def test_comma_and_repeat(self, capsys):
        code, out, _ = run(capsys, "verify", "--only", "lemma23,lemma25", "--only", "lemma21")
        assert code == 0 and [l.split(",")[0] for l in out.splitlines()[1:]] == ["lemma23", "lemma25", "lemma21"]

    def test_tight_tolerance_exit_three(self, capsys):
        code, out, _ = run(capsys, "verify", "--only", "lemma21", "--tol", "1e-18")
        assert code == 3
        name, passed, residual, _ = out.splitlines()[1].split(",")
        assert passed == "false" and float(residual) > 1e-18

    def test_impossible_quadrature_tolerance_still_reports(self, capsys):
        code, out, _ = run(capsys, "verify", "--only", "lemma24", "--tol", "1e-18")
        assert code == 3 and out.splitlines()[1].startswith("lemma24,false,")


class TestSweep:
    ARGS = ["sweep", "--sections", "2,4,8,16", "--epsilons", "0.2,0.1", "--truncation", "128"]

    def test_shape(self, capsys):
        code, out, _ = run(capsys, *self.ARGS)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "kind,param,value"
        sections = [float(l.split(",")[2]) for l in lines if l.startswith("section,")]
        assert len(sections) == 4
        assert all(a <= b for a, b in zip(sections, sections[1:])) and sections[-1] <= math.pi
        ratios = [float(l.split(",")[2]) for l in lines if l.startswith("lower_bound,")]
        assert len(ratios) == 2 and ratios[0] < ratios[1] < math.pi

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, *self.ARGS)
        _, b, _ = run(capsys, *self.ARGS)
        assert a == b


class TestOutput:
    def test_env_directory(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "out"))
        code, out, _ = run(capsys, "kernel", "--m", "2", "--n", "3", "--format", "csv", "--output", "k.csv")
        assert code == 0 and out == ""
        assert (tmp_path / "out" / "k.csv").read_text() == "kernel,m_form,n_form\n10,10,10\n"

    def test_absolute_path_ignores_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "elsewhere"))
        target = tmp_path / "c.txt"
        run(capsys, "constant", "--measure", "atom:0.5", "--p", "inf", "--output", str(target))
        assert target.read_text() == "Finite 2\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "genhilbert", "constant", "--p", "inf", "--measure", json.dumps({"atoms": [{"t": 0.5, "mass": 1}]})],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "Finite 2\n"
