import json

import pytest

from stepfit.cli import run_cli
from stepfit.core import CostModel, InstanceError
from stepfit.generate import generate
from stepfit.io import FitOutput, Instance, format_csv, load_instance, render_svg, save_instance
from stepfit.kstep import k_step

STAIRS = "x,y,w\n1,0,1\n2,1,1\n3,9,1\n4,10,1\n"


@pytest.fixture
def stairs(tmp_path):
    p = tmp_path / "stairs.csv"
    p.write_text(STAIRS)
    return p


class TestLoad:
    def test_csv_default_weight(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1,0\n2,10,1\n")
        inst = load_instance(p, k=1)
        assert len(inst) == 2 and inst.points.w.tolist() == [1.0, 1.0] and inst.k == 1

    def test_bad_weight_names_line(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1,0,-3\n")
        with pytest.raises(InstanceError, match="line 1"):
            load_instance(p)

    def test_malformed_line(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("x,y,w\n1,2,3\n1,oops,1\n")
        with pytest.raises(InstanceError, match="line 3"):
            load_instance(p)

    @pytest.mark.parametrize("text", ["", "x,y,w\n", "1,nan,1\n", "1,2,3,4\n"])
    def test_rejects(self, tmp_path, text):
        p = tmp_path / "a.csv"
        p.write_text(text)
        with pytest.raises(InstanceError):
            load_instance(p)

    def test_json_round_trip(self, tmp_path):
        d = {"points": [{"x": 0.1, "y": 2.5, "w": 3.0}, {"x": 1.0, "y": -1e-300, "w": 0.25}],
             "k": 2, "model": "squared"}
        src = tmp_path / "a.json"
        src.write_text(json.dumps(d))
        inst = load_instance(src)
        assert inst.k == 2 and inst.model is CostModel.SQUARED
        out = tmp_path / "b.json"
        save_instance(inst, out)
        again = load_instance(out)
        save_instance(again, tmp_path / "c.json")
        assert out.read_text() == (tmp_path / "c.json").read_text()
        assert again.points.y.tolist() == [2.5, -1e-300]

    def test_csv_round_trip_exact(self, tmp_path):
        ps = generate(50, 3, 1)
        p = tmp_path / "g.csv"
        p.write_text(format_csv(ps))
        back = load_instance(p).points
        assert back.x.tolist() == ps.x.tolist() and back.w.tolist() == ps.w.tolist()


class TestFitOutput:
    def test_json_round_trip(self, stairs):
        inst = load_instance(stairs, k=2)
        out = FitOutput.from_report(k_step(inst.points, 2))
        text = out.to_json()
        assert FitOutput.from_json(text).to_json() == text

    def test_tsv(self, stairs):
        inst = load_instance(stairs, k=2)
        lines = FitOutput.from_report(k_step(inst.points, 2)).to_tsv().splitlines()
        assert lines[0] == "# cost=0.5" and lines[1] == "1.0\t2.5\t0.5"

    def test_svg(self, stairs):
        inst = load_instance(stairs, k=2)
        out = FitOutput.from_report(k_step(inst.points, 2))
        svg = render_svg(out, inst)
        assert svg.count('class="step"') == 2
        assert svg.count("<circle") == 4 and svg.count("critical") == 4
        assert render_svg(out, inst) == svg
        out.diagnostics = {}
        assert render_svg(out, inst).startswith("<svg")


class TestCli:
    def test_fit_json(self, stairs, capsys):
        assert run_cli(["fit", "--input", str(stairs), "--k", "2"]) == 0
        assert json.loads(capsys.readouterr().out)["cost"] == 0.5

    @pytest.mark.parametrize("fmt", ["tsv", "svg"])
    def test_fit_formats(self, stairs, tmp_path, fmt):
        out = tmp_path / f"o.{fmt}"
        assert run_cli(["fit", "--input", str(stairs), "--k", "2", "--format", fmt, "--out", str(out)]) == 0
        assert out.read_text()

    def test_fit_oracle_engine(self, stairs, capsys):
        assert run_cli(["fit", "--input", str(stairs), "--k", "3", "--engine", "oracle"]) == 0
        d = json.loads(capsys.readouterr().out)
        assert d["engine"] == "oracle" and d["k"] == 3

    def test_verify_generated(self, tmp_path, capsys):
        for seed in range(6):
            for profile in ("random", "staircase", "adversarial"):
                p = tmp_path / f"{profile}{seed}.csv"
                assert run_cli(["gen", "--n", "60", "--k", "3", "--seed", str(seed),
                                "--profile", profile, "--out", str(p)]) == 0
                assert run_cli(["verify", "--input", str(p), "--k", "3"]) == 0
        assert "agree" in capsys.readouterr().out

    def test_gen_deterministic(self, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        run_cli(["gen", "--n", "10", "--k", "2", "--seed", "7", "--out", str(a)])
        run_cli(["gen", "--n", "10", "--k", "2", "--seed", "7", "--out", str(b)])
        run_cli(["gen", "--n", "10", "--k", "2", "--seed", "8", "--out", str(c)])
        assert a.read_bytes() == b.read_bytes() != c.read_bytes()

    def test_bench(self, capsys):
        assert run_cli(["bench", "--k", "2", "--sizes", "200,400", "--trials", "2"]) == 0
        rows = capsys.readouterr().out.strip().splitlines()
        assert rows[-1].startswith("400\t")

    def test_usage_errors(self, stairs):
        assert run_cli(["nope"]) == 2
        assert run_cli(["fit", "--input", str(stairs), "--k", "2", "--bogus"]) == 2
        assert run_cli([]) == 2

    def test_bad_input_exit(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,0,-3\n")
        assert run_cli(["fit", "--input", str(p), "--k", "1"]) == 1

    def test_missing_k(self, stairs):
        assert run_cli(["fit", "--input", str(stairs)]) == 1

    def test_squared_model_flag(self, stairs, capsys):
        assert run_cli(["fit", "--input", str(stairs), "--k", "2", "--model", "squared"]) == 0
        assert json.loads(capsys.readouterr().out)["cost"] == 0.25


def test_instance_rejects_empty():
    from stepfit.core import PointSet
    with pytest.raises(InstanceError):
        Instance(PointSet.from_arrays([], [], []))
