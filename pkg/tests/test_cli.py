import csv
import io
import json
import math

import pytest

from dampedjc import cli
from dampedjc.config import ConfigError, RunConfig, parse_angle, parse_real
from dampedjc.numerics import IntegrationError

ONE_ATOM_DOC = {
    "name": "demo",
    "model": "one-atom",
    "params": {"Gamma": 1.0},
    "initial": {"c1": "sqrt(4/7)", "c2": "sqrt(3/7)", "theta": "0.5pi",
                "product": {"b1": "sqrt(3/7)", "b2": "sqrt(4/7)", "b2_phase": "pi/4"}},
    "grid": {"t_end": 2.0, "n_points": 5},
    "observables": ["trace_distance", "bound"],
    "output": {"format": "csv"},
}

TWO_ATOM_DOC = {
    "model": "two-atom",
    "params": {"Gamma": 6.0, "D": 0.5},
    "initial": {"c1": "sqrt(1/2)", "c2": "sqrt(1/10)", "c3": "sqrt(4/10)", "theta1": "pi"},
    "grid": {"t_end": 1.0, "n_points": 3},
}


@pytest.mark.parametrize("text, value", [
    ("0.5pi", 0.5 * math.pi),
    ("pi", math.pi),
    ("-pi", -math.pi),
    ("3pi/2", 1.5 * math.pi),
    ("pi/4", 0.25 * math.pi),
    ("1.5 * pi", 1.5 * math.pi),
    ("0", 0.0),
    (1.25, 1.25),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["abc", "pi/0", True, "nan"])
def test_parse_angle_rejects(text):
    with pytest.raises(ConfigError):
        parse_angle(text, "initial.theta")


def test_parse_real():
    assert parse_real("sqrt(4/7)", "x") == math.sqrt(4 / 7)
    assert parse_real("sqrt(0.5)", "x") == math.sqrt(0.5)
    assert parse_real(3, "x") == 3.0
    with pytest.raises(ConfigError, match="x"):
        parse_real("sqrt(-1)", "x")


class TestRunConfig:
    @pytest.mark.parametrize("doc", [ONE_ATOM_DOC, TWO_ATOM_DOC])
    def test_round_trip(self, doc):
        cfg = RunConfig.from_dict(doc)
        again = RunConfig.from_dict(json.loads(cfg.to_json()))
        assert again == cfg
        assert again.to_dict() == cfg.to_dict()

    def test_defaults(self):
        cfg = RunConfig.from_dict(TWO_ATOM_DOC)
        assert cfg.observables == ("concurrence",)
        assert cfg.output_format == "csv" and cfg.output_path is None

    @pytest.mark.parametrize("patch, field", [
        ({"model": "three-atom"}, "model"),
        ({"params": {"Gamma": -1.0}}, "params"),
        ({"params": {"gamma": 1.0}}, "params.gamma"),
        ({"initial": {"c1": 0.5}}, "initial.c2"),
        ({"initial": {"c1": 0.5, "c2": 0.5}}, "initial"),
        ({"grid": {"t_end": -1.0}}, "grid.t_end"),
        ({"grid": {"n_points": 1}}, "grid.n_points"),
        ({"observables": ["concurrence"]}, "observables"),
        ({"output": {"format": "xml"}}, "output.format"),
        ({"colour": "blue"}, "colour"),
    ])
    def test_validation_names_field(self, patch, field):
        doc = {**ONE_ATOM_DOC, **patch}
        with pytest.raises(ConfigError) as err:
            RunConfig.from_dict(doc)
        assert err.value.field == field
        assert field in str(err.value)

    def test_product_normalization(self):
        doc = json.loads(json.dumps(ONE_ATOM_DOC))
        doc["initial"]["product"]["b1"] = 1.0
        with pytest.raises(ConfigError, match="initial.product"):
            RunConfig.from_dict(doc)

    def test_to_scenario(self):
        s = RunConfig.from_dict(ONE_ATOM_DOC).to_scenario()
        assert s.name == "demo"
        assert s.grid.t_end == 2.0
        assert abs(s.series[0].product.b2) == pytest.approx(math.sqrt(4 / 7))


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestMain:
    def test_list(self, capsys):
        code, out, _ = run_cli(["list"], capsys)
        assert code == 0
        for name in ("fig1a", "fig2c", "fig3b"):
            assert name in out

    def test_run_csv_header(self, capsys):
        code, out, _ = run_cli(["run", "fig3b", "--format", "csv", "--t-end", "1",
                                "--grid-points", "3"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][:2] == ["omega_t", "concurrence_theta1_0"]
        assert len(rows) == 4

    def test_run_json(self, capsys):
        code, out, _ = run_cli(["run", "fig1a", "--format", "json", "--t-end", "1",
                                "--grid-points", "2"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["columns"][0] == "omega_t"
        assert doc["metadata"]["scenario"] == "fig1a"

    def test_run_unknown_scenario(self, capsys):
        code, _, err = run_cli(["run", "nosuch"], capsys)
        assert code == 1
        assert "nosuch" in err

    def test_run_config_file(self, tmp_path, capsys):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(ONE_ATOM_DOC))
        out_path = tmp_path / "table.csv"
        code, _, _ = run_cli(["run", str(path), "--out", str(out_path)], capsys)
        assert code == 0
        header = out_path.read_text().splitlines()[0]
        assert header == "omega_t,trace_distance_run,bound_run"

    def test_run_bad_config_names_field(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({**TWO_ATOM_DOC, "grid": {"n_points": 0}}))
        code, _, err = run_cli(["run", str(path)], capsys)
        assert code == 1
        assert "grid.n_points" in err

    def test_missing_config_file(self, tmp_path, capsys):
        code, _, err = run_cli(["run", str(tmp_path / "absent.json")], capsys)
        assert code == 1

    def test_sweep(self, capsys):
        code, out, _ = run_cli(["sweep", "--phase", "theta1", "--values", "0", "0.5pi", "pi",
                                "--t-end", "1", "--grid-points", "2"], capsys)
        assert code == 0
        assert out.splitlines()[0] == ("omega_t,concurrence_theta1_0,concurrence_theta1_0.5pi,"
                                       "concurrence_theta1_pi")

    def test_sweep_one_atom(self, capsys):
        code, out, _ = run_cli(["sweep", "--phase", "theta", "--values", "pi", "--t-end", "1",
                                "--grid-points", "2"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "omega_t,rescaled_corr_theta_pi,interference_theta_pi"

    def test_sweep_bad_value(self, capsys):
        code, _, err = run_cli(["sweep", "--phase", "theta2", "--values", "half"], capsys)
        assert code == 1
        assert "--values" in err

    def test_sweep_mismatched_phase(self, capsys):
        code, _, err = run_cli(["sweep", "--phase", "theta1", "--scenario", "fig1c",
                                "--values", "0"], capsys)
        assert code == 1

    def test_bad_flag_value(self, capsys):
        code, _, _ = run_cli(["run", "fig3a", "--grid-points", "1"], capsys)
        assert code == 1

    def test_integration_failure(self, monkeypatch, capsys):
        def fail(scenario, tol):
            raise IntegrationError("step size underflow", 3.25)

        monkeypatch.setattr(cli, "run_scenario", fail)
        code, _, err = run_cli(["run", "fig3a"], capsys)
        assert code == 2
        assert "fig3a" in err and "t=3.25" in err

    def test_selfcheck(self, capsys):
        code, out, _ = run_cli(["selfcheck"], capsys)
        lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
        assert code == 0
        assert len(lines) == 8
        assert all(ln.startswith("PASS") for ln in lines)
        assert any("typo" in ln for ln in lines)
