import json

import pytest

from fkpath import cli


GARCH_MODEL = {
    "family": "garch_beta0",
    "alpha": [1.0, 1.05],
    "gamma": [0.05, 0.1],
    "transition": [[0.7, 0.3], [0.4, 0.6]],
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def base_config(tmp_path, **over):
    doc = {
        "model": dict(GARCH_MODEL),
        "scenario": "truncation_gap",
        "horizon": 6,
        "truncation_depths": [2, 3],
        "replications": 1,
        "seed": 7,
        "output": str(tmp_path / "out.csv"),
    }
    doc.update(over)
    return doc


class TestValidateConfig:
    def test_missing_model_field(self):
        with pytest.raises(cli.ConfigError) as exc:
            cli.validate_config(json.dumps({"scenario": "truncation_gap"}))
        assert any("model: missing required field" in d for d in exc.value.diagnostics)

    def test_gamma_out_of_range(self, tmp_path):
        doc = base_config(tmp_path)
        doc["model"]["gamma"] = [0.05, 1.0]
        with pytest.raises(cli.ConfigError) as exc:
            cli.validate_config(json.dumps(doc))
        assert any(
            "model.gamma[1]: require 0 <= gamma < 1 (gamma_max < 1)" in d
            for d in exc.value.diagnostics
        )

    def test_bad_transition_rows(self, tmp_path):
        doc = base_config(tmp_path)
        doc["model"]["transition"] = [[0.7, 0.2], [0.4, 0.6]]
        with pytest.raises(cli.ConfigError) as exc:
            cli.validate_config(json.dumps(doc))
        assert any("probability vectors" in d for d in exc.value.diagnostics)

    def test_multiple_diagnostics_reported_together(self):
        doc = {"model": {"family": "nope"}, "horizon": 0}
        with pytest.raises(cli.ConfigError) as exc:
            cli.validate_config(json.dumps(doc))
        assert len(exc.value.diagnostics) >= 3

    def test_invalid_json(self):
        with pytest.raises(cli.ConfigError) as exc:
            cli.validate_config("{not json")
        assert any("invalid JSON" in d for d in exc.value.diagnostics)

    def test_budget_guard_for_exact_oracle_scenarios(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FKPATH_ORACLE_BUDGET", "16")
        doc = base_config(tmp_path, horizon=6)
        with pytest.raises(cli.ConfigError) as exc:
            cli.validate_config(json.dumps(doc))
        assert any("enumeration budget" in d for d in exc.value.diagnostics)


class TestAutoDepths:
    def test_auto_depth_from_constants(self, tmp_path, capsys):
        doc = base_config(
            tmp_path,
            scenario="convergence_in_N",
            particle_counts=[10**4],
            truncation_depths="auto",
            constants={"c": 1.1, "phi": 1.0, "tau": 0.5},
        )
        rc = cli.main(["validate", write_config(tmp_path, doc)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "N=10000: p=7" in out


class TestRunScenarios:
    def test_truncation_gap_rows_and_exit(self, tmp_path):
        doc = base_config(tmp_path)
        rc = cli.main(["run", write_config(tmp_path, doc)])
        assert rc == 0
        lines = (tmp_path / "out.csv").read_text().splitlines()
        assert lines[0] == cli.CSV_HEADER
        data = [ln.split(",") for ln in lines[1:] if ln.split(",")[6] == "truncation_gap"]
        assert data
        for row in data:
            assert float(row[7]) <= float(row[8]) + cli.GATE_TOLERANCE

    def test_run_is_deterministic(self, tmp_path):
        doc = base_config(
            tmp_path,
            scenario="coupling_check",
            horizon=5,
            particle_counts=[400],
            truncation_depths=[2],
        )
        path = write_config(tmp_path, doc)
        assert cli.main(["run", path]) == 0
        first = (tmp_path / "out.csv").read_bytes()
        assert cli.main(["run", path]) == 0
        assert (tmp_path / "out.csv").read_bytes() == first

    def test_seed_override_changes_output(self, tmp_path):
        doc = base_config(
            tmp_path,
            scenario="coupling_check",
            horizon=5,
            particle_counts=[400],
            truncation_depths=[2],
        )
        path = write_config(tmp_path, doc)
        assert cli.main(["run", path]) == 0
        first = (tmp_path / "out.csv").read_bytes()
        assert cli.main(["run", path, "--seed", "99"]) == 0
        assert (tmp_path / "out.csv").read_bytes() != first

    def test_convergence_scenario_emits_slope(self, tmp_path, capsys):
        doc = base_config(
            tmp_path,
            scenario="convergence_in_N",
            horizon=5,
            particle_counts=[100, 1000],
            truncation_depths=[2],
            replications=5,
        )
        assert cli.main(["run", write_config(tmp_path, doc)]) == 0
        assert "slope" in capsys.readouterr().out
        assert "tv_error" in (tmp_path / "out.csv").read_text()

    def test_exit_one_on_bad_config(self, tmp_path, capsys):
        doc = base_config(tmp_path)
        doc["model"]["gamma"] = [0.05, 2.0]
        rc = cli.main(["run", write_config(tmp_path, doc)])
        assert rc == 1
        assert "config error" in capsys.readouterr().err

    def test_exit_one_on_missing_file(self, capsys):
        assert cli.main(["run", "/nonexistent/config.json"]) == 1
        assert "config error" in capsys.readouterr().err


class TestBoundsSubcommand:
    def test_prints_report(self, tmp_path, capsys):
        doc = base_config(
            tmp_path,
            scenario="bound_vs_empirical",
            particle_counts=[10**4],
            truncation_depths=[3],
        )
        rc = cli.main(["bounds", write_config(tmp_path, doc)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "theorem=" in out
        assert "corollary=" in out
        assert "feasible=" in out


class TestFormatting:
    def test_seventeen_significant_digits(self):
        assert cli._fmt(1.0 / 3.0) == f"{1.0 / 3.0:.17g}"
        assert float(cli._fmt(0.1 + 0.2)) == 0.1 + 0.2

    def test_header_exact(self):
        assert cli.CSV_HEADER == "scenario,model,n,N,p,rep,metric,value,bound,seed"
