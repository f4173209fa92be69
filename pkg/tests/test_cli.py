import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

import dcaw.data as data
from dcaw.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def fixture_files(tmp_path):
    """Copies of the shipped fixture files on disk for CLI consumption."""
    from importlib import resources

    paths = {}
    for name in ("sample_model.json", "sample_citations.csv",
                 "case_study_defects.csv", "case_study_units.csv",
                 "case_study_effort.csv"):
        target = tmp_path / name
        target.write_text(resources.files("dcaw.data").joinpath(name).read_text())
        paths[name] = str(target)
    return paths


def coin_files(tmp_path):
    network = {
        "format": "dcaw-network", "version": 1, "name": "coin",
        "variables": [{"id": "coin", "name": "coin", "states": ["false", "true"]}],
        "cpds": [{"type": "cpt", "child": "coin", "parents": [], "rows": [[0.5, 0.5]]}],
    }
    net_path = tmp_path / "coin.json"
    net_path.write_text(json.dumps(network))
    records_path = tmp_path / "coin.csv"
    records_path.write_text("coin\ntrue\ntrue\nfalse\n\n")
    return str(net_path), str(records_path)


class TestLearn:
    def test_coin_fixture_prints_two_thirds(self, runner, tmp_path):
        net_path, records_path = coin_files(tmp_path)
        result = runner.invoke(main, [
            "learn", "--structure", net_path, "--records", records_path,
            "--alpha", "0", "--tol", "1e-10",
        ])
        assert result.exit_code == 0, result.output
        assert "0.6667" in result.output

    def test_learned_network_written(self, runner, tmp_path):
        net_path, records_path = coin_files(tmp_path)
        out = tmp_path / "learned.json"
        result = runner.invoke(main, [
            "learn", "--structure", net_path, "--records", records_path,
            "--alpha", "0", "-o", str(out),
        ])
        assert result.exit_code == 0
        doc = json.loads(out.read_text())
        p_true = doc["cpds"][0]["rows"][0][1]
        assert p_true == pytest.approx(2 / 3, abs=1e-4)

    def test_missing_inputs_exit_1(self, runner):
        result = runner.invoke(main, ["learn"])
        assert result.exit_code == 1

    def test_deterministic_output(self, runner, tmp_path):
        net_path, records_path = coin_files(tmp_path)
        args = ["learn", "--structure", net_path, "--records", records_path,
                "--alpha", "0.5", "--seed", "7"]
        a = runner.invoke(main, args)
        b = runner.invoke(main, args)
        assert a.output == b.output


class TestAnalyticsCommands:
    def test_uchart_prints_center_line(self, runner, fixture_files, tmp_path):
        chart_path = tmp_path / "chart.json"
        result = runner.invoke(main, [
            "uchart", "--defects", fixture_files["case_study_defects.csv"],
            "--units", fixture_files["case_study_units.csv"],
            "--iteration", "EL3", "--chart-data", str(chart_path),
        ])
        assert result.exit_code == 0, result.output
        assert "0.514" in result.output
        assert "out of control" in result.output
        chart = json.loads(chart_path.read_text())
        assert chart["center_line"] == pytest.approx(0.5144, abs=5e-4)
        assert any(p["flagged"] for p in chart["points"])

    def test_pareto(self, runner, fixture_files):
        result = runner.invoke(main, [
            "pareto", "--defects", fixture_files["case_study_defects.csv"],
            "--iteration", "EL3",
        ])
        assert result.exit_code == 0
        assert "omission" in result.output
        assert "total 214" in result.output

    def test_density(self, runner, fixture_files):
        result = runner.invoke(main, [
            "density", "--defects", fixture_files["case_study_defects.csv"],
            "--units", fixture_files["case_study_units.csv"],
            "--iteration", "EL1",
        ])
        assert result.exit_code == 0
        assert "1.0000" in result.output

    def test_efficiency(self, runner, fixture_files):
        result = runner.invoke(main, [
            "efficiency", "--defects", fixture_files["case_study_defects.csv"],
            "--effort", fixture_files["case_study_effort.csv"],
            "--iteration", "EL3",
        ])
        assert result.exit_code == 0
        assert "2.7792" in result.output


class TestModelCommands:
    def test_validate_model(self, runner, fixture_files):
        result = runner.invoke(main, ["validate-model", fixture_files["sample_model.json"]])
        assert result.exit_code == 0
        assert "5 problems" in result.output

    def test_validate_model_bad_document_exit_1(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        doc = data.sample_model_document()
        doc["problems"] = []
        bad.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate-model", str(bad)])
        assert result.exit_code == 1

    def test_compile(self, runner, fixture_files, tmp_path):
        out = tmp_path / "net.json"
        result = runner.invoke(main, [
            "compile", fixture_files["sample_model.json"], "-o", str(out)])
        assert result.exit_code == 0
        doc = json.loads(out.read_text())
        assert len(doc["variables"]) == 35


class TestDiagnoseParity:
    def test_cli_matches_http_body(self, runner, fixture_files, tmp_path):
        """CLI diagnose and the HTTP diagnose endpoint share the core, so
        identical inputs produce identical bodies."""
        from dcaw.service.api import create_app
        from dcaw.service.jobs import JobRunner
        from dcaw.service.store import Store

        # train a small version over HTTP
        store = Store(tmp_path / "store")
        client = TestClient(create_app(store, jobs=JobRunner(synchronous=True)))
        version_id = client.post("/models", json=data.sample_model_document()).json()["version_id"]
        citations = data.sample_citations()[:20]
        job = client.post(f"/versions/{version_id}/train", json={
            "citations": [
                {"problem_id": c.problem_id, "cited_causes": sorted(c.cited_causes),
                 "cited_effects": sorted(c.cited_effects), "source": c.source}
                for c in citations
            ],
            "config": {"max_iterations": 20, "tolerance": 1e-3,
                       "pseudo_count": 1.0, "seed": 3},
            "restarts": 1,
        }).json()
        trained_id = client.get(f"/jobs/{job['job_id']}").json()["result"]["version_id"]

        http_body = client.post("/diagnose", json={
            "version_id": trained_id,
            "problem_id": "incomplete_hidden_requirements",
            "evidence": {"missing_qualification": "false"},
        }).json()

        # write the trained network to a file and diagnose via the CLI
        net_doc = client.get(
            f"/versions/{trained_id}", params={"include_network": "true"}
        ).json()["network"]
        net_path = tmp_path / "trained.json"
        net_path.write_text(json.dumps(net_doc))
        result = runner.invoke(main, [
            "diagnose", "--model", fixture_files["sample_model.json"],
            "--network", str(net_path),
            "--problem", "incomplete_hidden_requirements",
            "--evidence", "missing_qualification=false",
        ])
        assert result.exit_code == 0, result.output
        cli_body = json.loads(result.output)
        assert cli_body == http_body

    def test_unknown_problem_exit_1(self, runner, fixture_files, tmp_path):
        out = tmp_path / "net.json"
        runner.invoke(main, ["compile", fixture_files["sample_model.json"], "-o", str(out)])
        result = runner.invoke(main, [
            "diagnose", "--model", fixture_files["sample_model.json"],
            "--network", str(out), "--problem", "ghost",
        ])
        assert result.exit_code == 1
