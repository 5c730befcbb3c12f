"""CLI: run, resume, inspect, export; exit codes per contract."""

from __future__ import annotations

import json
from pathlib import Path

from click.testing import CliRunner

from conftest import TOPIC
from ideapipe.cli import main


def invoke(args, **kwargs):
    return CliRunner().invoke(main, args, **kwargs)


class TestRun:
    def test_scripted_run_exits_zero_and_prints_portfolio_path(self, tmp_path):
        result = invoke(["run", "--topic", TOPIC, "--backend", "scripted",
                         "--out", str(tmp_path), "--seed", "0"])
        assert result.exit_code == 0, result.stderr
        portfolio_path = Path(result.stdout.strip())
        assert portfolio_path.name == "reviewing_portfolio.json"
        assert portfolio_path.exists()
        payload = json.loads(portfolio_path.read_text())
        assert len(payload["portfolio"]["selected_ids"]) == 3
        # events streamed to stderr, portfolio path alone on stdout
        assert "phase curating started" in result.stderr
        assert result.stdout.strip().count("\n") == 0

    def test_missing_topic_is_usage_error(self, tmp_path):
        result = invoke(["run", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_unknown_backend_is_usage_error(self, tmp_path):
        result = invoke(["run", "--topic", TOPIC, "--backend", "imaginary",
                         "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_config_file_with_flag_overrides(self, tmp_path):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"num_ideas": 3, "rng_seed": 5}))
        result = invoke(["run", "--topic", TOPIC, "--backend", "scripted",
                        "--config", str(config_path), "--seed", "0",
                         "--out", str(tmp_path / "state")])
        assert result.exit_code == 0, result.stderr


class TestResume:
    def test_resume_nonexistent_session_exits_one(self, tmp_path):
        result = invoke(["resume", "s-missing", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "no session state" in result.stderr

    def test_resume_completed_session_reports_portfolio(self, tmp_path):
        first = invoke(["run", "--topic", TOPIC, "--backend", "scripted",
                        "--out", str(tmp_path)])
        assert first.exit_code == 0
        session_id = sorted((tmp_path / "sessions").iterdir())[0].name
        result = invoke(["resume", session_id, "--out", str(tmp_path)])
        assert result.exit_code == 0
        assert result.stdout.strip().endswith("reviewing_portfolio.json")


class TestInspectExport:
    def test_inspect_lists_phase_artifacts(self, tmp_path):
        invoke(["run", "--topic", TOPIC, "--backend", "scripted", "--out", str(tmp_path)])
        session_id = sorted((tmp_path / "sessions").iterdir())[0].name
        result = invoke(["inspect", session_id, "--out", str(tmp_path),
                         "--phase", "curating"])
        assert result.exit_code == 0
        summary = json.loads(result.stdout)
        assert summary["phase"] == "completed"
        assert all(name.startswith("curating_") for name in summary["artifacts"])
        assert summary["artifacts"]

    def test_export_copies_artifacts_and_manifest(self, tmp_path):
        invoke(["run", "--topic", TOPIC, "--backend", "scripted", "--out", str(tmp_path)])
        session_id = sorted((tmp_path / "sessions").iterdir())[0].name
        dest = tmp_path / "exported"
        result = invoke(["export", session_id, "--dest", str(dest),
                         "--out", str(tmp_path)])
        assert result.exit_code == 0
        assert (dest / "manifest.json").exists()
        source = tmp_path / "sessions" / session_id / "artifacts" / "reviewing_portfolio.json"
        assert (dest / "reviewing_portfolio.json").read_bytes() == source.read_bytes()
