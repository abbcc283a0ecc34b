import json
import os

import pytest
from click.testing import CliRunner

from phylomemy.cli import main
from synthgen import planted_corpus_csv


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def corpus(tmp_path):
    corpus_path, roots_path, _ = planted_corpus_csv(
        str(tmp_path / "corpus.csv"), topics=2, periods=4, docs_per_period=6
    )
    return corpus_path, roots_path


def _write_config(tmp_path, corpus_path, roots_path, extra=""):
    path = tmp_path / "build.toml"
    path.write_text(
        f'corpus = "{corpus_path}"\n'
        f'rootlist = "{roots_path}"\n'
        'unit = "year"\n'
        f'output = "{tmp_path / "out.json"}"\n'
        + extra
    )
    return str(path)


class TestValidate:
    def test_valid_config_prints_ok(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(main, ["validate", config])
        assert result.exit_code == 0
        assert result.output.strip() == "ok"

    def test_zero_min_periods_is_named(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus, extra="min_periods = 0\n")
        result = runner.invoke(main, ["validate", config])
        assert result.exit_code == 1
        assert "min_periods must be >= 1" in result.output

    def test_missing_corpus_path_is_named(self, runner, corpus, tmp_path):
        _, roots_path = corpus
        config = _write_config(tmp_path, str(tmp_path / "absent.csv"), roots_path)
        result = runner.invoke(main, ["validate", config])
        assert result.exit_code == 1
        assert "absent.csv" in result.output

    def test_unknown_key_rejected(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus, extra="mystery_knob = 3\n")
        result = runner.invoke(main, ["validate", config])
        assert result.exit_code == 1
        assert "mystery_knob" in result.output


class TestBuild:
    def test_build_writes_export(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(main, ["build", "--config", config])
        assert result.exit_code == 0, result.output
        out = str(tmp_path / "out.json")
        assert result.output.strip() == out
        with open(out, encoding="utf-8") as fh:
            projection = json.load(fh)
        assert projection["metadata"]["branch_count"] == 2
        assert projection["metadata"]["level"] == 0.5

    def test_invalid_level_rejected_before_any_work(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(main, ["build", "--config", config, "--level", "1.5"])
        assert result.exit_code == 2
        assert "level" in result.output
        assert not os.path.exists(tmp_path / "out.json")

    def test_multi_level_build_suffixes_outputs(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(
            main, ["build", "--config", config, "--level", "0.0", "--level", "1.0"]
        )
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines == [
            str(tmp_path / "out_level0.00.json"),
            str(tmp_path / "out_level1.00.json"),
        ]
        for line in lines:
            assert os.path.exists(line)

    def test_flags_override_config(self, runner, corpus, tmp_path):
        other = tmp_path / "flagged.json"
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(
            main,
            ["build", "--config", config, "--output", str(other), "--edge-threshold", "0.2"],
        )
        assert result.exit_code == 0, result.output
        assert os.path.exists(other)
        with open(other, encoding="utf-8") as fh:
            assert json.load(fh)["metadata"]["config"]["edge_threshold"] == 0.2

    def test_missing_required_paths_exit_2(self, runner):
        result = runner.invoke(main, ["build"])
        assert result.exit_code == 2
        assert "corpus" in result.output


class TestInspect:
    @pytest.fixture()
    def export_path(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(main, ["build", "--config", config])
        assert result.exit_code == 0, result.output
        return result.output.strip()

    def test_branch_report(self, runner, export_path):
        with open(export_path, encoding="utf-8") as fh:
            branch_id = json.load(fh)["branches"][0]["id"]
        result = runner.invoke(main, ["inspect", export_path, "--branch", branch_id])
        assert result.exit_code == 0
        assert f"branch {branch_id}" in result.output
        assert "groups" in result.output

    def test_term_report(self, runner, export_path):
        result = runner.invoke(main, ["inspect", export_path, "--term", "t0w0"])
        assert result.exit_code == 0
        assert "term t0w0" in result.output
        assert "T000 .. T003" in result.output

    def test_absent_term_fails(self, runner, export_path):
        result = runner.invoke(main, ["inspect", export_path, "--term", "zzz"])
        assert result.exit_code == 1
        assert "not found" in result.output

    def test_no_selector_fails(self, runner, export_path):
        result = runner.invoke(main, ["inspect", export_path])
        assert result.exit_code == 2


class TestReport:
    def test_figures_and_tables_written(self, runner, corpus, tmp_path):
        config = _write_config(tmp_path, *corpus)
        result = runner.invoke(main, ["build", "--config", config])
        assert result.exit_code == 0, result.output
        export_path = result.output.strip()
        outdir = tmp_path / "report"
        result = runner.invoke(main, ["report", export_path, "--outdir", str(outdir)])
        assert result.exit_code == 0, result.output
        names = {os.path.basename(p) for p in result.output.strip().splitlines()}
        assert names == {"branches.csv", "terms.csv", "seabed.png", "kinship.png"}
        for name in names:
            assert (outdir / name).stat().st_size > 0

    def test_report_on_missing_export_fails(self, runner, tmp_path):
        result = runner.invoke(main, ["report", str(tmp_path / "nope.json")])
        assert result.exit_code == 1
