from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from promptcanvas.cli import main
from promptcanvas.session.service import SAMPLE_CORPUS_PATH


@pytest.fixture
def runner():
    return CliRunner()


def make_input_jsonl(path: Path, n: int = 40) -> None:
    rows = []
    for i in range(n):
        segments = 4 + (i % 6)
        text = ", ".join(f"seg {i} {j}" for j in range(segments))
        nsfw = 0.05 if i % 3 else 0.5
        rows.append(json.dumps({"id": f"x{i:03d}", "text": text,
                                "nsfw_score": nsfw}))
    path.write_text("\n".join(rows) + "\n")


class TestCorpusCommands:
    def test_ingest_and_query(self, runner, tmp_path):
        source = tmp_path / "in.jsonl"
        make_input_jsonl(source)
        result = runner.invoke(main, [
            "corpus", "ingest", "--in", str(source),
            "--out", str(tmp_path / "corpus"),
            "--nsfw", "0.1", "--min-segments", "6",
        ])
        assert result.exit_code == 0, result.output
        assert "kept" in result.output
        assert (tmp_path / "corpus.jsonl").exists()
        assert (tmp_path / "corpus.npy").exists()

        query = runner.invoke(main, [
            "corpus", "query", "--corpus", str(tmp_path / "corpus"),
            "--text", "seg 7",
            "--k", "3",
        ])
        assert query.exit_code == 0, query.output
        assert len(query.output.strip().splitlines()) == 3


class TestPipelineAndSessionCommands:
    def test_pipeline_then_mirrored_commands(self, runner, tmp_path):
        data_dir = str(tmp_path / "data")
        result = runner.invoke(main, [
            "pipeline", "run", "--subject", "Lion", "--style", "studio ghibli",
            "--batch", "6", "--data-dir", data_dir,
        ])
        assert result.exit_code == 0, result.output
        assert "final prompt:" in result.output
        session_id = [ln for ln in result.output.splitlines()
                      if ln.startswith("session:")][0].split()[1]

        validate = runner.invoke(main, ["session", "validate", session_id,
                                        "--data-dir", data_dir])
        assert validate.exit_code == 0, validate.output
        assert "valid" in validate.output

        show = runner.invoke(main, ["session", "show", session_id,
                                    "--data-dir", data_dir])
        assert show.exit_code == 0
        state = json.loads(show.output)
        assert len(state["batches"][0]["images"]) == 6

        export = runner.invoke(main, [
            "layout", "export", session_id, "--data-dir", data_dir,
            "--scale", "2.0", "--out", str(tmp_path / "layout.json"),
        ])
        assert export.exit_code == 0, export.output
        wire = json.loads((tmp_path / "layout.json").read_text())
        assert set(wire.keys()) >= {"images", "clusters", "scale"}
        assert wire["scale"] == 2.0

        toggle = runner.invoke(main, [
            "session", "toggle", session_id, "p1", "--hidden",
            "--data-dir", data_dir,
        ])
        assert toggle.exit_code == 0
        assert json.loads(toggle.output)["images"] == []

    def test_create_ideate_generate_headless(self, runner, tmp_path):
        data_dir = str(tmp_path / "data")
        created = runner.invoke(main, ["session", "create", "--data-dir", data_dir])
        assert created.exit_code == 0, created.output
        session_id = created.output.strip()

        ideate = runner.invoke(main, [
            "session", "ideate", session_id, "--subject", "a heron",
            "--data-dir", data_dir,
        ])
        assert ideate.exit_code == 0, ideate.output
        assert len(json.loads(ideate.output)["suggestions"]) == 3

        generate = runner.invoke(main, [
            "session", "generate", session_id, "--prompt", "a heron, ink wash",
            "--batch", "3", "--seed", "4", "--data-dir", data_dir,
        ])
        assert generate.exit_code == 0, generate.output
        body = json.loads(generate.output)
        assert body["prompt_id"] == "p1"
        assert len(body["image_ids"]) == 3

        menu = runner.invoke(main, [
            "session", "menu", session_id, body["image_ids"][0],
            "--data-dir", data_dir,
        ])
        assert menu.exit_code == 0, menu.output
        assert json.loads(menu.output)["image_modifiers"]

        integrate = runner.invoke(main, [
            "session", "integrate", session_id, "--modifier", "soft lighting",
            "--data-dir", data_dir,
        ])
        assert integrate.exit_code == 0, integrate.output
        assert "soft lighting" in json.loads(integrate.output)["merged"]


class TestReportCommand:
    def test_report_writes_figures_and_csv(self, runner, tmp_path):
        data_dir = str(tmp_path / "data")
        result = runner.invoke(main, [
            "pipeline", "run", "--subject", "Fox", "--style", "watercolor",
            "--batch", "5", "--data-dir", data_dir,
        ])
        assert result.exit_code == 0, result.output
        session_dir = next(Path(data_dir).iterdir())

        report = runner.invoke(main, ["report", str(session_dir)])
        assert report.exit_code == 0, report.output
        out = session_dir / "report"
        assert (out / "layout.csv").exists()
        assert (out / "clusters.csv").exists()
        assert (out / "layout.png").stat().st_size > 1000
        assert (out / "minimap.png").stat().st_size > 500
        rows = (out / "layout.csv").read_text().strip().splitlines()
        assert len(rows) == 1 + 5  # header + five images


class TestSampleCorpus:
    def test_bundled_sample_is_wellformed(self):
        lines = Path(SAMPLE_CORPUS_PATH).read_text().strip().splitlines()
        assert len(lines) == 2000
        for line in lines[:50]:
            record = json.loads(line)
            assert set(record.keys()) == {"id", "text", "nsfw_score"}
