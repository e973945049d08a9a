"""Command line interface.

Mirrors every HTTP endpoint for headless runs, plus corpus tooling, layout
export, the figure-rendering report path, and the one-shot `pipeline run`
workflow on mock providers.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .config import build_service, load_config
from .corpus import ingest as corpus_ingest
from .corpus import knn, load_corpus, read_prompt_jsonl, save_corpus
from .embeddings import StubEmbeddingProvider
from .errors import PromptcanvasError
from .report import write_session_report
from .session.persistence import load_session


@click.group()
@click.version_option(version=__version__, prog_name="promptcanvas")
def main():
    """Prompt workbench for text-to-image generation."""


def _service(data_dir: str, config: str | None):
    return build_service(data_dir, load_config(config))


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


# ---------------------------------------------------------------- corpus

@main.group()
def corpus():
    """Ingest and query the prompt corpus."""


@corpus.command("ingest")
@click.option("--in", "input_path", required=True, type=click.Path(exists=True),
              help="JSONL input: one {id, text, nsfw_score} object per line.")
@click.option("--out", "output_path", required=True,
              help="Output base path (writes <base>.jsonl + <base>.npy).")
@click.option("--nsfw", default=0.1, show_default=True,
              help="Keep records with nsfw_score <= this value.")
@click.option("--min-segments", default=6, show_default=True,
              help="Keep records with at least this many comma segments.")
@click.option("--stub-seed", default=0, show_default=True)
@click.option("--stub-dim", default=64, show_default=True)
def corpus_ingest_cmd(input_path, output_path, nsfw, min_segments, stub_seed, stub_dim):
    """Filter, embed, and persist a prompt corpus."""
    provider = StubEmbeddingProvider(dimension=stub_dim, seed=stub_seed)
    filtered = corpus_ingest(
        read_prompt_jsonl(input_path), provider=provider,
        nsfw_threshold=nsfw, min_segments=min_segments,
    )
    save_corpus(filtered, output_path)
    report = filtered.ingest_report
    click.echo(
        f"kept {report.survivors} of {report.seen} records "
        f"(nsfw rejected {report.rejected_nsfw}, too few segments "
        f"{report.rejected_segments}, malformed {report.skipped_malformed})"
    )
    click.echo(f"wrote {output_path}.jsonl + {output_path}.npy")


@corpus.command("query")
@click.option("--corpus", "corpus_path", required=True,
              help="Base path of a persisted corpus.")
@click.option("--text", required=True, help="Atomic style to search for.")
@click.option("--k", default=10, show_default=True)
@click.option("--stub-seed", default=0, show_default=True)
@click.option("--stub-dim", default=64, show_default=True)
def corpus_query_cmd(corpus_path, text, k, stub_seed, stub_dim):
    """KNN retrieval of the most similar corpus prompts."""
    filtered = load_corpus(corpus_path)
    provider = StubEmbeddingProvider(dimension=stub_dim, seed=stub_seed)
    query = provider.embed_text(text)
    for record_id, similarity in knn(filtered, query, k=k):
        record = filtered.record_by_id(record_id)
        click.echo(f"{similarity:.4f}  {record_id}  {record.text}")


# ---------------------------------------------------------------- session

@main.group()
def session():
    """Headless session operations (mirror of the HTTP API)."""


_data_dir_option = click.option(
    "--data-dir", default="promptcanvas-data", show_default=True,
    help="Directory holding session subdirectories.",
)
_config_option = click.option(
    "--config", default=None, type=click.Path(exists=True),
    help="Provider config JSON (defaults to offline stubs).",
)


@session.command("create")
@_data_dir_option
@_config_option
def session_create(data_dir, config):
    svc = _service(data_dir, config)
    created = svc.new_session()
    click.echo(created.id)


@session.command("show")
@click.argument("session_id")
@_data_dir_option
@_config_option
def session_show(session_id, data_dir, config):
    _echo_json(_service(data_dir, config).session_state(session_id))


@session.command("ideate")
@click.argument("session_id")
@click.option("--subject", required=True)
@_data_dir_option
@_config_option
def session_ideate(session_id, subject, data_dir, config):
    _echo_json(_service(data_dir, config).ideate(session_id, subject))


@session.command("steer")
@click.argument("session_id")
@click.option("--instruction", required=True)
@_data_dir_option
@_config_option
def session_steer(session_id, instruction, data_dir, config):
    _echo_json(_service(data_dir, config).steer(session_id, instruction))


@session.command("extend-style")
@click.argument("session_id")
@click.option("--style", "atomic_style", required=True)
@click.option("--subject-index", type=int, default=None)
@click.option("--subject", default=None)
@_data_dir_option
@_config_option
def session_extend(session_id, atomic_style, subject_index, subject, data_dir, config):
    _echo_json(_service(data_dir, config).extend_style(
        session_id, atomic_style, subject_index=subject_index, subject=subject,
    ))


@session.command("generate")
@click.argument("session_id")
@click.option("--prompt", required=True)
@click.option("--negative", "negative_prompt", default="")
@click.option("--batch", "batch_size", default=10, show_default=True)
@click.option("--seed", type=int, default=None)
@_data_dir_option
@_config_option
def session_generate(session_id, prompt, negative_prompt, batch_size, seed,
                     data_dir, config):
    _echo_json(_service(data_dir, config).generate(
        session_id, prompt, negative_prompt=negative_prompt,
        batch_size=batch_size, seed=seed,
    ))


@session.command("toggle")
@click.argument("session_id")
@click.argument("prompt_id")
@click.option("--visible/--hidden", default=True)
@_data_dir_option
@_config_option
def session_toggle(session_id, prompt_id, visible, data_dir, config):
    _echo_json(_service(data_dir, config).set_prompt_visibility(
        session_id, prompt_id, visible,
    ))


@session.command("menu")
@click.argument("session_id")
@click.argument("image_id")
@_data_dir_option
@_config_option
def session_menu(session_id, image_id, data_dir, config):
    _echo_json(_service(data_dir, config).menu(session_id, image_id))


@session.command("integrate")
@click.argument("session_id")
@click.option("--modifier", required=True)
@click.option("--prompt", default=None)
@_data_dir_option
@_config_option
def session_integrate(session_id, modifier, prompt, data_dir, config):
    _echo_json(_service(data_dir, config).integrate(
        session_id, modifier, prompt=prompt,
    ))


@session.command("validate")
@click.argument("session_id")
@_data_dir_option
@_config_option
def session_validate(session_id, data_dir, config):
    problems = _service(data_dir, config).validate(session_id)
    if problems:
        for problem in problems:
            click.echo(f"INVALID: {problem}")
        sys.exit(1)
    click.echo("session is valid")


# ---------------------------------------------------------------- layout

@main.group()
def layout():
    """Layout export."""


@layout.command("export")
@click.argument("session_id")
@click.option("--scale", type=float, default=None)
@click.option("--out", "out_path", default=None,
              help="Write JSON here instead of stdout.")
@_data_dir_option
@_config_option
def layout_export(session_id, scale, out_path, data_dir, config):
    """Export the layout wire JSON ({images, clusters, scale})."""
    wire = _service(data_dir, config).layout(session_id, scale=scale)
    if out_path:
        Path(out_path).write_text(json.dumps(wire, indent=2), encoding="utf-8")
        click.echo(f"wrote {out_path}")
    else:
        _echo_json(wire)


# ---------------------------------------------------------------- report

@main.command("report")
@click.argument("session_dir", type=click.Path(exists=True))
@click.option("--out", "out_dir", default=None,
              help="Output directory [default: <session_dir>/report].")
@click.option("--scale", type=float, default=None)
def report_cmd(session_dir, out_dir, scale):
    """Render layout figures (PNG) and delimited exports (CSV)."""
    loaded = load_session(session_dir)
    out_dir = out_dir or str(Path(session_dir) / "report")
    manifest = write_session_report(loaded, out_dir, scale=scale)
    for key, value in manifest.items():
        click.echo(f"{key}: {value}")


# ---------------------------------------------------------------- serve

@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True)
@_data_dir_option
@_config_option
def serve_cmd(host, port, data_dir, config):
    """Run the HTTP JSON API."""
    import uvicorn

    from .session.api import create_app

    app = create_app(_service(data_dir, config))
    uvicorn.run(app, host=host, port=port)


# ---------------------------------------------------------------- pipeline

@main.group()
def pipeline():
    """End-to-end workflows."""


@pipeline.command("run")
@click.option("--subject", required=True)
@click.option("--style", required=True)
@click.option("--batch", "batch_size", default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_data_dir_option
@_config_option
def pipeline_run(subject, style, batch_size, seed, data_dir, config):
    """Full workflow: ideate, extend style, generate, layout, menus, integrate."""
    svc = _service(data_dir, config)
    result = svc.pipeline_run(subject, style, batch_size=batch_size, seed=seed)
    for step in result["steps"]:
        click.echo(f"- {step}")
    if result["validation_problems"]:
        for problem in result["validation_problems"]:
            click.echo(f"INVALID: {problem}")
        sys.exit(1)
    click.echo(f"session: {result['session_id']} ({result['session_dir']})")
    click.echo(f"final prompt: {result['prompt']}")


def run():  # console entry point with friendly error surface
    try:
        main(standalone_mode=True)
    except PromptcanvasError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    run()
