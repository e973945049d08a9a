"""Editable prompt templates, shipped as versioned files.

Templates live beside the code as plain files so wording can change
without touching any logic. Text templates carry a "version: N" header
followed by "---"; the integration examples are a JSON document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import FormatError

TEMPLATE_DIR = Path(__file__).parent / "templates"


def _read_template(path: Path) -> str:
    raw = path.read_text(encoding="utf-8")
    if "---" not in raw:
        raise FormatError(f"template {path} is missing the version header")
    header, body = raw.split("---", 1)
    if "version:" not in header:
        raise FormatError(f"template {path} is missing a version line")
    return body.strip()


@dataclass
class TemplateSet:
    ideation: str            # expects a {subject} placeholder
    reask_subjects: str
    style_preamble: str
    style_zero_shot: str
    reask_style: str
    integration_preamble: str
    integration_examples: list[dict]

    @classmethod
    def load(cls, directory: str | Path) -> "TemplateSet":
        directory = Path(directory)
        integration = json.loads(
            (directory / "integration.json").read_text(encoding="utf-8")
        )
        if integration.get("version") != 1:
            raise FormatError("integration.json has an unsupported version")
        examples = integration["examples"]
        subject_focused = sum(1 for e in examples if e.get("focus") == "subject")
        if len(examples) != 8 or subject_focused != 4:
            raise FormatError(
                "integration.json must ship 8 examples, 4 subject-focused and 4 style-focused"
            )
        return cls(
            ideation=_read_template(directory / "ideation.txt"),
            reask_subjects=_read_template(directory / "reask_subjects.txt"),
            style_preamble=_read_template(directory / "style_preamble.txt"),
            style_zero_shot=_read_template(directory / "style_zero_shot.txt"),
            reask_style=_read_template(directory / "reask_style.txt"),
            integration_preamble=str(integration["preamble"]),
            integration_examples=examples,
        )


def load_default_templates() -> TemplateSet:
    return TemplateSet.load(TEMPLATE_DIR)
