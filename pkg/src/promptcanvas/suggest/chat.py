"""Chat completion providers.

Three kinds: a remote HTTP client ({"messages": [{role, content}, ...]}),
a transcript fixture that replays recorded exchanges keyed by request hash
and fails loudly on anything unrecorded, and a deterministic stub that
synthesizes plausible responses so the whole workbench runs offline.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .._http import TOKEN_ENV, post_json
from ..errors import FixtureMissError, FormatError, ProviderError

Message = dict  # {"role": str, "content": str}

FIXTURE_FORMAT = "promptcanvas-chat-fixture"
FIXTURE_VERSION = 1


@dataclass
class ChatExchange:
    """One request/response pair, as logged into session transcripts."""

    kind: str
    messages: list[Message]
    response: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "messages": self.messages, "response": self.response}

    @classmethod
    def from_dict(cls, raw: dict) -> "ChatExchange":
        return cls(kind=str(raw["kind"]), messages=list(raw["messages"]),
                   response=str(raw["response"]))


def canonical_request_hash(messages: list[Message]) -> str:
    """Stable key for a messages list: sha256 of its canonical JSON."""
    canon = json.dumps(messages, sort_keys=True, separators=(",", ":"),
                       ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class ChatProvider:
    kind = "abstract"

    def complete(self, messages: list[Message], temperature: float | None = None) -> str:
        raise NotImplementedError


class HttpChatProvider(ChatProvider):
    """Remote chat endpoint; API key via environment variable."""

    kind = "remote_http"

    def __init__(self, endpoint: str, model_id: str, temperature: float = 0.7,
                 token_env: str = TOKEN_ENV):
        self.endpoint = endpoint
        self.model_id = model_id
        self.temperature = temperature
        self.token_env = token_env

    def complete(self, messages: list[Message], temperature: float | None = None) -> str:
        payload = {
            "model": self.model_id,
            "temperature": self.temperature if temperature is None else temperature,
            "messages": messages,
        }
        body = post_json(self.endpoint, payload, self.token_env)
        # tolerate the two shapes seen in the wild
        try:
            if "choices" in body:
                return str(body["choices"][0]["message"]["content"])
            return str(body["message"]["content"])
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed chat response: {body!r}") from exc


class TranscriptFixtureProvider(ChatProvider):
    """Replays recorded exchanges; unrecorded queries raise FixtureMissError."""

    kind = "transcript_fixture"

    def __init__(self):
        self.exchanges: dict[str, dict] = {}

    def add(self, messages: list[Message], response: str) -> str:
        key = canonical_request_hash(messages)
        self.exchanges[key] = {"messages": messages, "response": response}
        return key

    def complete(self, messages: list[Message], temperature: float | None = None) -> str:
        key = canonical_request_hash(messages)
        if key not in self.exchanges:
            tail = messages[-1]["content"][:120] if messages else ""
            raise FixtureMissError(
                f"no recorded exchange for request {key[:12]}… (last message: {tail!r})"
            )
        return self.exchanges[key]["response"]

    def save(self, path: str | Path) -> None:
        doc = {"format": FIXTURE_FORMAT, "version": FIXTURE_VERSION,
               "exchanges": self.exchanges}
        Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False),
                              encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TranscriptFixtureProvider":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read chat fixture {path}: {exc}") from exc
        if doc.get("format") != FIXTURE_FORMAT or doc.get("version") != FIXTURE_VERSION:
            raise FormatError(f"{path} is not a v{FIXTURE_VERSION} chat fixture file")
        provider = cls()
        provider.exchanges = dict(doc["exchanges"])
        return provider


def _pick(pool: list[str], digest: bytes, index: int) -> str:
    return pool[digest[index % len(digest)] % len(pool)]


_SCENES = [
    "standing in a sunlit meadow at golden hour, wildflowers in the foreground",
    "perched on a cliff edge at dawn, mist rolling through the valley below",
    "wandering a quiet forest path in autumn, leaves drifting down around it",
    "silhouetted against a storm-lit sky over rolling dunes",
    "resting beside a glassy mountain lake that mirrors the peaks",
    "crossing a cobblestone square in an old coastal town at dusk",
    "watching city lights from a rooftop garden under a violet sky",
    "framed by ancient pines on a ridge above a sea of clouds",
]

_LIGHTING = ["soft lighting", "golden hour glow", "dramatic rim lighting",
             "diffuse overcast light"]
_DETAIL = ["intricate details", "highly detailed", "fine brushwork",
           "delicate linework"]
_COLOR = ["vivid colors", "pastel colors", "muted earth tones",
          "rich color grading"]
_COMPOSITION = ["cinematic composition", "sweeping wide-angle view",
                "balanced symmetrical framing", "dynamic diagonal composition"]
_POLISH = ["trending on artstation", "award winning", "masterful rendering",
           "gallery quality"]


class StubChatProvider(ChatProvider):
    """Offline deterministic responder.

    Inspects the last user message for the structural markers the engine's
    templates emit (a "Subject:" line, a trailing-comma autocomplete line,
    an "Integrated:" few-shot tail) and synthesizes a response from seeded
    pools. Identical transcripts always produce identical output.
    """

    kind = "deterministic_stub"

    def __init__(self, temperature: float = 0.0):
        self.temperature = temperature

    def complete(self, messages: list[Message], temperature: float | None = None) -> str:
        if not messages:
            raise ProviderError("empty message list")
        last = messages[-1]["content"]
        digest = hashlib.blake2b(
            json.dumps(messages, sort_keys=True).encode("utf-8"), digest_size=16
        ).digest()

        integration = self._try_integration(last)
        if integration is not None:
            return integration
        lines = [ln for ln in last.splitlines() if ln.strip()]
        if lines and lines[-1].rstrip().endswith(","):
            return self._style_completion(digest)
        subject = self._find_subject(messages)
        return self._numbered_suggestions(subject, digest)

    @staticmethod
    def _find_subject(messages: list[Message]) -> str:
        for message in messages:
            match = re.search(r"Subject:\s*\"?([^\"\n]+)\"?", message["content"])
            if match:
                return match.group(1).strip().rstrip(".")
        # steering without a marker: fall back to the first user message
        for message in messages:
            if message.get("role") == "user":
                words = message["content"].split()
                return " ".join(words[:4]) if words else "the subject"
        return "the subject"

    @staticmethod
    def _numbered_suggestions(subject: str, digest: bytes) -> str:
        picks = []
        offset = digest[0]
        for i in range(3):
            picks.append(_SCENES[(offset + i * 3 + digest[i + 1]) % len(_SCENES)])
        seen = []
        for scene in picks:
            if scene not in seen:
                seen.append(scene)
        while len(seen) < 3:  # collisions: walk the pool deterministically
            for scene in _SCENES:
                if scene not in seen:
                    seen.append(scene)
                    break
        return "\n".join(
            f"{i + 1}. {subject.capitalize()} {scene}." for i, scene in enumerate(seen[:3])
        )

    @staticmethod
    def _style_completion(digest: bytes) -> str:
        mods = [
            _pick(_LIGHTING, digest, 2),
            _pick(_DETAIL, digest, 3),
            _pick(_COLOR, digest, 4),
            _pick(_COMPOSITION, digest, 5),
            _pick(_POLISH, digest, 6),
        ]
        return " style, " + ", ".join(mods)

    @staticmethod
    def _try_integration(last: str) -> str | None:
        if not last.rstrip().endswith("Integrated:"):
            return None
        prompts = re.findall(r"Prompt:\s*(.+)", last)
        modifiers = re.findall(r"Modifier:\s*(.+)", last)
        if not prompts or not modifiers:
            return None
        prompt = prompts[-1].strip()
        modifier = modifiers[-1].strip()
        prompt_words = [w.lower().strip(".,") for w in prompt.split()]
        mod_words = modifier.split()
        for i, word in enumerate(mod_words[:3]):
            if word.lower().strip(".,") in prompt_words and word.lower() not in ("a", "an", "the"):
                remainder = " ".join(mod_words[i + 1:])
                if remainder:
                    return f"{prompt} {remainder}"
                return prompt
        return f"{prompt}, {modifier}"
