"""Prompt construction, chat-completion calls, fixture replay and code extraction."""

from __future__ import annotations

import logging
import os
import re
import time
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from string import Template
from typing import Optional

import httpx

from .errors import (
    AuthError,
    EmptyExtraction,
    FixtureNotFound,
    LlmTimeoutError,
    ProviderError,
    TransportError,
)

logger = logging.getLogger(__name__)

PROMPT_TEMPLATE_VERSION = 1
DEFAULT_API_KEY_ENV = "SEMNAV_LLM_API_KEY"
SYSTEM_MESSAGE = "You translate driving instructions into DLV answer set programs."

TASK_TEXT = {
    "constraints_only": (
        "Add integrity constraints (statements of the form :- body.) that restrict the "
        "answer sets of the handbook to the maneuvers of the instruction. Do not add rules "
        "with heads and do not add facts."
    ),
    "rules_and_constraints": (
        "The road ahead is closed, so prepare a new program including new rules to handle "
        "the detour, together with the constraints it needs. You may add facts, rules and "
        "constraints."
    ),
}


class TaskKind(str, Enum):
    CONSTRAINTS_ONLY = "constraints_only"
    RULES_AND_CONSTRAINTS = "rules_and_constraints"


def _resource(name):
    return resources.files("semnav").joinpath(f"resources/{name}").read_text(encoding="utf-8")


def default_guidelines() -> str:
    return _resource("guidelines.txt").rstrip("\n")


@dataclass(frozen=True)
class PromptBundle:
    handbook_text: str
    instruction_text: str
    syntax_guidelines: str
    task_kind: TaskKind = TaskKind.CONSTRAINTS_ONLY

    def __post_init__(self):
        for name in ("handbook_text", "instruction_text", "syntax_guidelines"):
            if not getattr(self, name).strip():
                raise ValueError(f"{name} must not be empty")
        object.__setattr__(self, "task_kind", TaskKind(self.task_kind))


def build_prompt(bundle: PromptBundle) -> str:
    template = Template(_resource("prompt_template.txt"))
    return template.substitute(
        handbook=bundle.handbook_text.strip("\n"),
        guidelines=bundle.syntax_guidelines.strip("\n"),
        instruction=bundle.instruction_text.strip(),
        task=TASK_TEXT[bundle.task_kind.value],
    )


@dataclass(frozen=True)
class LlmResponse:
    raw_text: str
    model_name: str
    source: str = "live"  # "live" or "fixture"
    path: Optional[Path] = None


@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str
    model: str
    api_key_env: str = DEFAULT_API_KEY_ENV
    timeout: float = 60.0
    temperature: float = 0.0


def complete(
    prompt: str,
    config: ProviderConfig,
    *,
    model_name: Optional[str] = None,
    client: Optional[httpx.Client] = None,
    max_retries: int = 2,
    backoff: float = 1.0,
    sleep=time.sleep,
) -> LlmResponse:
    """Send one chat-completion request and return the assistant text.

    Transport failures, timeouts and 5xx answers are retried ``max_retries``
    times with exponential backoff; 4xx answers are not retried.
    """
    key = os.environ.get(config.api_key_env)
    if not key:
        raise AuthError(f"environment variable {config.api_key_env} is not set")
    body = {
        "model": config.model,
        "messages": [
            {"role": "system", "content": SYSTEM_MESSAGE},
            {"role": "user", "content": prompt},
        ],
        "temperature": config.temperature,
    }
    headers = {"Authorization": f"Bearer {key}"}
    own_client = client is None
    if own_client:
        client = httpx.Client()
    try:
        attempt = 0
        while True:
            try:
                resp = client.post(config.endpoint, json=body, headers=headers, timeout=config.timeout)
            except httpx.TimeoutException as exc:
                error = LlmTimeoutError(f"request to {config.endpoint} timed out: {exc}")
            except httpx.TransportError as exc:
                error = TransportError(f"request to {config.endpoint} failed: {exc}")
            else:
                if 400 <= resp.status_code < 500:
                    raise AuthError(f"{config.endpoint} answered HTTP {resp.status_code}")
                if resp.status_code >= 500:
                    error = ProviderError(f"{config.endpoint} answered HTTP {resp.status_code}")
                else:
                    return LlmResponse(_assistant_text(resp), model_name or config.model, "live")
            if attempt >= max_retries:
                raise error
            logger.warning("attempt %d failed (%s), retrying", attempt + 1, error)
            sleep(backoff * 2**attempt)
            attempt += 1
    finally:
        if own_client:
            client.close()


def _assistant_text(resp: httpx.Response) -> str:
    try:
        return resp.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise ProviderError(f"unexpected response shape: {exc}") from None


def fixture_path(experiment_id: str, model_name: str, fixtures_dir) -> Path:
    return Path(fixtures_dir) / experiment_id / f"{model_name}.txt"


def fixture_complete(experiment_id: str, model_name: str, fixtures_dir) -> LlmResponse:
    path = fixture_path(experiment_id, model_name, fixtures_dir)
    try:
        raw = path.read_bytes().decode("utf-8")
    except FileNotFoundError:
        raise FixtureNotFound(path) from None
    return LlmResponse(raw, model_name, "fixture", path)


_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)
# A bare line counts as code when it opens like a statement: ":-", a directive,
# or a lowercase atom followed by "(", ".", ":-" or a "v" disjunction.
_BARE_CODE_RE = re.compile(r"(:-|#|[a-z]\w*\s*(\(|\.|:-|v\s))")


def extract_code(response) -> str:
    """Pull DLV code out of a response (or raw text).

    Fenced blocks win and are concatenated in order, with blank lines dropped;
    without fences every trimmed line that ends in ``.`` and opens like a
    statement is kept, so prose such as "I cannot help with that." is not.
    """
    text = response.raw_text if isinstance(response, LlmResponse) else response
    blocks = _FENCE_RE.findall(text)
    if blocks:
        lines = [ln.rstrip() for block in blocks for ln in block.splitlines() if ln.strip()]
    else:
        lines = [
            ln.strip()
            for ln in text.splitlines()
            if ln.strip().endswith(".") and _BARE_CODE_RE.match(ln.strip())
        ]
    code = "\n".join(lines)
    if not code.strip():
        raise EmptyExtraction("no DLV code found in the response")
    return code
