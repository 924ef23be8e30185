"""Completion providers: a deterministic offline mock and a generic HTTP chat client.

The mock provider serves canned completions from a fixtures directory keyed by
screen id and is the default for tests and offline runs. The HTTP provider
speaks the common chat-completions wire shape; concrete models are config
presets (see ``data/provider_presets.json``), not code. Transient transport
errors are retried with exponential backoff; authentication problems fail
before any request is made.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Protocol

import requests

from .prompts import PromptSpec

DEFAULT_API_KEY_ENV = "TALKAUDIT_API_KEY"


class ProviderError(Exception):
    """Base class for completion failures."""


class TransportError(ProviderError):
    """The request could not be delivered or answered."""


class TransientTransportError(TransportError):
    """A transport failure worth retrying (connection reset, 429, 5xx)."""


class AuthError(ProviderError):
    """Missing or rejected credentials; never retried."""


class ProviderRefusalError(ProviderError):
    """The provider answered but declined to complete the request."""


@dataclass(frozen=True)
class ProviderConfig:
    provider_name: str
    model_id: str
    endpoint: str  # URL for HTTP providers; fixtures directory for the mock
    temperature: float = 0.0
    max_retries: int = 2
    timeout: float = 60.0
    api_key_env: str = DEFAULT_API_KEY_ENV

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")


class CompletionProvider(Protocol):
    def complete(self, prompt: PromptSpec, config: ProviderConfig) -> str: ...


class MockProvider:
    """Replays canned completions from ``<fixtures_dir>/<screen_id>.txt``.

    Fully deterministic and offline; the completion for a screen is whatever
    was frozen into the fixtures directory.
    """

    def __init__(self, fixtures_dir: str | Path) -> None:
        self.fixtures_dir = Path(fixtures_dir)

    def complete(self, prompt: PromptSpec, config: ProviderConfig) -> str:
        path = self.fixtures_dir / f"{prompt.screen_id}.txt"
        if not path.is_file():
            raise ProviderRefusalError(
                f"no canned completion for screen {prompt.screen_id!r} in {self.fixtures_dir}"
            )
        return path.read_text(encoding="utf-8")


class HttpChatProvider:
    """Generic chat-completions client (OpenAI-compatible request/response shape)."""

    def complete(self, prompt: PromptSpec, config: ProviderConfig) -> str:
        api_key = os.environ.get(config.api_key_env)
        if not api_key:
            raise AuthError(
                f"credential environment variable {config.api_key_env} is not set"
            )
        payload = {
            "model": config.model_id,
            "messages": [{"role": "user", "content": prompt.text}],
            "temperature": config.temperature,
        }
        try:
            response = requests.post(
                config.endpoint,
                json=payload,
                headers={"Authorization": f"Bearer {api_key}"},
                timeout=config.timeout,
            )
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TransientTransportError(str(exc)) from exc
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc

        if response.status_code in (401, 403):
            raise AuthError(f"provider rejected credentials (HTTP {response.status_code})")
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientTransportError(f"HTTP {response.status_code}: {response.text[:200]}")
        if response.status_code >= 400:
            raise ProviderRefusalError(f"HTTP {response.status_code}: {response.text[:200]}")

        try:
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderRefusalError(f"unexpected response shape: {exc}") from exc


def make_provider(config: ProviderConfig) -> CompletionProvider:
    if config.provider_name == "mock":
        return MockProvider(config.endpoint)
    return HttpChatProvider()


def submit(
    prompt: PromptSpec,
    config: ProviderConfig,
    provider: CompletionProvider | None = None,
    sleep: Callable[[float], None] = time.sleep,
    backoff_base: float = 0.5,
) -> str:
    """Send the prompt and return the raw completion text.

    Transient transport errors are retried up to ``config.max_retries`` times
    with exponential backoff; other failures propagate immediately.
    """
    if provider is None:
        provider = make_provider(config)
    attempts = config.max_retries + 1
    last: TransientTransportError | None = None
    for attempt in range(attempts):
        try:
            return provider.complete(prompt, config)
        except TransientTransportError as exc:
            last = exc
            if attempt < attempts - 1:
                sleep(backoff_base * (2**attempt))
    raise TransportError(
        f"transport failed after {attempts} attempt(s): {last}"
    ) from last


def load_provider_presets(path: str | Path | None = None) -> dict[str, ProviderConfig]:
    """Named provider configurations; the packaged presets cover the common
    hosted chat models, all pointed at OpenAI-compatible endpoints."""
    if path is None:
        raw = (resources.files("talkaudit") / "data" / "provider_presets.json").read_text(
            encoding="utf-8"
        )
    else:
        raw = Path(path).read_text(encoding="utf-8")
    doc = json.loads(raw)
    presets = {}
    for name, fields in doc.items():
        presets[name] = ProviderConfig(**fields)
    return presets
