"""Pluggable chat backends: an OpenAI-compatible HTTP client and a
deterministic scripted stand-in for tests and offline evaluation."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Protocol

import httpx

from bimql.errors import BackendUnavailableError, TranscriptExhaustedError


class LlmBackend(Protocol):
    name: str

    def complete(self, messages: list[dict], temperature: float = 0.0) -> str: ...


class ScriptedBackend:
    """Feeds back a fixed transcript, one response per call."""

    def __init__(self, responses: list[str], name: str = "scripted"):
        self.name = name
        self.responses = list(responses)
        self.cursor = 0

    def complete(self, messages: list[dict], temperature: float = 0.0) -> str:
        if self.cursor >= len(self.responses):
            raise TranscriptExhaustedError(
                f"{self.name} transcript exhausted after {self.cursor} calls"
            )
        response = self.responses[self.cursor]
        self.cursor += 1
        return response

    @staticmethod
    def from_file(path: str | Path, name: str = "scripted") -> "ScriptedBackend":
        payload = json.loads(Path(path).read_text())
        if isinstance(payload, dict):
            payload = payload["responses"]
        return ScriptedBackend(payload, name=name)


class HttpChatBackend:
    """POSTs an OpenAI-style chat-completions request."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        token_env: str = "BIMQL_API_TOKEN",
        temperature: float = 0.0,
        timeout: float = 120.0,
        name: str | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.token_env = token_env
        self.temperature = temperature
        self.timeout = timeout
        self.name = name or f"http:{model}"

    def complete(self, messages: list[dict], temperature: float | None = None) -> str:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.model,
            "messages": messages,
            "temperature": self.temperature if temperature is None else temperature,
        }
        try:
            response = httpx.post(
                self.endpoint, json=body, headers=headers, timeout=self.timeout
            )
        except httpx.HTTPError as exc:
            raise BackendUnavailableError(f"{self.name}: {exc}") from exc
        if response.status_code >= 500:
            raise BackendUnavailableError(
                f"{self.name}: server returned {response.status_code}"
            )
        if response.status_code != 200:
            raise BackendUnavailableError(
                f"{self.name}: unexpected status {response.status_code}: "
                f"{response.text[:200]}"
            )
        try:
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendUnavailableError(
                f"{self.name}: malformed completion payload"
            ) from exc
