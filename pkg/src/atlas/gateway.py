"""Uniform gateway to embedding and chat providers.

Two implementations share one interface: ``RemoteGateway`` speaks the
de-facto chat/embeddings REST wire format, and ``MockGateway`` is a fully
deterministic offline stand-in so the pipeline, the service, and every test
run with no network.

Mock embedder: tokens are hashed (FNV-1a, 64-bit) onto 3 of the output
coordinates each, then the vector is L2-normalized.  Token overlap between
two texts therefore shows up directly as cosine similarity, which is all
downstream code relies on.
"""

from __future__ import annotations

import math
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx

from .corpus import DEFAULT_EMBED_DIM
from .errors import (
    DimensionMismatch,
    EmptyInput,
    EmptyResponse,
    ProviderUnavailable,
)

# marker the pipeline embeds in topic-extraction prompts; the mock keys on it
TOPIC_PROMPT_MARKER = "TOPICS REQUEST"

# fixed keyword -> topic table driving the mock's topic replies
MOCK_TOPIC_TABLE = {
    "voting": "governance",
    "election": "governance",
    "ballot": "governance",
    "policy": "governance",
    "music": "music",
    "musical": "music",
    "melody": "music",
    "audio": "music",
    "robot": "robotics",
    "robots": "robotics",
    "robotic": "robotics",
    "actuator": "robotics",
    "gripper": "robotics",
    "neuron": "neuroscience",
    "neurons": "neuroscience",
    "brain": "neuroscience",
    "cortex": "neuroscience",
    "climate": "sustainability",
    "solar": "sustainability",
    "carbon": "sustainability",
    "energy": "sustainability",
    "quantum": "quantum computing",
    "sensor": "sensing",
    "wearable": "sensing",
    "genome": "biotech",
    "protein": "biotech",
}

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def _fnv1a64(token: str) -> int:
    h = _FNV_OFFSET
    for byte in token.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


def _rotl64(value: int, shift: int) -> int:
    return ((value << shift) | (value >> (64 - shift))) & _U64


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "mock"  # {remote, mock}
    endpoint: str = ""
    api_key: str = ""
    embed_model: str = "text-embedding-ada-002"
    chat_model: str = "gpt-4"
    max_concurrency: int = 4
    retry_limit: int = 3
    dimension: int = DEFAULT_EMBED_DIM

    def __post_init__(self):
        if self.kind not in ("remote", "mock"):
            raise ValueError(f"unknown provider kind {self.kind!r}")
        if self.kind == "remote" and not (self.endpoint and self.api_key):
            raise ValueError("remote provider requires endpoint and api_key")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")
        if self.retry_limit < 0:
            raise ValueError("retry_limit must be >= 0")


@dataclass(frozen=True)
class ChatRequest:
    system: str
    user: str
    temperature: float = 0.2

    def __post_init__(self):
        if not self.user:
            raise ValueError("user message must be nonempty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must lie in [0, 2]")


class Gateway:
    """Common bounded-concurrency wrapper; subclasses provide the transport."""

    def __init__(self, config: ProviderConfig):
        self.config = config
        self._gate = threading.Semaphore(config.max_concurrency)

    # -- public API -----------------------------------------------------

    def embed_text(self, text: str) -> list[float]:
        if not text or not text.strip():
            raise EmptyInput("cannot embed empty text")
        with self._gate:
            vec = self._embed(text)
        if len(vec) != self.config.dimension:
            raise DimensionMismatch(
                f"provider returned {len(vec)} values, expected {self.config.dimension}"
            )
        return vec

    def embed_many(self, texts: list[str]) -> list[list[float]]:
        """Embed in parallel (bounded by max_concurrency), results in input order."""
        with ThreadPoolExecutor(max_workers=self.config.max_concurrency) as pool:
            return list(pool.map(self.embed_text, texts))

    def complete_chat(self, req: ChatRequest) -> str:
        with self._gate:
            reply = self._chat(req)
        if not reply:
            raise EmptyResponse("provider returned empty completion")
        return reply

    # -- transport hooks --------------------------------------------------

    def _embed(self, text: str) -> list[float]:
        raise NotImplementedError

    def _chat(self, req: ChatRequest) -> str:
        raise NotImplementedError


class MockGateway(Gateway):
    def __init__(self, config: ProviderConfig | None = None):
        super().__init__(config or ProviderConfig(kind="mock"))

    def _embed(self, text: str) -> list[float]:
        dim = self.config.dimension
        vec = [0.0] * dim
        for token in tokenize(text):
            h = _fnv1a64(token)
            vec[h % dim] += 1.0
            vec[_rotl64(h, 21) % dim] += 1.0
            vec[_rotl64(h, 42) % dim] += 1.0
        norm = math.sqrt(sum(v * v for v in vec))
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return [v / norm for v in vec]

    def _chat(self, req: ChatRequest) -> str:
        if req.user.startswith("ECHO:"):
            return req.user[len("ECHO:"):]
        if TOPIC_PROMPT_MARKER in req.user:
            labels: list[str] = []
            for token in tokenize(req.user):
                topic = MOCK_TOPIC_TABLE.get(token)
                if topic and topic not in labels:
                    labels.append(topic)
                if len(labels) == 5:
                    break
            return ", ".join(labels)
        return "TITLE: Synthesized Idea\nDESCRIPTION: " + req.user[:200]


class RemoteGateway(Gateway):
    """Bearer-token JSON client with exponential-backoff retries (1s..30s)."""

    BACKOFF_START = 1.0
    BACKOFF_CAP = 30.0

    def __init__(self, config: ProviderConfig, client: httpx.Client | None = None,
                 sleep=time.sleep):
        super().__init__(config)
        self._client = client or httpx.Client(
            base_url=config.endpoint,
            headers={"Authorization": f"Bearer {config.api_key}"},
            timeout=60.0,
        )
        self._sleep = sleep

    def _post(self, path: str, payload: dict) -> dict:
        delay = self.BACKOFF_START
        last_error: Exception | None = None
        for attempt in range(self.config.retry_limit + 1):
            if attempt:
                self._sleep(delay)
                delay = min(delay * 2, self.BACKOFF_CAP)
            try:
                resp = self._client.post(path, json=payload)
                resp.raise_for_status()
                return resp.json()
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
        raise ProviderUnavailable(f"{path} failed after "
                                  f"{self.config.retry_limit + 1} attempts: {last_error}")

    def _embed(self, text: str) -> list[float]:
        data = self._post("/embeddings", {"model": self.config.embed_model, "input": text})
        try:
            return [float(v) for v in data["data"][0]["embedding"]]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed embeddings response: {exc}")

    def _chat(self, req: ChatRequest) -> str:
        payload = {
            "model": self.config.chat_model,
            "temperature": req.temperature,
            "messages": [
                {"role": "system", "content": req.system},
                {"role": "user", "content": req.user},
            ],
        }
        data = self._post("/chat/completions", payload)
        try:
            return str(data["choices"][0]["message"]["content"])
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed chat response: {exc}")


def gateway_from_env(provider: str | None = None) -> Gateway:
    """Build a gateway from LL_* environment variables; mock by default."""
    kind = provider or os.environ.get("LL_PROVIDER", "mock")
    if kind == "mock":
        return MockGateway()
    config = ProviderConfig(
        kind="remote",
        endpoint=os.environ.get("LL_ENDPOINT", "https://api.openai.com/v1"),
        api_key=os.environ.get("LL_API_KEY", ""),
        embed_model=os.environ.get("LL_EMBED_MODEL", "text-embedding-ada-002"),
        chat_model=os.environ.get("LL_CHAT_MODEL", "gpt-4"),
    )
    return RemoteGateway(config)
