"""Provider-agnostic LLM access: requests, retries, token and cost accounting.

Two providers ship: an HTTP chat-completions client for live use, and a
script-driven mock that makes every pipeline test byte-reproducible with zero
network access. The service sits between clients and the provider, so browser
code never holds an API key.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import requests

MOCK_MODEL_ID = "mock-model"

#: Heuristic characters-per-token divisor, used only when the provider
#: reports no usage.
_APPROX_BYTES_PER_TOKEN = 4

_RETRYABLE = frozenset(["Timeout", "RateLimit"])
_MAX_ATTEMPTS = 3  # first try plus up to 2 retries


class GatewayError(Exception):
    def __init__(self, kind: str, message: str = "", attempts: int = 0, stage: str | None = None):
        assert kind in ("Timeout", "Auth", "RateLimit", "Protocol")
        self.kind = kind
        self.attempts = attempts
        self.stage = stage
        super().__init__(f"{kind}: {message or kind} (attempts={attempts})")


class UnknownModel(Exception):
    def __init__(self, model_id: str):
        self.model_id = model_id
        super().__init__(f"no pricing entry for model {model_id!r}")


@dataclass(frozen=True)
class LlmRequest:
    system_text: str
    user_text: str
    max_output_tokens: int
    temperature: float
    top_p: float
    model_id: str

    def __post_init__(self):
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be >= 1")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")
        if not 0.0 < self.top_p <= 1.0:
            raise ValueError("top_p must be in (0, 1]")


@dataclass(frozen=True)
class LlmUsage:
    input_tokens: int = 0
    output_tokens: int = 0
    latency_ms: float = 0.0
    call_count: int = 0

    def __add__(self, other: "LlmUsage") -> "LlmUsage":
        return LlmUsage(
            input_tokens=self.input_tokens + other.input_tokens,
            output_tokens=self.output_tokens + other.output_tokens,
            latency_ms=self.latency_ms + other.latency_ms,
            call_count=self.call_count + other.call_count,
        )

    def to_dict(self) -> dict:
        return {
            "input_tokens": self.input_tokens,
            "output_tokens": self.output_tokens,
            "latency_ms": self.latency_ms,
            "call_count": self.call_count,
        }


@dataclass(frozen=True)
class CostEstimate:
    usd: float
    input_usd: float
    output_usd: float


class PricingTable:
    """Per-1k-token USD rates by model id, loaded from a user-editable file."""

    def __init__(self, entries: dict[str, tuple[float, float]]):
        for model_id, (input_rate, output_rate) in entries.items():
            if input_rate < 0 or output_rate < 0:
                raise ValueError(f"negative rate for {model_id!r}")
        self.entries = dict(entries)

    @classmethod
    def load(cls, path: str | Path) -> "PricingTable":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        entries = {}
        for model_id, rates in doc.items():
            entries[model_id] = (
                float(rates["input_usd_per_1k"]),
                float(rates["output_usd_per_1k"]),
            )
        return cls(entries)


def approximate_tokens(text: str) -> int:
    """Deterministic fallback count: ceil(UTF-8 byte length / 4)."""
    return math.ceil(len(text.encode("utf-8")) / _APPROX_BYTES_PER_TOKEN)


def estimate_cost(usage: LlmUsage, pricing: PricingTable, model_id: str) -> CostEstimate:
    if model_id not in pricing.entries:
        raise UnknownModel(model_id)
    input_rate, output_rate = pricing.entries[model_id]
    input_usd = usage.input_tokens / 1000 * input_rate
    output_usd = usage.output_tokens / 1000 * output_rate
    return CostEstimate(usd=input_usd + output_usd, input_usd=input_usd, output_usd=output_usd)


def request_digest(req: LlmRequest) -> str:
    payload = json.dumps(
        [req.model_id, req.system_text, req.user_text, req.max_output_tokens, req.temperature, req.top_p],
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _send_with_retries(attempt_fn, req: LlmRequest, backoff_s: float) -> tuple[str, LlmUsage]:
    attempts = 0
    while True:
        attempts += 1
        try:
            return attempt_fn(req)
        except GatewayError as exc:
            if exc.kind not in _RETRYABLE or attempts >= _MAX_ATTEMPTS:
                raise GatewayError(exc.kind, str(exc), attempts=attempts) from exc
            if backoff_s > 0:
                time.sleep(backoff_s * 2 ** (attempts - 1))


class MockGateway:
    """Deterministic scripted provider for offline tests and demos.

    A script is a JSON object (or the equivalent dict):

        {
          "model_id": "mock-model",
          "latency": {"base_ms": 50.0, "per_output_token_ms": 0.5},
          "responses": [
            {"text": "yes", "input_tokens": 120, "output_tokens": 1},
            {"fail": "Timeout"}
          ],
          "by_digest": {"<sha256 of the request>": {"text": "..."}},
          "default": {"text": "VERDICT: CORRECT"}
        }

    `responses` entries are consumed in call order; `by_digest` matches
    request digests; `default` answers anything else. Token counts fall back
    to approximate_tokens, and reported output tokens never exceed the
    request's max_output_tokens. When a latency model is configured the
    latency is computed, not slept, so simulated benchmarks stay fast.
    """

    def __init__(self, script: dict | str | Path | None = None, backoff_s: float = 0.0):
        if isinstance(script, (str, Path)):
            script = json.loads(Path(script).read_text(encoding="utf-8"))
        script = script or {}
        self.model_id = script.get("model_id", MOCK_MODEL_ID)
        self._responses = list(script.get("responses", []))
        self._by_digest = dict(script.get("by_digest", {}))
        self._default = script.get("default")
        self._latency = script.get("latency")
        self._backoff_s = backoff_s
        self._lock = threading.Lock()
        self._cursor = 0
        self.calls: list[LlmRequest] = []

    @property
    def call_count(self) -> int:
        return len(self.calls)

    def send(self, req: LlmRequest) -> tuple[str, LlmUsage]:
        return _send_with_retries(self._attempt, req, self._backoff_s)

    def _next_entry(self, req: LlmRequest) -> dict:
        digest = request_digest(req)
        with self._lock:
            self.calls.append(req)
            if digest in self._by_digest:
                return self._by_digest[digest]
            if self._cursor < len(self._responses):
                entry = self._responses[self._cursor]
                self._cursor += 1
                return entry
        if self._default is not None:
            return self._default
        raise GatewayError("Protocol", "mock script exhausted")

    def _attempt(self, req: LlmRequest) -> tuple[str, LlmUsage]:
        entry = self._next_entry(req)
        if "fail" in entry:
            raise GatewayError(entry["fail"], "scripted failure")
        text = entry["text"]
        input_tokens = entry.get("input_tokens")
        if input_tokens is None:
            input_tokens = approximate_tokens(req.system_text + "\n" + req.user_text)
        output_tokens = entry.get("output_tokens")
        if output_tokens is None:
            output_tokens = approximate_tokens(text)
        output_tokens = min(output_tokens, req.max_output_tokens)
        latency_ms = 0.0
        if self._latency:
            latency_ms = (
                float(self._latency.get("base_ms", 0.0))
                + float(self._latency.get("per_output_token_ms", 0.0)) * req.max_output_tokens
            )
        usage = LlmUsage(
            input_tokens=input_tokens,
            output_tokens=output_tokens,
            latency_ms=latency_ms,
            call_count=1,
        )
        return text, usage


class HttpGateway:
    """Chat-completions HTTP client with retries and wall-clock latency."""

    def __init__(
        self,
        api_key: str | None,
        model_id: str,
        base_url: str = "https://api.openai.com/v1",
        timeout_s: float = 60.0,
        backoff_s: float = 0.5,
        transport=None,
    ):
        self.api_key = api_key
        self.model_id = model_id
        self.base_url = base_url.rstrip("/")
        self.timeout_s = timeout_s
        self._backoff_s = backoff_s
        self._transport = transport or requests.post

    def send(self, req: LlmRequest) -> tuple[str, LlmUsage]:
        if not self.api_key:
            raise GatewayError("Auth", "no API key configured", attempts=0)
        return _send_with_retries(self._attempt, req, self._backoff_s)

    def _attempt(self, req: LlmRequest) -> tuple[str, LlmUsage]:
        body = {
            "model": req.model_id,
            "messages": [
                {"role": "system", "content": req.system_text},
                {"role": "user", "content": req.user_text},
            ],
            "max_tokens": req.max_output_tokens,
            "temperature": req.temperature,
            "top_p": req.top_p,
        }
        started = time.monotonic()
        try:
            response = self._transport(
                f"{self.base_url}/chat/completions",
                json=body,
                headers={"Authorization": f"Bearer {self.api_key}"},
                timeout=self.timeout_s,
            )
        except requests.Timeout as exc:
            raise GatewayError("Timeout", str(exc)) from exc
        except requests.RequestException as exc:
            raise GatewayError("Protocol", str(exc)) from exc
        latency_ms = (time.monotonic() - started) * 1000.0

        if response.status_code in (401, 403):
            raise GatewayError("Auth", f"HTTP {response.status_code}")
        if response.status_code == 429:
            raise GatewayError("RateLimit", "HTTP 429")
        if response.status_code >= 500:
            raise GatewayError("Timeout", f"HTTP {response.status_code}")
        if response.status_code != 200:
            raise GatewayError("Protocol", f"HTTP {response.status_code}")

        try:
            doc = response.json()
            text = doc["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise GatewayError("Protocol", f"malformed response: {exc}") from exc

        reported = doc.get("usage") or {}
        input_tokens = reported.get("prompt_tokens")
        output_tokens = reported.get("completion_tokens")
        if input_tokens is None:
            input_tokens = approximate_tokens(req.system_text + "\n" + req.user_text)
        if output_tokens is None:
            output_tokens = approximate_tokens(text)
        usage = LlmUsage(
            input_tokens=int(input_tokens),
            output_tokens=int(output_tokens),
            latency_ms=latency_ms,
            call_count=1,
        )
        return text, usage


def gateway_from_env(mock_script: str | Path | None = None):
    """Build a gateway from LLM_* env vars; a mock script path wins."""
    script = mock_script or os.environ.get("LLM_MOCK_SCRIPT")
    if script:
        return MockGateway(script)
    return HttpGateway(
        api_key=os.environ.get("LLM_API_KEY"),
        model_id=os.environ.get("LLM_MODEL", "gpt-4"),
        base_url=os.environ.get("LLM_BASE_URL", "https://api.openai.com/v1"),
    )
