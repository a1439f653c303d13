"""HTTP client for the model gateway sidecar, plus a conformance suite.

The gateway exposes POST /embed, POST /summarize and GET /health with
JSON bodies; this client is the only place the wire protocol appears in
the core. The conformance suite verifies a live gateway honors the
protocol's invariants (order preservation, unit norms, summary cap,
determinism) and is what the gateway's own acceptance tests run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import requests

__all__ = [
    "GatewayError",
    "GatewayClient",
    "GatewayEmbedder",
    "GatewaySummarizer",
    "ConformanceResult",
    "run_conformance_suite",
    "assert_conformant",
]


class GatewayError(RuntimeError):
    """Gateway unreachable or returned a protocol-level error."""


class GatewayClient:
    def __init__(self, base_url: str, timeout: float = 30.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._session = session or requests.Session()

    def _post(self, path: str, payload: dict) -> dict:
        try:
            response = self._session.post(
                f"{self.base_url}{path}", json=payload, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise GatewayError(f"gateway request {path} failed: {exc}") from exc
        if response.status_code != 200:
            raise GatewayError(
                f"gateway {path} returned {response.status_code}: {response.text[:200]}"
            )
        return response.json()

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        body = self._post("/embed", {"texts": list(texts)})
        vectors = np.asarray(body["vectors"], dtype=float)
        if vectors.shape[0] != len(texts):
            raise GatewayError(
                f"gateway returned {vectors.shape[0]} vectors for {len(texts)} texts"
            )
        return vectors

    def summarize(self, text: str, max_len: int, min_len: int = 1) -> str:
        body = self._post(
            "/summarize", {"text": text, "max_len": max_len, "min_len": min_len}
        )
        return body["summary"]

    def health(self) -> dict:
        try:
            response = self._session.get(
                f"{self.base_url}/health", timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise GatewayError(f"gateway health check failed: {exc}") from exc
        if response.status_code != 200:
            raise GatewayError(f"gateway not healthy: {response.status_code}")
        return response.json()


class GatewayEmbedder:
    """EmbeddingBackend over the /embed endpoint (one batched call)."""

    def __init__(self, client: GatewayClient):
        self.client = client
        self.name = f"gateway-embed({client.base_url})"

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        return self.client.embed(texts)


class GatewaySummarizer:
    """SummarizerBackend over the /summarize endpoint."""

    def __init__(self, client: GatewayClient):
        self.client = client
        self.name = f"gateway-summarize({client.base_url})"

    def summarize(self, text: str, max_len: int) -> str:
        return self.client.summarize(text, max_len=max_len, min_len=1)


@dataclass(frozen=True)
class ConformanceResult:
    name: str
    passed: bool
    detail: str = ""


def _status_of(base_url: str, path: str, payload: dict, timeout: float) -> int:
    response = requests.post(f"{base_url.rstrip('/')}{path}", json=payload, timeout=timeout)
    return response.status_code


def run_conformance_suite(
    base_url: str, timeout: float = 30.0, batch_cap: int = 256
) -> list[ConformanceResult]:
    """Run the protocol conformance checks against a live gateway."""
    client = GatewayClient(base_url, timeout=timeout)
    results: list[ConformanceResult] = []

    def record(name: str, passed: bool, detail: str = "") -> None:
        results.append(ConformanceResult(name=name, passed=passed, detail=detail))

    try:
        health = client.health()
        models = health.get("models", {})
        ok = (
            health.get("status") == "ok"
            and isinstance(models.get("embedder"), str)
            and isinstance(models.get("summarizer"), str)
            and isinstance(health.get("dim"), int)
        )
        record("health_reports_models", ok, f"health={health}")
    except GatewayError as exc:
        record("health_reports_models", False, str(exc))
        return results

    texts = ["the tide rises", "a completely different sentence", "the tide rises", ""]
    try:
        vectors = client.embed(texts)
        record(
            "embed_one_vector_per_text_in_order",
            vectors.shape == (4, health["dim"])
            and bool(np.array_equal(vectors[0], vectors[2])),
            f"shape={vectors.shape}",
        )
        norms = np.linalg.norm(vectors, axis=1)
        record(
            "embed_unit_norm_or_zero_for_empty",
            bool(np.all(np.abs(norms[:3] - 1.0) <= 1e-6)) and norms[3] == 0.0,
            f"norms={norms.tolist()}",
        )
        again = client.embed(texts)
        record(
            "embed_deterministic",
            bool(np.array_equal(vectors, again)),
        )
    except GatewayError as exc:
        record("embed_endpoint", False, str(exc))

    long_text = " ".join(
        f"Sentence number {i} talks about rivers, bridges and weather patterns."
        for i in range(50)
    )
    try:
        summary = client.summarize(long_text, max_len=50)
        record(
            "summarize_respects_max_len",
            0 < len(summary.split()) <= 50,
            f"output_len={len(summary.split())}",
        )
        again_summary = client.summarize(long_text, max_len=50)
        record("summarize_deterministic", summary == again_summary)
    except GatewayError as exc:
        record("summarize_endpoint", False, str(exc))

    try:
        status = _status_of(
            base_url, "/summarize",
            {"text": "abc", "max_len": 5, "min_len": 10}, timeout,
        )
        record("summarize_rejects_min_gt_max", status == 422, f"status={status}")
        status = _status_of(
            base_url, "/embed", {"texts": ["x"] * (batch_cap + 1)}, timeout
        )
        record("embed_rejects_oversize_batch", status == 413, f"status={status}")
        status = _status_of(base_url, "/embed", {"wrong_field": 1}, timeout)
        record("embed_rejects_malformed_body", status == 400, f"status={status}")
    except requests.RequestException as exc:
        record("error_statuses", False, str(exc))

    return results


def assert_conformant(base_url: str, timeout: float = 30.0, batch_cap: int = 256) -> None:
    """Raise GatewayError listing any failed conformance checks."""
    failures = [
        r for r in run_conformance_suite(base_url, timeout, batch_cap) if not r.passed
    ]
    if failures:
        lines = "; ".join(f"{r.name}: {r.detail}" for r in failures)
        raise GatewayError(f"gateway failed conformance: {lines}")
