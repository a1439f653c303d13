"""HTTP gateway exposing an embedding model and a summarization model.

Stateless JSON-over-HTTP sidecar: POST /embed, POST /summarize, GET
/health. Model handles are loaded once at startup and read-only
afterwards, so concurrent requests are safe. Until loading finishes every
endpoint answers 503.
"""

from __future__ import annotations

import os
from contextlib import asynccontextmanager
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .models import build_embedder, build_summarizer


@dataclass(frozen=True)
class Settings:
    embedder: str = "hashed"  # hashed | minilm
    summarizer: str = "lead"  # lead | distilbart
    embed_dim: int = 384
    seed: int = 0
    batch_cap: int = 256

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            embedder=os.environ.get("GATEWAY_EMBEDDER", "hashed"),
            summarizer=os.environ.get("GATEWAY_SUMMARIZER", "lead"),
            embed_dim=int(os.environ.get("GATEWAY_EMBED_DIM", "384")),
            seed=int(os.environ.get("GATEWAY_SEED", "0")),
            batch_cap=int(os.environ.get("GATEWAY_BATCH_CAP", "256")),
        )


class EmbedRequest(BaseModel):
    texts: list[str]


class SummarizeRequest(BaseModel):
    text: str
    max_len: int
    min_len: int = 1


def create_app(settings: Settings | None = None) -> FastAPI:
    settings = settings or Settings.from_env()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.embedder = build_embedder(
            settings.embedder, dim=settings.embed_dim, seed=settings.seed
        )
        app.state.summarizer = build_summarizer(settings.summarizer)
        yield
        app.state.embedder = None
        app.state.summarizer = None

    app = FastAPI(title="semcomp model gateway", lifespan=lifespan)
    app.state.embedder = None
    app.state.summarizer = None

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def not_loaded() -> JSONResponse:
        return JSONResponse(status_code=503, content={"detail": "models not loaded"})

    @app.post("/embed")
    async def embed(body: EmbedRequest):
        embedder = app.state.embedder
        if embedder is None:
            return not_loaded()
        if not body.texts:
            return JSONResponse(
                status_code=400, content={"detail": "texts must be non-empty"}
            )
        if len(body.texts) > settings.batch_cap:
            return JSONResponse(
                status_code=413,
                content={
                    "detail": f"batch of {len(body.texts)} exceeds cap {settings.batch_cap}"
                },
            )
        vectors = embedder.embed(body.texts)
        return {"vectors": vectors.tolist(), "dim": embedder.dim}

    @app.post("/summarize")
    async def summarize(body: SummarizeRequest):
        summarizer = app.state.summarizer
        if summarizer is None:
            return not_loaded()
        if not body.text.strip():
            return JSONResponse(
                status_code=400, content={"detail": "text must be non-empty"}
            )
        if body.min_len > body.max_len:
            return JSONResponse(
                status_code=422,
                content={
                    "detail": f"min_len {body.min_len} exceeds max_len {body.max_len}"
                },
            )
        summary = summarizer.summarize(
            body.text, max_len=body.max_len, min_len=body.min_len
        )
        return {
            "summary": summary,
            "input_len": len(body.text.split()),
            "output_len": len(summary.split()),
        }

    @app.get("/health")
    async def health():
        embedder = app.state.embedder
        summarizer = app.state.summarizer
        if embedder is None or summarizer is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {
            "status": "ok",
            "models": {"embedder": embedder.name, "summarizer": summarizer.name},
            "dim": embedder.dim,
        }

    return app


app = create_app()
