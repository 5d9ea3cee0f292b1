"""Wire-protocol inference server.

Protocol: ``POST /classify`` with body ``{"texts": [...]}`` returns
``{"labels": [...]}`` — one lowercase label per input text, order
preserved, vocabulary closed over {negative, neutral, positive,
unrelated}.  ``GET /health`` reports readiness.  Batches larger than
the configured maximum are refused with HTTP 413; backend failures are
5xx, never a malformed 200 body.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import Callable

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .stub import rule_label

VALID_LABELS = frozenset({"negative", "neutral", "positive", "unrelated"})


def default_prompt_path() -> str:
    return str(importlib.resources.files("llm_service")
               .joinpath("data", "prompt.txt"))


def load_prompt(path: str | None = None) -> str:
    with open(path or default_prompt_path(), "r", encoding="utf-8") as fh:
        return fh.read()


@dataclass
class ServiceConfig:
    model_id: str = "meta-llama/Meta-Llama-3-8B-Instruct"
    prompt_path: str = field(default_factory=default_prompt_path)
    max_batch_size: int = 256
    port: int = 8100
    stub: bool = False

    def __post_init__(self) -> None:
        if self.max_batch_size < 1:
            raise ValueError("max batch size must be >= 1")

    @property
    def system_prompt(self) -> str:
        return load_prompt(self.prompt_path)


class ClassifyRequest(BaseModel):
    texts: list[str]


class ClassifyResponse(BaseModel):
    labels: list[str]


def _load_model_backend(config: ServiceConfig) -> Callable[[list[str]],
                                                           list[str]]:
    """Build the fine-tuned-model backend; requires the train extras and
    model weights, so it is resolved lazily at serve time."""
    raise RuntimeError(
        f"model backend for {config.model_id!r} is not available in this "
        "installation; run with --stub or install the 'train' extra and "
        "provide an adapter")


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig(stub=True)
    app = FastAPI(title="attitude-classification sidecar")
    backend: Callable[[list[str]], list[str]]
    if config.stub:
        backend = lambda texts: [rule_label(t) for t in texts]  # noqa: E731
    else:
        backend = _load_model_backend(config)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "stub": config.stub,
                "model": "stub" if config.stub else config.model_id,
                "max_batch_size": config.max_batch_size}

    @app.post("/classify", response_model=ClassifyResponse)
    def classify(request: ClassifyRequest) -> ClassifyResponse:
        if len(request.texts) > config.max_batch_size:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.texts)} exceeds maximum "
                       f"{config.max_batch_size}")
        try:
            labels = backend(request.texts)
        except Exception as exc:  # model failure -> 5xx, never a bad body
            raise HTTPException(status_code=500,
                                detail=f"inference failed: {exc}") from exc
        if len(labels) != len(request.texts) or \
                any(label not in VALID_LABELS for label in labels):
            # closed vocabulary: a stray backend output is a server error
            raise HTTPException(status_code=500,
                                detail="backend produced invalid labels")
        return ClassifyResponse(labels=labels)

    return app
