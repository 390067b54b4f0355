"""Read-only HTTP facade over the trained artifacts.

The service loads the vector store and collocation tables once at startup
and serves three endpoints: /api/idiomify (phrase search), /api/neighbors
(idiom-to-idiom exploration) and /api/health.  Artifact paths and the bind
address come from a JSON config file, overridable through environment
variables (IDIOMATCH_BIND, IDIOMATCH_VECTORS, IDIOMATCH_COLLS_TF/TFIDF/PMI,
IDIOMATCH_STATIC_DIR, IDIOMATCH_MODEL).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from idiomatch.colloc import MODELS, read_table
from idiomatch.embed import load_vectors
from idiomatch.idiomify import Idiomifier

MAX_K = 50


class ConfigError(ValueError):
    """Raised when the service configuration cannot be used."""


@dataclass
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    vectors: str = ""
    collocations: dict[str, str] = field(default_factory=dict)
    default_model: str = "pmi"
    static_dir: str | None = None

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ApiConfig":
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        config = cls(
            host=raw.get("host", "127.0.0.1"),
            port=int(raw.get("port", 8080)),
            vectors=raw.get("vectors", ""),
            collocations={k: v for k, v in raw.get("collocations", {}).items()},
            default_model=raw.get("default_model", "pmi"),
            static_dir=raw.get("static_dir"),
        )
        config.apply_env()
        return config

    def apply_env(self) -> None:
        bind = os.environ.get("IDIOMATCH_BIND")
        if bind:
            host, _, port = bind.rpartition(":")
            if host:
                self.host = host
            self.port = int(port)
        self.vectors = os.environ.get("IDIOMATCH_VECTORS", self.vectors)
        for model in MODELS:
            override = os.environ.get(f"IDIOMATCH_COLLS_{model.upper()}")
            if override:
                self.collocations[model] = override
        self.default_model = os.environ.get("IDIOMATCH_MODEL", self.default_model)
        static = os.environ.get("IDIOMATCH_STATIC_DIR")
        if static:
            self.static_dir = static

    def validate(self) -> None:
        if not self.vectors or not Path(self.vectors).exists():
            raise ConfigError(f"vector file not found: {self.vectors!r}")
        if self.default_model not in MODELS:
            raise ConfigError(f"default_model must be one of {MODELS}")
        if self.default_model not in self.collocations:
            raise ConfigError(f"no collocation table configured for {self.default_model!r}")
        for model, path in self.collocations.items():
            if model not in MODELS:
                raise ConfigError(f"unknown collocation model {model!r}")
            if not Path(path).exists():
                raise ConfigError(f"collocation table not found: {path!r}")
        if self.static_dir is not None and not Path(self.static_dir).is_dir():
            raise ConfigError(f"static asset directory not found: {self.static_dir!r}")


def _hint_keys(idiom_keys: frozenset[str], query: str, limit: int = 5) -> list[str]:
    """Closest key spellings by longest shared prefix with the query."""
    for cut in range(len(query), 0, -1):
        prefix = query[:cut]
        hits = sorted(key for key in idiom_keys if key.startswith(prefix))
        if hits:
            return hits[:limit]
    return sorted(idiom_keys)[:limit]


def create_app(config: ApiConfig) -> FastAPI:
    """Load artifacts and build the application; raises ConfigError early."""
    config.validate()
    store = load_vectors(config.vectors)
    tables = {model: read_table(path, model) for model, path in config.collocations.items()}
    engine = Idiomifier(store, tables, default_model=config.default_model)

    app = FastAPI(title="idiomatch", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    @app.get("/api/idiomify")
    def api_idiomify(
        phrase: str | None = Query(default=None),
        k: int = Query(default=5),
        model: str | None = Query(default=None),
    ) -> JSONResponse:
        if phrase is None or not phrase.strip():
            raise HTTPException(status_code=400, detail="missing phrase")
        if not 1 <= k <= MAX_K:
            raise HTTPException(status_code=400, detail=f"k must be in [1, {MAX_K}]")
        if model is not None and model not in tables:
            raise HTTPException(status_code=400, detail=f"unknown model {model!r}")
        response = engine.idiomify(phrase, k=k, model=model)
        body = {
            "query": response.query,
            "refined_tokens": list(response.refined_tokens),
            "results": [
                {
                    "idiom": result.idiom_key,
                    "similarity": result.similarity,
                    "collocations": {
                        category: [{"lemma": lemma, "score": score} for lemma, score in pairs]
                        for category, pairs in result.collocations.items()
                    },
                }
                for result in response.results
            ],
        }
        if response.reason is not None:
            body["reason"] = response.reason
        return JSONResponse(body)

    @app.get("/api/neighbors")
    def api_neighbors(
        idiom: str = Query(default=""),
        k: int = Query(default=5),
    ) -> JSONResponse:
        if not 1 <= k <= MAX_K:
            raise HTTPException(status_code=400, detail=f"k must be in [1, {MAX_K}]")
        if idiom not in store.idiom_keys:
            raise HTTPException(
                status_code=404,
                detail={"error": f"unknown idiom {idiom!r}", "hint": _hint_keys(store.idiom_keys, idiom)},
            )
        neighbors = engine.neighbors(idiom, k=k)
        return JSONResponse([{"idiom": key, "similarity": sim} for key, sim in neighbors])

    @app.get("/api/health")
    def api_health() -> JSONResponse:
        return JSONResponse(
            {
                "status": "ok",
                "idioms": len(store.idiom_keys),
                "vocab": len(store.vocab),
                "model": config.default_model,
            }
        )

    if config.static_dir is not None:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
