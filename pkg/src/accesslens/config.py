"""Pipeline configuration and run manifests.

Every subcommand reads only declared inputs, writes only into the output
directory, and drops a manifest (input hashes, config hash, seed,
library versions, timestamp) next to its artifacts.  Timestamps live
only in manifests so artifacts stay byte-reproducible.
"""

from __future__ import annotations

import hashlib
import importlib.resources
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import yaml

OUTPUT_DIR_ENV = "ACCESSLENS_OUT"


def packaged_data(name: str) -> str:
    """Path to a data file shipped inside the package."""
    return str(importlib.resources.files("accesslens").joinpath("data", name))


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    reviews: str | None = None
    pois: str | None = None
    region_assignments: str | None = None
    covariates: str | None = None
    labeled_examples: str | None = None
    agreement_table: str | None = None
    search_list: str = field(default_factory=lambda: packaged_data("search_list.txt"))
    stopwords: str = field(default_factory=lambda: packaged_data("stopwords.txt"))
    mapping_table: str = field(default_factory=lambda: packaged_data("poi_type_mapping.csv"))
    grid: str | None = None

    classifier_kind: str = "logistic_regression"  # or "sgd" or "remote"
    model_file: str | None = None
    endpoint: str | None = None
    remote_batch_size: int = 64

    poi_min_reviews: int = 5
    region_min_reviews: int = 10
    lsva_min_total: int = 10
    split_ratio: float = 0.8
    cv_folds: int = 10
    seed: int = 0
    idf_base: str = "e"

    level: str = "County"
    n_marginal_basis: int = 5
    sensitivity_thresholds: list[int] = field(
        default_factory=lambda: list(range(0, 51, 5)))

    output_dir: str = "out"

    def __post_init__(self) -> None:
        if self.poi_min_reviews < 0 or self.region_min_reviews < 0:
            raise ConfigError("thresholds must be >= 0")

    @classmethod
    def from_file(cls, path: str, overrides: dict | None = None
                  ) -> "PipelineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        if not isinstance(raw, dict):
            raise ConfigError(f"config file must be a mapping: {path}")
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        base = Path(path).parent
        for key in ("reviews", "pois", "region_assignments", "covariates",
                    "labeled_examples", "agreement_table", "search_list",
                    "stopwords", "mapping_table", "grid", "model_file"):
            if raw.get(key):
                raw[key] = str((base / raw[key]).resolve()
                               if not os.path.isabs(raw[key]) else raw[key])
        config = cls(**raw)
        env_out = os.environ.get(OUTPUT_DIR_ENV)
        if env_out:
            config.output_dir = env_out
        # explicit flag overrides outrank both the file and the environment
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key not in known:
                raise ConfigError(f"unknown override {key!r}")
            setattr(config, key, value)
        return config

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if not getattr(self, k)]
        if missing:
            raise ConfigError(f"config missing required inputs: {missing}")
        for key in keys:
            path = getattr(self, key)
            if isinstance(path, str) and not os.path.exists(path):
                raise ConfigError(f"input path does not exist: {key}={path}")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(output_dir: str, command: str, inputs: dict[str, str],
                   config: PipelineConfig) -> str:
    import numpy
    import scipy

    manifest = {
        "command": command,
        "inputs": {name: {"path": path, "sha256": _sha256(path)}
                   for name, path in sorted(inputs.items()) if path},
        "config": config.to_dict(),
        "config_hash": hashlib.sha256(
            json.dumps(config.to_dict(), sort_keys=True).encode()
        ).hexdigest(),
        "seed": config.seed,
        "versions": {
            "accesslens": "0.1.0",
            "numpy": numpy.__version__,
            "scipy": scipy.__version__,
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = os.path.join(output_dir, f"manifest_{command}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
