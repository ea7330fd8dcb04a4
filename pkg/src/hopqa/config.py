"""Pipeline configuration.

A single dataclass covers every knob: similarity thresholds, the screening
budget, backend selection for each stage, remote endpoint, data-table
override paths, and execution options.  Configs load from a JSON file and
accept CLI flag overrides on top.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

EXTRACTOR_BACKENDS = ("rule", "remote-cre", "remote-sre")
READER_BACKENDS = ("lexical", "remote")
COMPARATOR_BACKENDS = ("deterministic", "remote")
SCREENING_STRATEGIES = ("qetps", "none", "lexical-rank")


class ConfigError(ValueError):
    """Invalid configuration value or unknown key."""


@dataclass
class PipelineConfig:
    sigma_entity: float = 0.8
    sigma_relation: float = 0.65
    granularity: str = "character"
    context_budget_tokens: int = 512
    extractor_backend: str = "rule"
    reader_backend: str = "lexical"
    comparator_backend: str = "deterministic"
    screening: str = "qetps"
    remote_endpoint: str | None = None
    remote_timeout: float = 10.0
    parallelism: int = 1
    cue_table_path: str | None = None
    relation_vocab_path: str | None = None
    statement_patterns_path: str | None = None
    polarity_table_path: str | None = None
    entity_annotations_path: str | None = None
    strict_load: bool = False
    collect_debug: bool = False

    def validate(self) -> "PipelineConfig":
        if not (0.0 < self.sigma_entity <= 1.0):
            raise ConfigError(f"sigma_entity out of range: {self.sigma_entity}")
        if not (0.0 < self.sigma_relation <= 1.0):
            raise ConfigError(f"sigma_relation out of range: {self.sigma_relation}")
        if self.granularity not in ("character", "token"):
            raise ConfigError(f"unknown granularity: {self.granularity!r}")
        if self.context_budget_tokens < 1:
            raise ConfigError("context_budget_tokens must be positive")
        if self.extractor_backend not in EXTRACTOR_BACKENDS:
            raise ConfigError(f"unknown extractor_backend: {self.extractor_backend!r}")
        if self.reader_backend not in READER_BACKENDS:
            raise ConfigError(f"unknown reader_backend: {self.reader_backend!r}")
        if self.comparator_backend not in COMPARATOR_BACKENDS:
            raise ConfigError(f"unknown comparator_backend: {self.comparator_backend!r}")
        if self.screening not in SCREENING_STRATEGIES:
            raise ConfigError(f"unknown screening strategy: {self.screening!r}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.remote_timeout <= 0:
            raise ConfigError("remote_timeout must be positive")
        needs_remote = (
            self.extractor_backend.startswith("remote")
            or self.reader_backend == "remote"
            or self.comparator_backend == "remote"
        )
        if needs_remote and not self.remote_endpoint:
            raise ConfigError("a remote backend is selected but remote_endpoint is unset")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        return cls(**data).validate()

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def apply_overrides(self, **overrides) -> "PipelineConfig":
        """New config with non-None overrides applied, re-validated."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        known = {f.name for f in dataclasses.fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        return dataclasses.replace(self, **changes).validate()

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
