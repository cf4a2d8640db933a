"""Runtime configuration: provider endpoints, politeness settings,
replay/record directories, service knobs.

A single file (YAML or JSON) can set any field; ARXPUB_* environment
variables override the file; CLI flags override both.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .matching import MatchThresholds

__version__ = "0.1.0"


@dataclass
class ResolverConfig:
    # upstream endpoints (overridable for proxies and tests)
    arxiv_base_url: str = "https://export.arxiv.org/api/query"
    dblp_base_url: str = "https://dblp.org/search/publ/api"
    crosscite_base_url: str = "https://doi.org"
    crossref_base_url: str = "https://api.crossref.org/works"
    semantic_scholar_base_url: str = "https://api.semanticscholar.org/graph/v1"
    openalex_base_url: str = "https://api.openalex.org/works"

    # politeness and auth
    semantic_scholar_api_key: Optional[str] = None
    mailto: Optional[str] = None
    user_agent: str = f"arxpub/{__version__}"

    # transport behaviour
    request_timeout: float = 10.0
    resolution_budget: float = 30.0
    retry_attempts: int = 3
    retry_base_delay: float = 1.0

    # record/replay; fixtures_dir set => replay, record_dir set => record
    fixtures_dir: Optional[Path] = None
    record_dir: Optional[Path] = None

    # matching
    thresholds: MatchThresholds = field(default_factory=MatchThresholds)

    # which databases to query (None = all four)
    enabled_databases: Optional[tuple[str, ...]] = None

    # service
    host: str = "127.0.0.1"
    port: int = 8000
    cache_ttl: float = 24 * 3600.0
    cache_capacity: int = 10_000
    rate_limit_per_minute: int = 10
    ui_dir: Optional[Path] = None

    # output
    tex_escape: bool = False

    @property
    def mode(self) -> str:
        return "replay" if self.fixtures_dir is not None else "live"

    def full_user_agent(self) -> str:
        if self.mailto:
            return f"{self.user_agent} (mailto:{self.mailto})"
        return self.user_agent

    @classmethod
    def from_file(cls, path: Path | str) -> "ResolverConfig":
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() in (".yaml", ".yml"):
            import yaml

            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must hold a mapping")
        return cls().updated(data)

    def updated(self, values: Mapping[str, object]) -> "ResolverConfig":
        """Copy with *values* applied; unknown keys are rejected loudly."""
        known = {f.name for f in dataclasses.fields(self)}
        changes: dict[str, object] = {}
        for key, value in values.items():
            if key == "thresholds" and isinstance(value, Mapping):
                changes["thresholds"] = MatchThresholds(**value)
                continue
            if key not in known:
                raise ValueError(f"unknown configuration key: {key}")
            if key in ("fixtures_dir", "record_dir", "ui_dir") and value is not None:
                value = Path(str(value))
            if key == "enabled_databases" and value is not None:
                value = tuple(str(v) for v in value)  # type: ignore[union-attr]
            changes[key] = value
        return dataclasses.replace(self, **changes)

    def with_env_overrides(self, environ: Optional[Mapping[str, str]] = None) -> "ResolverConfig":
        env = os.environ if environ is None else environ
        mapping = {
            "ARXPUB_MAILTO": ("mailto", str),
            "ARXPUB_S2_API_KEY": ("semantic_scholar_api_key", str),
            "ARXPUB_FIXTURES": ("fixtures_dir", Path),
            "ARXPUB_RECORD": ("record_dir", Path),
            "ARXPUB_HOST": ("host", str),
            "ARXPUB_PORT": ("port", int),
            "ARXPUB_TIMEOUT": ("request_timeout", float),
            "ARXPUB_RATE_LIMIT": ("rate_limit_per_minute", int),
            "ARXPUB_CACHE_TTL": ("cache_ttl", float),
            "ARXPUB_UI_DIR": ("ui_dir", Path),
        }
        changes: dict[str, object] = {}
        for var, (key, cast) in mapping.items():
            if var in env and env[var] != "":
                changes[key] = cast(env[var])
        return dataclasses.replace(self, **changes) if changes else self


def load_config(
    path: Optional[Path | str] = None,
    overrides: Optional[Mapping[str, object]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> ResolverConfig:
    """File < environment < explicit overrides."""
    config = ResolverConfig.from_file(path) if path else ResolverConfig()
    config = config.with_env_overrides(environ)
    if overrides:
        config = config.updated({k: v for k, v in overrides.items() if v is not None})
    return config
