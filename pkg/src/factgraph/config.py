"""Project configuration: a TOML file with env-var overrides for credentials."""

from __future__ import annotations

import sys
from pathlib import Path

from .validate import DasConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CONFIG_FILE = "config.toml"


def load_config(root: str | Path) -> dict:
    path = Path(root) / CONFIG_FILE
    if not path.exists():
        return {}
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def das_config_from(config: dict, **overrides) -> DasConfig:
    """Build a DasConfig from the [das] section, applying CLI overrides."""
    section = dict(config.get("das", {}))
    section.update({k: v for k, v in overrides.items() if v is not None})
    return DasConfig(
        n_hits=int(section.get("n_hits", 10)),
        k_pages=int(section.get("k_pages", 5)),
        relevance_threshold=float(section.get("relevance_threshold", 7.0)),
        min_evidence=int(section.get("min_evidence", 1)),
        page_word_budget=int(section.get("page_word_budget", 2000)),
        judge_mode=str(section.get("judge_mode", "truncate")),
    )


def client_settings_from(config: dict) -> dict:
    """Flatten the per-role sections into the client factory's settings map."""
    settings = {}
    for role in ("llm", "search", "pagerank"):
        section = config.get(role, {})
        for key in ("endpoint", "key", "model"):
            if key in section:
                settings[f"{role}_{key}"] = section[key]
    return settings
