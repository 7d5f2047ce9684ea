"""OVERVIEW:
Configuration layering for every flatmod command.

Lowest to highest precedence:
    model defaults → environment (.env via python-dotenv) → --config file → command-line flags

Config files are either a JSON object or `key=value` lines (`#` starts a
comment). Keys naming generator parameters (n, gamma, mu, tau2, ...) are
folded into the LFR template; `gamma` and `mu` also select the swept values.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv
from pydantic import ValidationError as PydanticValidationError

from src.models.exceptions import ConfigError
from src.models.experiment_models import ExperimentConfig

load_dotenv()

logger = logging.getLogger(__name__)

LFR_KEYS = {"n", "tau2", "average_degree", "max_degree", "min_community", "max_community"}
EXPERIMENT_KEYS = {
    "gammas", "mus", "seeds", "r_grid", "R_grid", "output_dir", "parallelism",
    "low_cut", "high_cut", "bucket_cap", "full_scale", "variant",
}
ALIASES = {"gamma": "gammas", "tau1": "gammas", "mu": "mus", "seed": "seeds", "r": "r_grid", "R": "R_grid",
           "out": "output_dir", "workers": "parallelism"}


def env_settings() -> Dict[str, Any]:
    """FLATMOD_* variables that map onto ExperimentConfig fields"""
    values: Dict[str, Any] = {}
    if os.getenv("FLATMOD_OUTPUT_DIR"):
        values["output_dir"] = os.getenv("FLATMOD_OUTPUT_DIR")
    if os.getenv("FLATMOD_WORKERS"):
        values["parallelism"] = os.getenv("FLATMOD_WORKERS")
    return values


def log_level() -> str:
    return os.getenv("FLATMOD_LOG_LEVEL", "INFO").upper()


def log_format() -> str:
    return os.getenv("FLATMOD_LOG_FORMAT", "json").lower()


def database_url(output_dir: Union[str, Path]) -> str:
    return os.getenv("FLATMOD_DATABASE_URL") or f"sqlite:///{Path(output_dir) / 'ledger.sqlite3'}"


def _parse_key_values(text: str) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {number}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return data
    return _parse_key_values(text)


def _normalise(values: Dict[str, Any]) -> Dict[str, Any]:
    """Split flat keys into ExperimentConfig fields plus an `lfr` dict"""
    experiment: Dict[str, Any] = {}
    lfr: Dict[str, Any] = dict(values.get("lfr") or {})
    for key, value in values.items():
        if key == "lfr" or value is None:
            continue
        key = ALIASES.get(key, key)
        if key in LFR_KEYS:
            lfr[key] = value
        elif key in EXPERIMENT_KEYS:
            experiment[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    if isinstance(experiment.get("full_scale"), str):
        experiment["full_scale"] = experiment["full_scale"].lower() in {"1", "true", "yes", "on"}
    if lfr:
        experiment["lfr"] = lfr
    return experiment


def _merge(base: Dict[str, Any], extra: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in extra.items():
        if key == "lfr" and "lfr" in merged:
            merged["lfr"] = {**merged["lfr"], **value}
        else:
            merged[key] = value
    return merged


def load_config(config_file: Optional[Union[str, Path]] = None,
                overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Build an ExperimentConfig from env, an optional file and flag overrides"""
    layered = _normalise(env_settings())
    if config_file:
        layered = _merge(layered, _normalise(read_config_file(config_file)))
    if overrides:
        layered = _merge(layered, _normalise(overrides))

    try:
        if layered.get("full_scale"):
            full = {k: v for k, v in layered.items() if k != "full_scale"}
            config = ExperimentConfig.full_scale_grid(**full)
        else:
            config = ExperimentConfig(**layered)
    except PydanticValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e

    if config.full_scale:
        runs = len(config.gammas) * len(config.mus) * len(config.seeds) * (len(config.r_grid) + len(config.R_grid))
        logger.warning(
            "full-scale grid requested; expect a long run",
            extra={"seeds": len(config.seeds), "climbs": runs},
        )
    return config
