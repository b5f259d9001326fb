"""Settings loaded from config.yaml, a .env file and environment overrides."""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import structlog
import yaml
from dotenv import load_dotenv

from nilstrat.core.exceptions import ParseError

logger = structlog.get_logger()

DEFAULT_CONFIG_PATH = "config.yaml"

# env var -> (path in the config document, converter)
ENV_OVERRIDES = {
    "NILSTRAT_SEED": (["sampling", "seed"], int),
    "NILSTRAT_BOUND": (["sampling", "bound"], int),
    "NILSTRAT_TRIALS": (["selftest", "trials"], int),
    "NILSTRAT_WORKERS": (["selftest", "workers"], int),
    "NILSTRAT_GENERIC_MODE": (["generic", "mode"], str),
    "NILSTRAT_SYMBOLIC_MAX_DIM": (["generic", "symbolic_max_dim"], int),
    "LOG_LEVEL": (["observability", "logging", "level"], str),
}


@dataclass
class SamplingSettings:
    seed: int = 0
    bound: int = 1000
    group_bound: int = 3
    group_factors: int = 3
    witness_attempts: int = 64


@dataclass
class GenericSettings:
    mode: str = "symbolic"
    symbolic_max_dim: int = 12


@dataclass
class SelftestSettings:
    trials: int = 1000
    workers: int = 1


@dataclass
class Settings:
    sampling: SamplingSettings = field(default_factory=SamplingSettings)
    generic: GenericSettings = field(default_factory=GenericSettings)
    selftest: SelftestSettings = field(default_factory=SelftestSettings)
    log_level: str = "INFO"

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "Settings":
        sampling = config.get("sampling", {}) or {}
        generic = config.get("generic", {}) or {}
        selftest = config.get("selftest", {}) or {}
        logging_config = (config.get("observability", {}) or {}).get("logging", {}) or {}
        return cls(
            sampling=SamplingSettings(
                seed=sampling.get("seed", 0),
                bound=sampling.get("bound", 1000),
                group_bound=sampling.get("group_bound", 3),
                group_factors=sampling.get("group_factors", 3),
                witness_attempts=sampling.get("witness_attempts", 64),
            ),
            generic=GenericSettings(
                mode=generic.get("mode", "symbolic"),
                symbolic_max_dim=generic.get("symbolic_max_dim", 12),
            ),
            selftest=SelftestSettings(
                trials=selftest.get("trials", 1000),
                workers=selftest.get("workers", 1),
            ),
            log_level=str(logging_config.get("level", "INFO")).upper(),
        )


def apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    for env_var, (path, convert) in ENV_OVERRIDES.items():
        if env_var not in os.environ:
            continue
        current = config
        for key in path[:-1]:
            current = current.setdefault(key, {})
        try:
            value = convert(os.environ[env_var])
        except ValueError:
            raise ParseError(f"invalid value for {env_var}", field=env_var)
        current[path[-1]] = value
        logger.debug("Applied environment override", variable=env_var, value=value)
    return config


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """Read config.yaml (path argument, NILSTRAT_CONFIG, or the working directory)"""
    load_dotenv()
    path = Path(path or os.environ.get("NILSTRAT_CONFIG", DEFAULT_CONFIG_PATH))
    config: Dict[str, Any] = {}
    if path.exists():
        try:
            config = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            raise ParseError(f"invalid config file {path}", line=mark.line + 1 if mark else None)
        if not isinstance(config, dict):
            raise ParseError(f"config file {path} must be a mapping", line=1)
    return Settings.from_dict(apply_env_overrides(config))
