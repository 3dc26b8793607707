from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass

from .datum.embedding import DEFAULT_TOLERANCE
from .datum.errors import ToolkitError
from .datum.lattice import DEFAULT_MAX_RANK
from .datum.rootsystem import DEFAULT_MAX_WEYL


class SettingsError(ToolkitError):
    pass


@dataclass(frozen=True)
class Settings:
    max_weyl: int = DEFAULT_MAX_WEYL
    max_rank: int = DEFAULT_MAX_RANK
    log_level: str = "WARNING"
    embed_tol: float = DEFAULT_TOLERANCE


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    env = os.environ if environ is None else environ
    level = env.get("RDT_LOG_LEVEL", "WARNING").strip().upper()
    if not isinstance(logging.getLevelName(level), int):
        raise SettingsError(f"RDT_LOG_LEVEL: unknown level {level!r}")
    return Settings(
        max_weyl=_positive_int(env, "RDT_MAX_WEYL", DEFAULT_MAX_WEYL),
        max_rank=_positive_int(env, "RDT_MAX_RANK", DEFAULT_MAX_RANK),
        log_level=level,
        embed_tol=_positive_float(env, "RDT_EMBED_TOL", DEFAULT_TOLERANCE),
    )


def _positive_int(env: Mapping[str, str], name: str, default: int) -> int:
    raw = env.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise SettingsError(f"{name}: expected an integer, got {raw!r}") from exc
    if value <= 0:
        raise SettingsError(f"{name}: must be positive, got {value}")
    return value


def _positive_float(env: Mapping[str, str], name: str, default: float) -> float:
    raw = env.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError as exc:
        raise SettingsError(f"{name}: expected a number, got {raw!r}") from exc
    if not value > 0:
        raise SettingsError(f"{name}: must be positive, got {raw}")
    return value
