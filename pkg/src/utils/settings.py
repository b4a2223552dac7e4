"""
Ajustes de la aplicación: config/config.yaml + variables de entorno (.env)
"""

import os
from dataclasses import dataclass
from typing import Optional

import yaml
from dotenv import load_dotenv
from loguru import logger

load_dotenv()

CONFIG_PATH = "config/config.yaml"
WORKERS_ENV = "ACTUATION_WORKERS"


@dataclass(frozen=True)
class AppSettings:
    log_level: str = "INFO"
    log_file: str = "logs/actuation.log"
    log_rotation: str = "10 MB"
    log_retention: str = "30 days"
    output_dir: str = "output"
    float_format: str = "%.6f"
    workers: int = 1
    progress: bool = True


def _workers_from_env(default: int) -> int:
    raw = os.getenv(WORKERS_ENV)
    if not raw:
        return default
    try:
        workers = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {WORKERS_ENV}={raw!r}: not an integer")
        return default
    if workers == 0:
        logger.warning(f"Ignoring {WORKERS_ENV}=0; using {default}")
        return default
    return workers


def load_settings(config_path: Optional[str] = None) -> AppSettings:
    """
    Carga los ajustes; si el archivo no existe se usan los valores por defecto

    Args:
        config_path: Ruta a config.yaml (por defecto config/config.yaml)

    Returns:
        AppSettings con el número de workers ya resuelto contra ACTUATION_WORKERS
    """
    path = config_path or CONFIG_PATH
    try:
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.debug(f"{path} not found, using default settings")
        config = {}

    defaults = AppSettings()
    logging_cfg = config.get("logging", {}) or {}
    output_cfg = config.get("output", {}) or {}
    runtime_cfg = config.get("runtime", {}) or {}

    return AppSettings(
        log_level=str(logging_cfg.get("level", defaults.log_level)).upper(),
        log_file=logging_cfg.get("file", defaults.log_file) or "",
        log_rotation=logging_cfg.get("rotation", defaults.log_rotation),
        log_retention=logging_cfg.get("retention", defaults.log_retention),
        output_dir=output_cfg.get("dir", defaults.output_dir),
        float_format=output_cfg.get("float_format", defaults.float_format),
        workers=_workers_from_env(int(runtime_cfg.get("workers", defaults.workers))),
        progress=bool(runtime_cfg.get("progress", defaults.progress)),
    )
