"""
Logger configuration usando loguru
"""

import os
import sys
from typing import Optional

from loguru import logger

from src.core.errors import ConfigurationError

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")

CONSOLE_FORMAT = ("<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
                  "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>")
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"
LIBRARY_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>"


def normalize_level(level: Optional[str]) -> str:
    """Nivel en mayúsculas; ConfigurationError('logging.level') si no existe"""
    name = str(level or "INFO").strip().upper()
    if name not in LOG_LEVELS:
        raise ConfigurationError("logging.level", f"unknown level {level!r}; expected one of {list(LOG_LEVELS)}")
    return name


def setup_logger(log_file: Optional[str] = "logs/actuation.log",
                 level: str = "INFO",
                 rotation: str = "10 MB",
                 retention: str = "30 days"):
    """
    Configura el sistema de logging del simulador

    Args:
        log_file: Ruta al archivo de log (None o "" desactiva el archivo)
        level: Nivel de logging (DEBUG, INFO, WARNING, ERROR)
        rotation: Tamaño para rotar logs
        retention: Tiempo de retención de logs antiguos

    Returns:
        El logger de loguru ya configurado
    """
    level = normalize_level(level)
    logger.remove()

    logger.add(sys.stdout, format=CONSOLE_FORMAT, level=level, colorize=True)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        logger.add(log_file, format=FILE_FORMAT, level=level, rotation=rotation,
                   retention=retention, compression="zip", enqueue=True)

    logger.debug(f"Logger initialized (level={level}, file={log_file or '-'})")
    return logger


# Handler por defecto para uso como librería
logger.remove()
logger.add(sys.stdout, level="INFO", format=LIBRARY_FORMAT)
