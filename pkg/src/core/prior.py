"""
Prior de categoricidad sobre c

Tres familias:
    flat      -> 0 en todo el dominio
    gaussian  -> centrada en mu_a con escala tau
    endpoint  -> (a - 1) * [ln u + ln(1 - u)], u = (c - mu_i) / (mu_a - mu_i)

Las densidades son log-densidades sin normalizar; solo importa el argmax.
"""

import math
from dataclasses import dataclass

import numpy as np

from src.core.errors import ConfigurationError, DomainError
from src.core.lexicon import LexiconParams

PRIOR_FAMILIES = ("flat", "gaussian", "endpoint")


@dataclass(frozen=True)
class PriorSpec:
    """
    Args:
        family: 'flat', 'gaussian' o 'endpoint'
        a: Fuerza del sesgo de categoricidad (menor a = sesgo más fuerte)
        tau: Desviación (Hz) de la familia gaussiana
    """
    family: str = "endpoint"
    a: float = 0.02
    tau: float = 50.0

    def __post_init__(self):
        if self.family not in PRIOR_FAMILIES:
            raise ConfigurationError("prior.family", f"unknown family {self.family!r}; expected one of {PRIOR_FAMILIES}")
        for name in ("a", "tau"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise ConfigurationError(f"prior.{name}", f"must be a number, got {value!r}")
        if not (math.isfinite(self.a) and self.a > 0):
            raise ConfigurationError("prior.a", f"must be > 0, got {self.a}")
        if self.family == "gaussian" and not (math.isfinite(self.tau) and self.tau > 0):
            raise ConfigurationError("prior.tau", f"must be > 0 for the gaussian family, got {self.tau}")


def prior_log_density(c: float, prior: PriorSpec, lex: LexiconParams) -> float:
    """
    Log-densidad (sin normalizar) del prior en un punto

    Args:
        c: Valor de c en Hz
        prior: Especificación del prior
        lex: Parámetros del lexicon

    Returns:
        Log-densidad sin normalizar

    Raises:
        DomainError: c no finito, o fuera del dominio recortado (familia endpoint)
    """
    if not math.isfinite(c):
        raise DomainError(f"c must be finite, got {c}")

    if prior.family == "flat":
        return 0.0
    if prior.family == "gaussian":
        return -((c - lex.mu_a) ** 2) / (2.0 * prior.tau ** 2)

    if not lex.in_domain(c):
        lo, hi = lex.search_domain
        raise DomainError(f"c={c} outside endpoint-prior domain [{lo}, {hi}]")
    u = (c - lex.mu_i) / lex.span
    return (prior.a - 1.0) * (math.log(u) + math.log1p(-u))


def prior_log_density_array(c: np.ndarray, prior: PriorSpec, lex: LexiconParams) -> np.ndarray:
    """Versión vectorizada sin validación; c debe estar dentro del dominio"""
    c = np.asarray(c, dtype=float)
    if prior.family == "flat":
        return np.zeros_like(c)
    if prior.family == "gaussian":
        return -((c - lex.mu_a) ** 2) / (2.0 * prior.tau ** 2)
    u = (c - lex.mu_i) / lex.span
    return (prior.a - 1.0) * (np.log(u) + np.log1p(-u))
