"""
Parámetros del lexicon (V1 = /a/, V2 = /i/) y dominio de búsqueda de c
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.errors import ConfigurationError

# Distancia mínima (Hz) entre c y las medias de categoría
EPSILON_DOMAIN = 0.5


@dataclass(frozen=True)
class LexiconParams:
    """
    Medias y desviaciones de F1 de las dos categorías fijas.

    Args:
        mu_a: Media de F1 de V1 (/a/) en Hz
        mu_i: Media de F1 de V2 (/i/) en Hz
        sigma_a: Desviación de F1 de V1 en Hz (también la de V12)
        sigma_i: Desviación de F1 de V2 en Hz
    """
    mu_a: float = 730.0
    mu_i: float = 530.0
    sigma_a: float = 50.0
    sigma_i: float = 50.0

    def __post_init__(self):
        for name in ("mu_a", "mu_i", "sigma_a", "sigma_i"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise ConfigurationError(f"lexicon.{name}", f"must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigurationError(f"lexicon.{name}", "must be finite")
        if not self.mu_i < self.mu_a:
            raise ConfigurationError("lexicon.mu_i", f"must be below mu_a ({self.mu_i} >= {self.mu_a})")
        if self.sigma_a <= 0:
            raise ConfigurationError("lexicon.sigma_a", "must be > 0")
        if self.sigma_i <= 0:
            raise ConfigurationError("lexicon.sigma_i", "must be > 0")

    @property
    def span(self) -> float:
        return self.mu_a - self.mu_i

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.mu_a + self.mu_i)

    @property
    def search_domain(self) -> Tuple[float, float]:
        """Intervalo cerrado [mu_i + eps, mu_a - eps]"""
        return self.mu_i + EPSILON_DOMAIN, self.mu_a - EPSILON_DOMAIN

    def in_domain(self, c: float) -> bool:
        lo, hi = self.search_domain
        return lo <= c <= hi

    def clamp(self, c):
        """Recorta c (escalar o array) al dominio de búsqueda"""
        lo, hi = self.search_domain
        return np.clip(c, lo, hi)

    def coarticulation(self, c):
        """Fracción de coarticulación (mu_a - c) / (mu_a - mu_i), recortada a [0, 1]"""
        return np.clip((self.mu_a - np.asarray(c, dtype=float)) / self.span, 0.0, 1.0)
