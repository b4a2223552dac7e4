"""
Agente: hablante/aprendiz con media c de la variante contextual
"""

import math
from dataclasses import dataclass

GROUP_A = "A"
GROUP_B = "B"
GROUP_CODES = {GROUP_A: 0, GROUP_B: 1}
GROUP_NAMES = (GROUP_A, GROUP_B)


@dataclass(frozen=True)
class Agent:
    """
    Args:
        c: Media de F1 de la variante contextual (Hz)
        group: Grupo 'A' o 'B' (escenarios de un solo grupo usan 'A')
        w_m: Peso social individual (Modelo 4), >= 1
    """
    c: float
    group: str = GROUP_A
    w_m: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError(f"Agent.c must be finite, got {self.c}")
        if self.group not in GROUP_CODES:
            raise ValueError(f"Unknown group tag: {self.group!r}")
        if self.w_m < 1.0:
            raise ValueError(f"Agent.w_m must be >= 1, got {self.w_m}")
