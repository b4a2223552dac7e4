"""
Detección de estado estable sobre la media poblacional de c
"""

from typing import Optional, Sequence

from src.simulation.population import GenerationSummary

DEFAULT_WINDOW = 50
DEFAULT_DELTA = 0.5


def stable_at(means: Sequence[float], t: int, window: int, delta: float) -> bool:
    """True si |mean(t) - mean(t - W)| < delta (means indexado por generación)"""
    if t < window:
        return False
    return abs(means[t] - means[t - window]) < delta


def detect_stable(trajectory: Sequence[GenerationSummary], window: int = DEFAULT_WINDOW,
                  delta: float = DEFAULT_DELTA) -> Optional[int]:
    """
    Primera generación t >= W con |mean_c(t) - mean_c(t - W)| < delta

    Args:
        trajectory: Resúmenes consecutivos desde t = 0
        window: Ventana W (>= 1)
        delta: Umbral en Hz

    Returns:
        Generación detectada o None
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    means = [s.overall.mean_c for s in trajectory]
    for t in range(window, len(means)):
        if stable_at(means, t, window, delta):
            return trajectory[t].generation
    return None
