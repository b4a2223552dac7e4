"""
Aprendiz bayesiano: estimación MAP de c a partir de tokens (F1, peso)

La log-verosimilitud ponderada de un lote es
    -sum_i w_i (y_i - c)^2 / (2 sigma^2)
que, con prior plano, tiene su máximo exacto en la media ponderada de y_i.
Con prior no plano se busca primero en una rejilla uniforme sobre el dominio
recortado y después se refina con sección dorada dentro de la celda ganadora.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import numpy as np
from loguru import logger

from src.core.lexicon import LexiconParams
from src.core.prior import PriorSpec, prior_log_density, prior_log_density_array

GRID_SIZE = 2048
TOL_MAP = 1e-3
GOLDEN_RATIO = (1 + math.sqrt(5)) / 2

# Filas por bloque al evaluar la rejilla (limita la memoria de learners x rejilla)
_CHUNK_ROWS = 512


@dataclass(frozen=True, eq=False)
class TokenBatch:
    """
    Lote de datos de aprendizaje de un learner

    Args:
        y: Valores de F1 (Hz)
        w: Pesos no negativos, misma forma que y
        sigma: Desviación de producción asumida por el learner (= sigma_a)
    """
    y: np.ndarray
    w: np.ndarray
    sigma: float

    def __post_init__(self):
        y = np.array(self.y, dtype=float).ravel()
        w = np.array(self.w, dtype=float).ravel()
        if y.size == 0:
            raise ValueError("TokenBatch must contain at least one token")
        if w.shape != y.shape:
            raise ValueError(f"weights shape {w.shape} does not match tokens shape {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ValueError("TokenBatch contains non-finite F1 values")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("TokenBatch weights must be finite and >= 0")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        y.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_pairs(cls, tokens: Iterable[Tuple[float, float]], sigma: float) -> "TokenBatch":
        pairs = list(tokens)
        if not pairs:
            raise ValueError("TokenBatch must contain at least one token")
        y, w = zip(*pairs)
        return cls(np.asarray(y, dtype=float), np.asarray(w, dtype=float), sigma)

    @classmethod
    def unweighted(cls, y, sigma: float) -> "TokenBatch":
        y = np.asarray(y, dtype=float)
        return cls(y, np.ones_like(y), sigma)

    def __len__(self) -> int:
        return self.y.size

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())

    @property
    def weighted_mean(self) -> float:
        return float((self.w * self.y).sum() / self.w.sum())


def posterior_log_density(c: float, batch: TokenBatch, prior: PriorSpec, lex: LexiconParams) -> float:
    """
    Log-posterior sin normalizar de c dado un lote

    Returns:
        -sum w_i (y_i - c)^2 / (2 sigma^2) + prior_log_density(c)
    """
    if batch is None or len(batch) == 0:
        raise ValueError("posterior_log_density needs a non-empty TokenBatch")
    log_lik = -float(np.sum(batch.w * (batch.y - c) ** 2)) / (2.0 * batch.sigma ** 2)
    return log_lik + prior_log_density(c, prior, lex)


def map_estimate(batch: TokenBatch, prior: PriorSpec, lex: LexiconParams,
                 grid_size: int = GRID_SIZE, tol: float = TOL_MAP) -> float:
    """
    Estimación MAP de c para un lote

    Con prior plano devuelve la media ponderada exacta (sin recortar al dominio);
    en otro caso el maximizador global dentro del dominio recortado.
    """
    c_hat = map_estimate_many(batch.y[None, :], batch.w[None, :], batch.sigma, prior, lex,
                              grid_size=grid_size, tol=tol)
    return float(c_hat[0])


def map_estimate_many(y: np.ndarray, w: np.ndarray, sigma: float, prior: PriorSpec,
                      lex: LexiconParams, grid_size: int = GRID_SIZE,
                      tol: float = TOL_MAP) -> np.ndarray:
    """
    Estimación MAP vectorizada: una fila de tokens por learner

    Args:
        y: Array (learners, n) de F1
        w: Array (learners, n) de pesos >= 0
        sigma: Desviación asumida por los learners
        prior: Prior de categoricidad
        lex: Parámetros del lexicon
        grid_size: Puntos de la rejilla inicial
        tol: Tolerancia de la sección dorada (Hz)

    Returns:
        Array (learners,) con c_hat
    """
    y = np.atleast_2d(np.asarray(y, dtype=float))
    w = np.atleast_2d(np.asarray(w, dtype=float))
    sw = w.sum(axis=1)
    swy = (w * y).sum(axis=1)

    empty = sw <= 0
    if empty.any():
        logger.warning(f"{int(empty.sum())} learner(s) received only zero-weight tokens; using the prior alone")
    ybar = np.divide(swy, sw, out=np.full(sw.shape, lex.midpoint), where=~empty)

    if prior.family == "flat":
        return ybar

    precision = np.where(empty, 0.0, sw / sigma ** 2)
    return _grid_then_golden(ybar, precision, prior, lex, grid_size, tol)


def golden_section_max(f: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray,
                       tol: float = TOL_MAP) -> np.ndarray:
    """
    Sección dorada vectorizada (maximización), un intervalo [a, b] por elemento

    Cada elemento deja de iterar cuando su intervalo baja de tol, así el
    resultado de un elemento no depende del resto del bloque.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)

    c = b - (b - a) / GOLDEN_RATIO
    d = a + (b - a) / GOLDEN_RATIO
    active = (b - a) > tol
    while active.any():
        keep_left = f(c) > f(d)
        b = np.where(active & keep_left, d, b)
        a = np.where(active & ~keep_left, c, a)
        c = b - (b - a) / GOLDEN_RATIO
        d = a + (b - a) / GOLDEN_RATIO
        active = (b - a) > tol

    return (a + b) / 2


def _grid_then_golden(ybar: np.ndarray, precision: np.ndarray, prior: PriorSpec,
                      lex: LexiconParams, grid_size: int, tol: float) -> np.ndarray:
    lo, hi = lex.search_domain
    grid = np.linspace(lo, hi, grid_size)
    prior_grid = prior_log_density_array(grid, prior, lex)

    out = np.empty_like(ybar)
    for start in range(0, ybar.size, _CHUNK_ROWS):
        sl = slice(start, start + _CHUNK_ROWS)
        yb = ybar[sl]
        prec = precision[sl]

        post = -0.5 * prec[:, None] * (grid[None, :] - yb[:, None]) ** 2 + prior_grid[None, :]
        k = np.argmax(post, axis=1)
        best_c = grid[k]
        best_val = post[np.arange(k.size), k]

        def objective(c: np.ndarray, yb=yb, prec=prec) -> np.ndarray:
            return -0.5 * prec * (c - yb) ** 2 + prior_log_density_array(c, prior, lex)

        left = grid[np.maximum(k - 1, 0)]
        right = grid[np.minimum(k + 1, grid_size - 1)]
        refined = golden_section_max(objective, left, right, tol)
        out[sl] = np.where(objective(refined) >= best_val, refined, best_c)

    return out
