"""
Barrido de parámetros: ejecuta una rejilla de escenarios hasta el estado
estable (o T_max), resume cada celda y localiza bifurcaciones
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from tqdm import tqdm

from src.core.errors import ConfigurationError
from src.core.lexicon import LexiconParams
from src.simulation.engine import run_trajectory
from src.simulation.population import GenerationSummary
from src.simulation.random_streams import replicate_seed
from src.simulation.scenarios import (
    LEXICON_PARAMETERS, PARAMETER_ATTRIBUTES, PRIOR_PARAMETERS, ScenarioConfig,
)
from src.sweep.stability import DEFAULT_DELTA, DEFAULT_WINDOW

DEFAULT_T_MAX = 2500
REGIME_MARGIN = 30.0

# Parámetros que controla el propio barrido y no pueden ser ejes
_RESERVED_AXES = {"seed", "T", "stop_on_stable", "stable_window", "stable_delta"}
SWEEP_AXES = tuple(
    name for name in (*PARAMETER_ATTRIBUTES, *PRIOR_PARAMETERS, *LEXICON_PARAMETERS)
    if name not in _RESERVED_AXES
)


@dataclass(frozen=True)
class SweepSpec:
    """
    Args:
        base: Escenario base
        axes: 1-2 ejes como (nombre, valores), en orden
        T_max: Tope de generaciones por corrida
        replicates: Semillas por celda
        window: Ventana W de detección de estado estable
        delta: Umbral (Hz) de detección
        keep_trajectories: Conserva los resúmenes de cada corrida
    """
    base: ScenarioConfig
    axes: Tuple[Tuple[str, Tuple[Any, ...]], ...]
    T_max: int = DEFAULT_T_MAX
    replicates: int = 1
    window: int = DEFAULT_WINDOW
    delta: float = DEFAULT_DELTA
    keep_trajectories: bool = False

    def __post_init__(self):
        axes = tuple((name, tuple(values)) for name, values in self.axes)
        object.__setattr__(self, "axes", axes)
        if not 1 <= len(axes) <= 2:
            raise ConfigurationError("sweep.axes", f"expected 1 or 2 axes, got {len(axes)}")
        names = [name for name, _ in axes]
        if len(set(names)) != len(names):
            raise ConfigurationError("sweep.axes", f"duplicate axis names {names}")
        for name, values in axes:
            if name not in SWEEP_AXES:
                raise ConfigurationError(f"sweep.axes.{name}", "not a sweepable scenario parameter")
            if not values:
                raise ConfigurationError(f"sweep.axes.{name}", "value list is empty")
        for key, value, minimum in (("sweep.T_max", self.T_max, 1), ("sweep.replicates", self.replicates, 1),
                                    ("sweep.window", self.window, 1)):
            if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
                raise ConfigurationError(key, f"must be an integer >= {minimum}, got {value!r}")
        if not self.delta > 0:
            raise ConfigurationError("sweep.delta", f"must be > 0, got {self.delta}")

    @property
    def axis_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    def cells(self) -> List[Dict[str, Any]]:
        """Combinaciones de parámetros en orden de ejes (el último varía más rápido)"""
        names = self.axis_names
        return [dict(zip(names, combo)) for combo in itertools.product(*(values for _, values in self.axes))]

    def config_for(self, params: Dict[str, Any], replicate: int = 0) -> ScenarioConfig:
        config = self.base
        for name, value in params.items():
            config = config.with_parameter(name, value)
        return config.replace(
            T=self.T_max,
            seed=replicate_seed(self.base.seed, replicate),
            stop_on_stable=True,
            stable_window=self.window,
            stable_delta=self.delta,
        )


@dataclass
class SweepRun:
    """Una réplica de una celda"""
    params: Dict[str, Any]
    replicate: int
    seed: int
    final_mean_c: float
    final_mean_by_group: Dict[str, float]
    converged_at: Optional[int]
    generations: int
    summaries: Optional[List[GenerationSummary]] = None


@dataclass
class SweepCell:
    """Celda de la rejilla agregada sobre réplicas (medianas)"""
    params: Dict[str, Any]
    runs: List[SweepRun]
    final_mean_c: float
    final_mean_by_group: Dict[str, float]
    dispersion: float
    converged_at: Tuple[Optional[int], ...]
    regime: str

    @classmethod
    def from_runs(cls, params: Dict[str, Any], runs: List[SweepRun], lex: LexiconParams) -> "SweepCell":
        overall = np.array([r.final_mean_c for r in runs])
        groups = sorted({g for r in runs for g in r.final_mean_by_group})
        by_group = {g: float(np.median([r.final_mean_by_group[g] for r in runs])) for g in groups}
        final = float(np.median(overall))
        return cls(
            params=params,
            runs=runs,
            final_mean_c=final,
            final_mean_by_group=by_group,
            dispersion=float(np.std(overall)),
            converged_at=tuple(r.converged_at for r in runs),
            regime=classify_regime(final, lex),
        )


@dataclass
class SweepResult:
    spec: SweepSpec
    cells: List[SweepCell] = field(default_factory=list)

    @property
    def runs(self) -> List[SweepRun]:
        return [run for cell in self.cells for run in cell.runs]

    def value_grid(self) -> np.ndarray:
        """Matriz (len eje 1, len eje 2) con la media final; 1 x N para un eje"""
        shape = tuple(len(values) for _, values in self.spec.axes)
        grid = np.array([cell.final_mean_c for cell in self.cells]).reshape(shape)
        return grid if grid.ndim == 2 else grid[None, :]


def classify_regime(mean_c: float, lex: LexiconParams, margin: float = REGIME_MARGIN) -> str:
    """'none' cerca de mu_a, 'full' cerca de mu_i, 'intermediate' en otro caso"""
    if mean_c >= lex.mu_a - margin:
        return "none"
    if mean_c <= lex.mu_i + margin:
        return "full"
    return "intermediate"


def _run_cell(params: Dict[str, Any], replicate: int, config: ScenarioConfig, keep: bool) -> SweepRun:
    trajectory = run_trajectory(config)
    last = trajectory.summaries[-1]
    return SweepRun(
        params=params,
        replicate=replicate,
        seed=config.seed,
        final_mean_c=last.overall.mean_c,
        final_mean_by_group={g: stats.mean_c for g, stats in last.groups.items()},
        converged_at=trajectory.converged_at,
        generations=last.generation,
        summaries=trajectory.summaries if keep else None,
    )


def run_sweep(spec: SweepSpec, n_jobs: int = 1, progress: bool = True) -> SweepResult:
    """
    Ejecuta todas las celdas x réplicas

    Las configuraciones se validan antes de ejecutar nada; el orden del
    resultado sigue el orden de los ejes, sea cual sea el reparto entre workers.
    """
    tasks = []
    for params in spec.cells():
        for replicate in range(spec.replicates):
            try:
                config = spec.config_for(params, replicate)
            except ConfigurationError as e:
                raise ConfigurationError(e.key, f"invalid sweep cell {params}: {e.message}") from e
            tasks.append((params, replicate, config))

    logger.info(f"🔬 Sweep over {' x '.join(spec.axis_names)}: {len(tasks)} runs "
                f"(T_max={spec.T_max}, replicates={spec.replicates}, workers={n_jobs})")

    jobs = (delayed(_run_cell)(params, r, config, spec.keep_trajectories) for params, r, config in tasks)
    runs = Parallel(n_jobs=n_jobs)(tqdm(jobs, total=len(tasks), desc="sweep", disable=not progress))

    result = SweepResult(spec=spec)
    for i, params in enumerate(spec.cells()):
        cell_runs = runs[i * spec.replicates:(i + 1) * spec.replicates]
        result.cells.append(SweepCell.from_runs(params, cell_runs, spec.base.lex))

    regimes = Counter(cell.regime for cell in result.cells)
    unconverged = sum(1 for run in runs if run.converged_at is None)
    if unconverged:
        logger.warning(f"{unconverged}/{len(runs)} runs did not stabilise within T_max={spec.T_max}")
    logger.info(f"✅ Sweep finished: regimes {dict(regimes)}")
    return result


def find_bifurcation(grid: Union[SweepResult, Sequence[SweepCell]], axis: str,
                     jump: float) -> List[Tuple[SweepCell, SweepCell]]:
    """
    Pares de celdas adyacentes a lo largo de un eje cuya media final difiere
    en más de `jump` Hz
    """
    cells = grid.cells if isinstance(grid, SweepResult) else list(grid)
    if not cells:
        return []
    if axis not in cells[0].params:
        raise ValueError(f"axis {axis!r} not present in grid (axes: {list(cells[0].params)})")

    others = [name for name in cells[0].params if name != axis]
    lines: Dict[Tuple, List[SweepCell]] = {}
    for cell in cells:
        lines.setdefault(tuple(cell.params[o] for o in others), []).append(cell)

    pairs = []
    for line in lines.values():
        for left, right in zip(line, line[1:]):
            if abs(right.final_mean_c - left.final_mean_c) > jump:
                pairs.append((left, right))
    return pairs
