"""
Estado de la población y resúmenes por generación
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from src.core.agent import Agent, GROUP_CODES, GROUP_NAMES


@dataclass(frozen=True, eq=False)
class PopulationState:
    """
    Instantánea inmutable de una generación.

    Los grupos se guardan por bloques: primero todos los agentes 'A' y después
    los 'B'.

    Args:
        generation: Índice t >= 0
        c: Array (M,) con la c de cada agente
        groups: Array (M,) con códigos de grupo (0 = A, 1 = B)
        w_m: Array (M,) con el peso social individual
    """
    generation: int
    c: np.ndarray
    groups: np.ndarray
    w_m: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float).ravel()
        groups = np.array(self.groups, dtype=np.int8).ravel()
        w_m = np.array(self.w_m, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("PopulationState needs at least one agent")
        if groups.shape != c.shape or w_m.shape != c.shape:
            raise ValueError("c, groups and w_m must have the same length")
        if np.any(np.diff(groups) < 0) or not np.isin(groups, list(GROUP_CODES.values())).all():
            raise ValueError("groups must be laid out in blocks: all A agents before all B agents")
        if not np.all(np.isfinite(c)):
            raise ValueError("PopulationState contains non-finite c values")
        if self.generation < 0:
            raise ValueError(f"generation must be >= 0, got {self.generation}")
        for arr in (c, groups, w_m):
            arr.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "w_m", w_m)

    @classmethod
    def from_agents(cls, generation: int, agents: Iterable[Agent]) -> "PopulationState":
        agents = sorted(agents, key=lambda ag: GROUP_CODES[ag.group])
        return cls(
            generation=generation,
            c=[ag.c for ag in agents],
            groups=[GROUP_CODES[ag.group] for ag in agents],
            w_m=[ag.w_m for ag in agents],
        )

    @property
    def M(self) -> int:
        return self.c.size

    @property
    def group_codes(self) -> Tuple[int, ...]:
        return tuple(int(g) for g in np.unique(self.groups))

    @property
    def is_single_group(self) -> bool:
        return len(self.group_codes) == 1

    def group_slice(self, code: int) -> slice:
        start = int(np.searchsorted(self.groups, code, side="left"))
        stop = int(np.searchsorted(self.groups, code, side="right"))
        return slice(start, stop)

    def group_size(self, code: int) -> int:
        sl = self.group_slice(code)
        return sl.stop - sl.start

    def agent(self, index: int) -> Agent:
        return Agent(c=float(self.c[index]), group=GROUP_NAMES[int(self.groups[index])], w_m=float(self.w_m[index]))

    @property
    def agents(self) -> Tuple[Agent, ...]:
        return tuple(self.agent(i) for i in range(self.M))


@dataclass(frozen=True)
class GroupStats:
    mean_c: float
    sd_c: float
    q05: float
    q95: float
    size: int

    @classmethod
    def of(cls, values: np.ndarray) -> "GroupStats":
        q05, q95 = np.quantile(values, [0.05, 0.95])
        return cls(
            mean_c=float(np.mean(values)),
            sd_c=float(np.std(values)),
            q05=float(q05),
            q95=float(q95),
            size=int(values.size),
        )


@dataclass(frozen=True)
class GenerationSummary:
    """
    Estadísticos de C^t por grupo y para toda la población

    Args:
        generation: t
        groups: Estadísticos por etiqueta de grupo ('A', 'B')
        overall: Estadísticos de la población completa
    """
    generation: int
    groups: Dict[str, GroupStats] = field(default_factory=dict)
    overall: Optional[GroupStats] = None

    def mean_c(self, group: Optional[str] = None) -> float:
        if group is None:
            return self.overall.mean_c
        return self.groups[group].mean_c


def summarize(pop: PopulationState) -> GenerationSummary:
    groups = {}
    for code in pop.group_codes:
        groups[GROUP_NAMES[code]] = GroupStats.of(pop.c[pop.group_slice(code)])
    return GenerationSummary(generation=pop.generation, groups=groups, overall=GroupStats.of(pop.c))
