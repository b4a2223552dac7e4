"""
Presets para reproducir las figuras de resultados

Cada preset documenta qué valores vienen del texto de las figuras y cuáles
son elecciones propias (rejillas de paneles que el texto no especifica).
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError
from src.core.prior import PriorSpec
from src.simulation.scenarios import InitialDistribution, ModelKind, ScenarioConfig
from src.sweep.sweep_engine import DEFAULT_T_MAX, SweepSpec

KIND_RUN = "run"
KIND_SWEEP = "sweep"
KIND_PANELS = "panels"

LAMBDA_GRID = tuple(float(x) for x in np.round(np.arange(0.0, 4.0 + 1e-9, 0.25), 2))
A_GRID = tuple(float(x) for x in np.round(np.arange(0.005, 0.1 + 1e-9, 0.005), 3))


@dataclass(frozen=True)
class FigurePreset:
    """
    Args:
        figure_id: Identificador (fig4, fig5, ...)
        description: Qué reproduce
        kind: 'run' (una trayectoria), 'sweep' (rejilla + heatmap) o
            'panels' (una trayectoria por combinación de parámetros)
        base: Escenario base
        axes: Ejes del barrido o de los paneles
        sources: Procedencia de los valores
    """
    figure_id: str
    description: str
    kind: str
    base: ScenarioConfig
    axes: Tuple[Tuple[str, Tuple[Any, ...]], ...] = ()
    T_max: int = DEFAULT_T_MAX
    replicates: int = 1
    sample_every: Optional[int] = None
    sources: str = ""

    def with_seed(self, seed: Optional[int]) -> "FigurePreset":
        if seed is None:
            return self
        return replace(self, base=self.base.replace(seed=seed))

    def sweep_spec(self, replicates: Optional[int] = None) -> SweepSpec:
        if self.kind != KIND_SWEEP:
            raise ConfigurationError("figure", f"{self.figure_id} is not a sweep preset")
        return SweepSpec(base=self.base, axes=self.axes, T_max=self.T_max,
                         replicates=replicates or self.replicates)

    def panels(self) -> List[Tuple[Dict[str, Any], ScenarioConfig]]:
        """(parámetros, escenario) por panel, en orden de ejes"""
        if self.kind != KIND_PANELS:
            raise ConfigurationError("figure", f"{self.figure_id} is not a panel preset")
        spec = SweepSpec(base=self.base, axes=self.axes)
        out = []
        for params in spec.cells():
            config = self.base
            for name, value in params.items():
                config = config.with_parameter(name, value)
            out.append((params, config))
        return out


def panel_name(params: Dict[str, Any]) -> str:
    return "_".join(f"{name}={value:g}" if isinstance(value, float) else f"{name}={value}"
                    for name, value in params.items())


# Población sin coarticulación al inicio: c ~ N(720, 10^2)
_LIMITED = InitialDistribution(720.0, 10.0)
_STRONG_CATEGORICITY = PriorSpec(family="endpoint", a=0.01)


PRESETS: Dict[str, FigurePreset] = {
    "fig4": FigurePreset(
        figure_id="fig4",
        description="Single population under production bias (a=0.02, lambda=2, T=100)",
        kind=KIND_RUN,
        base=ScenarioConfig(model=ModelKind.M0_BIAS, prior=PriorSpec(a=0.02), lam=2.0, T=100, init_a=_LIMITED),
        sample_every=5,
        sources=("all values from the figure caption; the captioned run ends in full coarticulation, "
                 "here the endpoint prior absorbs lambda=2 and the mean stays near 729 Hz"),
    ),
    "fig5": FigurePreset(
        figure_id="fig5",
        description="Adaptive landscape: stable mean c over lambda x a",
        kind=KIND_SWEEP,
        base=ScenarioConfig(model=ModelKind.M0_BIAS, init_a=_LIMITED),
        axes=(("lambda", LAMBDA_GRID), ("a", A_GRID)),
        T_max=2500,
        sources="start state and T_max=2500 from the text; grid resolution chosen to bracket every quoted value",
    ),
    "fig6": FigurePreset(
        figure_id="fig6",
        description="Model 2 (variant weight) for w in {1.0, 1.05, 1.1, 1.5}, T=250",
        kind=KIND_PANELS,
        base=ScenarioConfig(model=ModelKind.M2_VARIANT_WEIGHT, prior=_STRONG_CATEGORICITY, T=250, init_a=_LIMITED),
        axes=(("w", (1.0, 1.05, 1.1, 1.5)),),
        sources="T=250, w=1.0 and w=1.1 from the text; w=1.05 and w=1.5 interpolated",
    ),
    "fig8": FigurePreset(
        figure_id="fig8",
        description="Model 1 (contact) between a non-coarticulating and a coarticulating group",
        kind=KIND_PANELS,
        base=ScenarioConfig(model=ModelKind.M1_CONTACT, prior=_STRONG_CATEGORICITY, T=50,
                            init_a=_LIMITED, init_b=InitialDistribution(540.0, 10.0)),
        axes=(("aProb", (0.005, 0.01, 0.05, 0.06, 0.1)), ("bProb", (0.005, 0.01, 0.05, 0.06, 0.1))),
        sources="lambda=0, a=0.01, 0.05/0.06/0.1 contact rates from the text; the rest of the grid and T=50 interpolated",
    ),
    "fig9": FigurePreset(
        figure_id="fig9",
        description="Model 3 (group weight), aProb=bProb=0.03, aWeight x bWeight",
        kind=KIND_PANELS,
        base=ScenarioConfig(model=ModelKind.M3_GROUP_WEIGHT, prior=_STRONG_CATEGORICITY, T=250, a_prob=0.03,
                            b_prob=0.03, init_a=_LIMITED, init_b=InitialDistribution(540.0, 10.0)),
        axes=(("aWeight", (0.2, 0.5, 1.0)), ("bWeight", (0.2, 0.5, 1.0))),
        sources="aProb=bProb=0.03 and bWeight=0.2-0.5 from the text; weight grid and T=250 interpolated",
    ),
    "fig9-caption": FigurePreset(
        figure_id="fig9-caption",
        description="Model 3 (group weight) with the caption value aProb=bProb=0.3",
        kind=KIND_PANELS,
        base=ScenarioConfig(model=ModelKind.M3_GROUP_WEIGHT, prior=_STRONG_CATEGORICITY, T=250, a_prob=0.3,
                            b_prob=0.3, init_a=_LIMITED, init_b=InitialDistribution(540.0, 10.0)),
        axes=(("aWeight", (0.2, 0.5, 1.0)), ("bWeight", (0.2, 0.5, 1.0))),
        sources="aProb=bProb=0.3 from the figure caption (the body text says 0.03)",
    ),
    "fig10": FigurePreset(
        figure_id="fig10",
        description="Model 4 (individual weight) over rho x w_max, T=500",
        kind=KIND_PANELS,
        base=ScenarioConfig(model=ModelKind.M4_INDIVIDUAL_WEIGHT, prior=_STRONG_CATEGORICITY, T=500, init_a=_LIMITED),
        axes=(("rho", (0.0, 0.5, 0.9, 1.0)), ("w_max", (10.0, 100.0, 1000.0))),
        sources="T=500 and rho in [0, 1] from the text; rho and w_max grid interpolated",
    ),
}


def get_preset(figure_id: str) -> FigurePreset:
    preset = PRESETS.get(figure_id)
    if preset is None:
        raise ConfigurationError("figure", f"unknown figure id {figure_id!r}; expected one of {sorted(PRESETS)}")
    return preset
