"""
Motor de evolución: producción de tokens, elección de maestros y paso de
generación en generación de la distribución de c
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed, effective_n_jobs
from loguru import logger
from scipy.special import ndtri

from src.core.agent import Agent, GROUP_CODES, GROUP_NAMES
from src.core.errors import ConfigurationError
from src.learning.learner import TokenBatch, map_estimate, map_estimate_many
from src.simulation.population import GenerationSummary, PopulationState, summarize
from src.simulation.random_streams import (
    DRAWS_PER_TOKEN, STREAM_WEIGHTS, open_uniform, substream, token_draws,
)
from src.simulation.scenarios import (
    ModelKind, ScenarioConfig, TokenWeightRule, assign_individual_weights,
    build_token_weight_rule, check_stream_group, init_population,
)
from src.sweep.stability import stable_at

# Por debajo de este número de learners no compensa repartir entre hilos
_MIN_ROWS_PER_WORKER = 64


def produce_token(teacher: Agent, lam: float, sigma_a: float, rng: np.random.Generator) -> float:
    """
    Un token de F1 ~ N(teacher.c - lambda, sigma_a^2)

    Consume un único uniforme del generador (transformado con la inversa de
    la normal), igual que el camino vectorizado del motor.
    """
    if not sigma_a > 0:
        raise ValueError(f"sigma_a must be > 0, got {sigma_a}")
    z = float(ndtri(open_uniform(rng.random())))
    return (teacher.c - lam) + sigma_a * z


def _teacher_indices(pop: PopulationState, learner_code: int, cross_prob: float,
                     u_cross, u_teacher) -> np.ndarray:
    if not 0.0 <= cross_prob <= 1.0:
        raise ValueError(f"cross_prob must be in [0, 1], got {cross_prob}")

    u_cross = np.asarray(u_cross)
    u_teacher = np.asarray(u_teacher)

    if pop.is_single_group:
        if cross_prob > 0:
            raise ConfigurationError("aProb" if learner_code == GROUP_CODES["B"] else "bProb",
                                     "cross-group probability > 0 but the other group is empty")
        return (u_teacher * pop.M).astype(np.int64)

    own = pop.group_slice(learner_code)
    other = pop.group_slice(1 - learner_code)
    own_idx = own.start + (u_teacher * (own.stop - own.start)).astype(np.int64)
    other_idx = other.start + (u_teacher * (other.stop - other.start)).astype(np.int64)
    return np.where(u_cross < cross_prob, other_idx, own_idx)


def sample_teacher(pop: PopulationState, learner_group: str, cross_prob: float,
                   rng: np.random.Generator) -> Agent:
    """
    Elige un maestro de la generación anterior

    Con probabilidad cross_prob lo toma (uniforme, con reemplazo) del otro
    grupo; si no, del grupo propio. Con un solo grupo, uniforme sobre todos.
    """
    u_cross = rng.random()
    u_teacher = rng.random()
    index = _teacher_indices(pop, GROUP_CODES[learner_group], cross_prob, u_cross, u_teacher)
    return pop.agent(int(index))


def learn_one(pop: PopulationState, learner_group: str, scenario: ScenarioConfig,
              rng: np.random.Generator) -> float:
    """
    Un learner: n tokens (maestro por token + producción), pesos según el
    modelo y estimación MAP recortada al dominio
    """
    rule = build_token_weight_rule(scenario)
    cross_prob = scenario.cross_prob(learner_group)
    ys, ws = [], []
    for _ in range(scenario.n):
        teacher = sample_teacher(pop, learner_group, cross_prob, rng)
        y = produce_token(teacher, scenario.lam, scenario.production_sd, rng)
        ys.append(y)
        ws.append(rule(y, teacher, learner_group))

    batch = TokenBatch(np.array(ys), np.array(ws), sigma=scenario.lex.sigma_a)
    return float(scenario.lex.clamp(map_estimate(batch, scenario.prior, scenario.lex)))


def learn_many(pop: PopulationState, learner_code: int, scenario: ScenarioConfig,
               draws: np.ndarray, rule: Optional[TokenWeightRule] = None) -> np.ndarray:
    """
    Camino vectorizado de learn_one para un bloque de learners

    Args:
        pop: Generación de maestros
        learner_code: Código del grupo de los learners
        scenario: Configuración
        draws: Uniformes (learners, n, 3): cruce, maestro, ruido
        rule: Regla de peso (se construye si no se pasa)

    Returns:
        Array (learners,) con c_hat recortada al dominio
    """
    rule = rule or build_token_weight_rule(scenario)
    cross_prob = scenario.cross_prob(GROUP_NAMES[learner_code])

    idx = _teacher_indices(pop, learner_code, cross_prob, draws[..., 0], draws[..., 1])
    y = (pop.c[idx] - scenario.lam) + scenario.production_sd * ndtri(open_uniform(draws[..., 2]))
    w = rule.for_tokens(y, pop.groups[idx], pop.w_m[idx], learner_code)

    c_hat = map_estimate_many(y, w, scenario.lex.sigma_a, scenario.prior, scenario.lex)
    return scenario.lex.clamp(c_hat)


def _learn_group(pop: PopulationState, code: int, scenario: ScenarioConfig, draws: np.ndarray,
                 rule: TokenWeightRule, n_jobs: int) -> np.ndarray:
    rows = draws.shape[0]
    workers = min(effective_n_jobs(n_jobs), max(1, rows // _MIN_ROWS_PER_WORKER))
    if workers <= 1:
        return learn_many(pop, code, scenario, draws, rule)

    chunks = np.array_split(np.arange(rows), workers)
    parts = Parallel(n_jobs=workers, prefer="threads")(
        delayed(learn_many)(pop, code, scenario, draws[chunk], rule) for chunk in chunks
    )
    return np.concatenate(parts)


def step_generation(pop: PopulationState, scenario: ScenarioConfig,
                    rng: Optional[np.random.Generator] = None, n_jobs: int = 1,
                    stream_group: int = 0) -> PopulationState:
    """
    Genera la generación t+1 a partir de la generación t (congelada)

    Sin rng explícito, los tokens de cada grupo y los pesos del Modelo 4 salen
    de flujos Philox indexados por (semilla, generación, grupo), así que el
    resultado no depende de n_jobs. Una población de un solo grupo lee el
    flujo de stream_group.
    """
    check_stream_group(scenario, stream_group)
    t_next = pop.generation + 1
    rule = build_token_weight_rule(scenario)
    new_c = np.empty(pop.M)

    for code in pop.group_codes:
        sl = pop.group_slice(code)
        rows = sl.stop - sl.start
        if rng is None:
            stream_code = stream_group if pop.is_single_group else code
            draws = token_draws(scenario.seed, t_next, stream_code, rows, scenario.n)
        else:
            draws = rng.random((rows, scenario.n, DRAWS_PER_TOKEN))
        new_c[sl] = _learn_group(pop, code, scenario, draws, rule, n_jobs)

    if scenario.model == ModelKind.M4_INDIVIDUAL_WEIGHT:
        weight_rng = rng if rng is not None else substream(scenario.seed, STREAM_WEIGHTS, t_next)
        w_m = assign_individual_weights(new_c, scenario.rho, scenario.w_max, t_next, scenario.lex, weight_rng)
    else:
        w_m = np.ones(pop.M)

    return PopulationState(generation=t_next, c=new_c, groups=pop.groups, w_m=w_m)


@dataclass
class Trajectory:
    """Resultado de run_trajectory"""
    scenario: ScenarioConfig
    summaries: List[GenerationSummary]
    final: PopulationState
    samples: Dict[int, PopulationState] = field(default_factory=dict)
    converged_at: Optional[int] = None

    @property
    def generations(self) -> int:
        return self.summaries[-1].generation

    def means(self, group: Optional[str] = None) -> np.ndarray:
        return np.array([s.mean_c(group) for s in self.summaries])


def run_trajectory(scenario: ScenarioConfig, sample_every: Optional[int] = None,
                   n_jobs: int = 1, stream_group: int = 0) -> Trajectory:
    """
    Ejecuta T generaciones (o hasta detectar estado estable si está activado)

    Args:
        scenario: Configuración validada
        sample_every: Si se indica, guarda la población completa cada k generaciones
        n_jobs: Hilos para repartir learners dentro de una generación
        stream_group: Flujo de una población de un solo grupo (1 reproduce el grupo B)

    Returns:
        Trajectory con un resumen por generación
    """
    if sample_every is not None and sample_every < 1:
        raise ValueError(f"sample_every must be >= 1, got {sample_every}")

    logger.info(f"Running {scenario.model.value}: T={scenario.T} M={scenario.M} n={scenario.n} "
                f"lambda={scenario.lam} prior={scenario.prior.family}(a={scenario.prior.a}) seed={scenario.seed}")

    pop = init_population(scenario, stream_group=stream_group)
    summaries = [summarize(pop)]
    samples = {0: pop} if sample_every else {}
    converged_at = None

    for _ in range(scenario.T):
        pop = step_generation(pop, scenario, n_jobs=n_jobs, stream_group=stream_group)
        summary = summarize(pop)
        summaries.append(summary)
        if sample_every and pop.generation % sample_every == 0:
            samples[pop.generation] = pop
        logger.debug(f"t={pop.generation} mean_c={summary.overall.mean_c:.2f} sd_c={summary.overall.sd_c:.2f}")

        if scenario.stop_on_stable and stable_at([s.overall.mean_c for s in summaries],
                                                 pop.generation, scenario.stable_window,
                                                 scenario.stable_delta):
            converged_at = pop.generation
            logger.info(f"Stable state detected at t={converged_at}")
            break

    if sample_every:
        samples[pop.generation] = pop

    logger.info(f"Finished at t={pop.generation}: mean_c={summaries[-1].overall.mean_c:.2f}")
    return Trajectory(scenario=scenario, summaries=summaries, final=pop, samples=samples,
                      converged_at=converged_at)
