"""
Escenarios de simulación (Modelos 0-4): configuración, reglas de peso y
población inicial
"""

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.special import ndtr, ndtri
from scipy.stats import rankdata

from src.core.agent import Agent, GROUP_A, GROUP_B, GROUP_CODES
from src.core.errors import ConfigurationError
from src.core.lexicon import LexiconParams
from src.core.prior import PriorSpec
from src.simulation.population import PopulationState
from src.simulation.random_streams import STREAM_INIT, STREAM_WEIGHTS, substream

# Generaciones iniciales del Modelo 4 con pesos mezclados (coarticulación + azar)
BLEND_GENERATIONS = 25
BLEND_COARTICULATION_SHARE = 0.5


class ModelKind(str, Enum):
    M0_BIAS = "M0_bias"
    M1_CONTACT = "M1_contact"
    M2_VARIANT_WEIGHT = "M2_variant_weight"
    M3_GROUP_WEIGHT = "M3_group_weight"
    M4_INDIVIDUAL_WEIGHT = "M4_individual_weight"

    @property
    def two_groups(self) -> bool:
        return self in (ModelKind.M1_CONTACT, ModelKind.M3_GROUP_WEIGHT)


@dataclass(frozen=True)
class InitialDistribution:
    """Normal inicial de c para un grupo: (media Hz, SD Hz)"""
    mean: float
    sd: float


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Parametrización completa de una corrida

    Los campos que el modelo no usa se ignoran, pero se validan igual.
    init_a / init_b por defecto: N(mu_a - 10, 10^2) y N(mu_i + 10, 10^2).
    """
    model: ModelKind = ModelKind.M0_BIAS
    lex: LexiconParams = field(default_factory=LexiconParams)
    prior: PriorSpec = field(default_factory=PriorSpec)
    lam: float = 0.0
    lambda_sd: float = 0.0
    n: int = 100
    M: int = 500
    T: int = 100
    seed: int = 0
    init_a: Optional[InitialDistribution] = None
    init_b: Optional[InitialDistribution] = None
    a_prob: float = 0.0
    b_prob: float = 0.0
    w: float = 1.0
    a_weight: float = 1.0
    b_weight: float = 1.0
    rho: float = 0.0
    w_max: float = 1.0
    stop_on_stable: bool = False
    stable_window: int = 50
    stable_delta: float = 0.5

    def __post_init__(self):
        if not isinstance(self.model, ModelKind):
            try:
                object.__setattr__(self, "model", ModelKind(self.model))
            except ValueError:
                raise ConfigurationError("model", f"unknown model kind {self.model!r}; expected one of {[m.value for m in ModelKind]}")
        if self.init_a is None:
            object.__setattr__(self, "init_a", InitialDistribution(self.lex.mu_a - 10.0, 10.0))
        if self.init_b is None:
            object.__setattr__(self, "init_b", InitialDistribution(self.lex.mu_i + 10.0, 10.0))
        self._validate()

    def _validate(self):
        _check_int("n", self.n, minimum=1)
        _check_int("M", self.M, minimum=2 if self.model.two_groups else 1)
        _check_int("T", self.T, minimum=0)
        _check_int("seed", self.seed, minimum=0)
        _check_int("stable_window", self.stable_window, minimum=1)
        _check_range("lambda", self.lam, low=0.0)
        _check_range("lambda_sd", self.lambda_sd, low=0.0)
        _check_range("aProb", self.a_prob, low=0.0, high=1.0)
        _check_range("bProb", self.b_prob, low=0.0, high=1.0)
        _check_range("w", self.w, low=1.0)
        _check_range("aWeight", self.a_weight, low=0.0, high=1.0)
        _check_range("bWeight", self.b_weight, low=0.0, high=1.0)
        _check_range("rho", self.rho, low=0.0, high=1.0)
        _check_range("w_max", self.w_max, low=1.0)
        _check_range("stable_delta", self.stable_delta, low=0.0, strict_low=True)
        if not isinstance(self.stop_on_stable, bool):
            raise ConfigurationError("stop_on_stable", f"must be true or false, got {self.stop_on_stable!r}")
        for key, dist in (("init_a", self.init_a), ("init_b", self.init_b)):
            _check_range(f"{key}.mean", dist.mean)
            _check_range(f"{key}.sd", dist.sd, low=0.0, strict_low=True)

    @property
    def two_groups(self) -> bool:
        return self.model.two_groups

    @property
    def group_sizes(self) -> Tuple[int, int]:
        """(tamaño A, tamaño B); B = 0 en escenarios de un solo grupo"""
        if not self.two_groups:
            return self.M, 0
        half = self.M // 2
        return half, self.M - half

    @property
    def production_sd(self) -> float:
        """SD efectiva de producción: sigma_a combinada con la variabilidad del sesgo"""
        return math.hypot(self.lex.sigma_a, self.lambda_sd)

    def cross_prob(self, learner_group: str) -> float:
        """Probabilidad de que un token venga del otro grupo"""
        if not self.two_groups:
            return 0.0
        return self.a_prob if learner_group == GROUP_B else self.b_prob

    def replace(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def with_parameter(self, name: str, value: Any) -> "ScenarioConfig":
        """
        Devuelve una copia con un parámetro cambiado, usando los nombres de la
        configuración ('lambda', 'a', 'aProb', 'w_max', ...)
        """
        if name in PRIOR_PARAMETERS:
            return self.replace(prior=replace(self.prior, **{name: value}))
        if name in LEXICON_PARAMETERS:
            return self.replace(lex=replace(self.lex, **{name: value}))
        attr = PARAMETER_ATTRIBUTES.get(name)
        if attr is None:
            raise ConfigurationError(name, "not a scenario parameter")
        return self.replace(**{attr: value})


# Nombre en configuración -> atributo de ScenarioConfig
PARAMETER_ATTRIBUTES: Dict[str, str] = {
    "model": "model",
    "lambda": "lam",
    "lambda_sd": "lambda_sd",
    "n": "n",
    "M": "M",
    "T": "T",
    "seed": "seed",
    "aProb": "a_prob",
    "bProb": "b_prob",
    "w": "w",
    "aWeight": "a_weight",
    "bWeight": "b_weight",
    "rho": "rho",
    "w_max": "w_max",
    "stop_on_stable": "stop_on_stable",
    "stable_window": "stable_window",
    "stable_delta": "stable_delta",
}
PRIOR_PARAMETERS = tuple(f.name for f in fields(PriorSpec))
LEXICON_PARAMETERS = tuple(f.name for f in fields(LexiconParams))


def _check_int(key: str, value: Any, minimum: int):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigurationError(key, f"must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigurationError(key, f"must be >= {minimum}, got {value}")


def _check_range(key: str, value: Any, low: Optional[float] = None, high: Optional[float] = None,
                 strict_low: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise ConfigurationError(key, f"must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigurationError(key, f"must be finite, got {value}")
    if low is not None and (value < low or (strict_low and value == low)):
        bound = ">" if strict_low else ">="
        raise ConfigurationError(key, f"must be {bound} {low}, got {value}")
    if high is not None and value > high:
        raise ConfigurationError(key, f"must be <= {high}, got {value}")


# ---------------------------------------------------------------------------
# Reglas de peso por token
# ---------------------------------------------------------------------------

def variant_weight(y, w: float, lex: LexiconParams):
    """
    Peso por variante (Modelo 2): 1 en mu_a, w en mu_i, lineal entre ambos
    """
    if w < 1:
        raise ValueError(f"reference weight w must be >= 1, got {w}")
    weight = 1.0 + (w - 1.0) * lex.coarticulation(y)
    return float(weight) if np.ndim(weight) == 0 else weight


def group_weight(teacher_group: str, learner_group: str, a_weight: float, b_weight: float) -> float:
    """
    Peso por grupo (Modelo 3): 1 dentro del grupo; aWeight para tokens de A
    oídos por un learner de B; bWeight para tokens de B oídos por uno de A
    """
    for key, value in (("aWeight", a_weight), ("bWeight", b_weight)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{key} must be in [0, 1], got {value}")
    if teacher_group == learner_group:
        return 1.0
    return a_weight if teacher_group == GROUP_A else b_weight


class TokenWeightRule:
    """Regla base: todos los tokens pesan 1 (Modelos 0 y 1)"""

    def __call__(self, y: float, teacher: Agent, learner_group: str) -> float:
        return 1.0

    def for_tokens(self, y: np.ndarray, teacher_groups: np.ndarray, teacher_w: np.ndarray,
                   learner_code: int) -> np.ndarray:
        return np.ones_like(y)


class VariantWeightRule(TokenWeightRule):
    def __init__(self, w: float, lex: LexiconParams):
        self.w = w
        self.lex = lex

    def __call__(self, y, teacher, learner_group):
        return variant_weight(y, self.w, self.lex)

    def for_tokens(self, y, teacher_groups, teacher_w, learner_code):
        return variant_weight(y, self.w, self.lex)


class GroupWeightRule(TokenWeightRule):
    def __init__(self, a_weight: float, b_weight: float):
        self.a_weight = a_weight
        self.b_weight = b_weight

    def __call__(self, y, teacher, learner_group):
        return group_weight(teacher.group, learner_group, self.a_weight, self.b_weight)

    def for_tokens(self, y, teacher_groups, teacher_w, learner_code):
        # learner de B oye tokens de A con aWeight; learner de A oye tokens de B con bWeight
        cross_weight = self.a_weight if learner_code == GROUP_CODES[GROUP_B] else self.b_weight
        return np.where(teacher_groups == learner_code, 1.0, cross_weight)


class IndividualWeightRule(TokenWeightRule):
    def __call__(self, y, teacher, learner_group):
        return teacher.w_m

    def for_tokens(self, y, teacher_groups, teacher_w, learner_code):
        return np.array(teacher_w, dtype=float)


def build_token_weight_rule(config: ScenarioConfig) -> TokenWeightRule:
    """Despacha la regla de peso según el tipo de modelo"""
    model = config.model
    if model in (ModelKind.M0_BIAS, ModelKind.M1_CONTACT):
        return TokenWeightRule()
    if model == ModelKind.M2_VARIANT_WEIGHT:
        return VariantWeightRule(config.w, config.lex)
    if model == ModelKind.M3_GROUP_WEIGHT:
        return GroupWeightRule(config.a_weight, config.b_weight)
    if model == ModelKind.M4_INDIVIDUAL_WEIGHT:
        return IndividualWeightRule()
    raise ConfigurationError("model", f"no weight rule for model kind {model!r}")


# ---------------------------------------------------------------------------
# Pesos individuales (Modelo 4)
# ---------------------------------------------------------------------------

def assign_individual_weights(c_values, rho: float, w_max: float, generation: int,
                              lex: LexiconParams, rng: np.random.Generator) -> np.ndarray:
    """
    Asigna w_m en [1, w_max] a los maestros de una generación

    Para t > 25 se usa una cópula gaussiana sobre el rango de coarticulación
    (mu_a - c_m): z' = rho * z + sqrt(1 - rho^2) * eps. Para t <= 25 el peso es la
    media (0.5/0.5) entre el peso lineal por coarticulación y un uniforme en
    [1, w_max].

    Args:
        c_values: c de cada maestro
        rho: Correlación peso-coarticulación en [0, 1]
        w_max: Peso máximo (>= 1)
        generation: Índice de la generación que recibe los pesos
        lex: Parámetros del lexicon
        rng: Generador aleatorio

    Returns:
        Array con un peso por maestro
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    if w_max < 1.0:
        raise ValueError(f"w_max must be >= 1, got {w_max}")

    c = np.asarray(c_values, dtype=float)
    span = w_max - 1.0

    if generation <= BLEND_GENERATIONS:
        w_c = 1.0 + span * lex.coarticulation(c)
        u = 1.0 + span * rng.random(c.size)
        return BLEND_COARTICULATION_SHARE * w_c + (1.0 - BLEND_COARTICULATION_SHARE) * u

    v = rankdata(lex.mu_a - c) / (c.size + 1)
    z = ndtri(v)
    eps = rng.standard_normal(c.size)
    z_mixed = rho * z + math.sqrt(1.0 - rho ** 2) * eps
    return 1.0 + span * ndtr(z_mixed)


# ---------------------------------------------------------------------------
# Población inicial
# ---------------------------------------------------------------------------

def check_stream_group(config: ScenarioConfig, stream_group: int) -> int:
    """Valida el código de flujo de un escenario de un solo grupo (0 = A, 1 = B)"""
    if stream_group not in GROUP_CODES.values():
        raise ValueError(f"stream_group must be one of {sorted(GROUP_CODES.values())}, got {stream_group!r}")
    if stream_group != GROUP_CODES[GROUP_A] and config.two_groups:
        raise ValueError("stream_group only applies to single-group scenarios")
    return stream_group


def init_population(config: ScenarioConfig, rng: Optional[np.random.Generator] = None,
                    stream_group: int = 0) -> PopulationState:
    """
    Genera la generación 0

    Sin rng explícito cada grupo usa su propio flujo derivado de la semilla,
    de modo que cada grupo de un escenario de dos grupos coincide con una
    población de un solo grupo del mismo tamaño y semilla: el grupo A con
    stream_group=0 y el grupo B con stream_group=1.

    Args:
        config: Escenario validado
        rng: Generador explícito (ignora los flujos por grupo)
        stream_group: Flujo que usa una población de un solo grupo
    """
    check_stream_group(config, stream_group)
    sizes = config.group_sizes
    dists = (config.init_a, config.init_b)

    c_blocks, group_blocks = [], []
    for code, (size, dist) in enumerate(zip(sizes, dists)):
        if size == 0:
            continue
        if dist.sd <= 0:
            raise ConfigurationError("init_a.sd" if code == 0 else "init_b.sd", "must be > 0")
        stream_code = code if config.two_groups else stream_group
        group_rng = rng if rng is not None else substream(config.seed, STREAM_INIT, 0, stream_code)
        c_blocks.append(dist.mean + dist.sd * group_rng.standard_normal(size))
        group_blocks.append(np.full(size, code, dtype=np.int8))

    c = config.lex.clamp(np.concatenate(c_blocks))
    groups = np.concatenate(group_blocks)

    if config.model == ModelKind.M4_INDIVIDUAL_WEIGHT:
        weight_rng = rng if rng is not None else substream(config.seed, STREAM_WEIGHTS, 0)
        w_m = assign_individual_weights(c, config.rho, config.w_max, 0, config.lex, weight_rng)
    else:
        w_m = np.ones_like(c)

    logger.debug(f"Initial population: model={config.model.value} M={c.size} mean_c={c.mean():.2f}")
    return PopulationState(generation=0, c=c, groups=groups, w_m=w_m)
