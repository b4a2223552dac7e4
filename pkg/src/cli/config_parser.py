"""
Lectura y eco de archivos de configuración YAML

Un documento puede ser plano (claves del escenario en la raíz) o tener las
secciones `scenario:` y, opcionalmente, `sweep:`; con `sweep:` el resultado
es un SweepSpec.
"""

from typing import Any, Dict, Mapping, Union

import yaml
from loguru import logger

from src.core.errors import ConfigurationError
from src.core.lexicon import LexiconParams
from src.core.prior import PriorSpec
from src.simulation.scenarios import (
    LEXICON_PARAMETERS, PARAMETER_ATTRIBUTES, PRIOR_PARAMETERS,
    InitialDistribution, ModelKind, ScenarioConfig,
)
from src.sweep.sweep_engine import SweepSpec

NESTED_KEYS = ("lexicon", "prior", "init_a", "init_b")
INIT_KEYS = ("mean", "sd")
SWEEP_KEYS = ("axes", "T_max", "replicates", "window", "delta", "keep_trajectories")

# Parámetros reales: los enteros del YAML se convierten a float
FLOAT_KEYS = {
    "lambda", "lambda_sd", "aProb", "bProb", "w", "aWeight", "bWeight", "rho",
    "w_max", "stable_delta", "a", "tau", "mu_a", "mu_i", "sigma_a", "sigma_i",
    "mean", "sd", "delta",
}

ConfigDocument = Union[ScenarioConfig, SweepSpec]


def _number(key: str, value: Any) -> Any:
    if key in FLOAT_KEYS and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def _mapping(path: str, value: Any) -> Mapping:
    if value is None:
        return {}
    if not isinstance(value, Mapping):
        raise ConfigurationError(path, f"expected a mapping, got {type(value).__name__}")
    return value


def _reject_unknown(path: str, section: Mapping, allowed) -> None:
    for key in section:
        if key not in allowed:
            full = f"{path}.{key}" if path else str(key)
            raise ConfigurationError(full, "unknown key")


def _model_kind(value: Any) -> ModelKind:
    if isinstance(value, int) and not isinstance(value, bool):
        kinds = list(ModelKind)
        if not 0 <= value < len(kinds):
            raise ConfigurationError("model", f"model number must be in 0..{len(kinds) - 1}, got {value}")
        return kinds[value]
    try:
        return ModelKind(value)
    except ValueError:
        raise ConfigurationError("model", f"unknown model kind {value!r}; expected one of {[m.value for m in ModelKind]}")


def scenario_from_dict(section: Mapping, path: str = "") -> ScenarioConfig:
    """
    Construye un ScenarioConfig validado a partir de un mapping

    Args:
        section: Claves con los nombres de configuración ('lambda', 'aProb', ...)
        path: Prefijo para los mensajes de claves desconocidas

    Returns:
        ScenarioConfig con los valores por defecto rellenados
    """
    section = _mapping(path or "scenario", section)
    _reject_unknown(path, section, (*PARAMETER_ATTRIBUTES, *NESTED_KEYS))
    prefix = f"{path}." if path else ""

    kwargs: Dict[str, Any] = {}
    for key, value in section.items():
        if key in NESTED_KEYS:
            continue
        if key == "model":
            value = _model_kind(value)
        kwargs[PARAMETER_ATTRIBUTES[key]] = _number(key, value)

    lex_section = _mapping(f"{prefix}lexicon", section.get("lexicon"))
    _reject_unknown(f"{prefix}lexicon", lex_section, LEXICON_PARAMETERS)
    lex = LexiconParams(**{k: _number(k, v) for k, v in lex_section.items()})
    kwargs["lex"] = lex

    prior_section = _mapping(f"{prefix}prior", section.get("prior"))
    _reject_unknown(f"{prefix}prior", prior_section, PRIOR_PARAMETERS)
    kwargs["prior"] = PriorSpec(**{k: _number(k, v) for k, v in prior_section.items()})

    for key, default_mean in (("init_a", lex.mu_a - 10.0), ("init_b", lex.mu_i + 10.0)):
        if key not in section:
            continue
        init_section = _mapping(f"{prefix}{key}", section[key])
        _reject_unknown(f"{prefix}{key}", init_section, INIT_KEYS)
        kwargs[key] = InitialDistribution(
            mean=_number("mean", init_section.get("mean", default_mean)),
            sd=_number("sd", init_section.get("sd", 10.0)),
        )

    return ScenarioConfig(**kwargs)


def sweep_from_dict(base: ScenarioConfig, section: Mapping) -> SweepSpec:
    section = _mapping("sweep", section)
    _reject_unknown("sweep", section, SWEEP_KEYS)
    axes_section = section.get("axes")
    if not isinstance(axes_section, Mapping) or not axes_section:
        raise ConfigurationError("sweep.axes", "expected a non-empty mapping of parameter -> list of values")

    axes = []
    for name, values in axes_section.items():
        if not isinstance(values, (list, tuple)):
            raise ConfigurationError(f"sweep.axes.{name}", "expected a list of values")
        axes.append((name, tuple(_number(name, v) for v in values)))

    kwargs = {key: _number(key, section[key]) for key in SWEEP_KEYS if key != "axes" and key in section}
    return SweepSpec(base=base, axes=tuple(axes), **kwargs)


def parse_config_dict(document: Any) -> ConfigDocument:
    document = _mapping("config", document)
    if "scenario" in document or "sweep" in document:
        _reject_unknown("", document, ("scenario", "sweep"))
        base = scenario_from_dict(document.get("scenario") or {}, "scenario")
        if "sweep" in document:
            return sweep_from_dict(base, document["sweep"])
        return base
    return scenario_from_dict(document)


def parse_config(path: str) -> ConfigDocument:
    """
    Lee y valida un archivo de configuración

    Args:
        path: Ruta al YAML

    Returns:
        ScenarioConfig o SweepSpec (si el documento tiene sección `sweep:`)
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigurationError("config", f"file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigurationError("config", f"malformed YAML in {path}: {e}")

    config = parse_config_dict(document if document is not None else {})
    logger.debug(f"Loaded {type(config).__name__} from {path}")
    return config


def scenario_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, attr in PARAMETER_ATTRIBUTES.items():
        value = getattr(config, attr)
        out[key] = value.value if isinstance(value, ModelKind) else _plain(value)
    out["lexicon"] = {k: float(getattr(config.lex, k)) for k in LEXICON_PARAMETERS}
    out["prior"] = {k: _plain(getattr(config.prior, k)) for k in PRIOR_PARAMETERS}
    for key in ("init_a", "init_b"):
        dist = getattr(config, key)
        out[key] = {"mean": float(dist.mean), "sd": float(dist.sd)}
    return out


def config_to_dict(config: ConfigDocument) -> Dict[str, Any]:
    """Eco de la configuración validada; parse_config_dict lo reconstruye igual"""
    if isinstance(config, SweepSpec):
        return {
            "scenario": scenario_to_dict(config.base),
            "sweep": {
                "axes": {name: [_plain(v) for v in values] for name, values in config.axes},
                "T_max": config.T_max,
                "replicates": config.replicates,
                "window": config.window,
                "delta": float(config.delta),
                "keep_trajectories": config.keep_trajectories,
            },
        }
    return {"scenario": scenario_to_dict(config)}


def dump_config(config: ConfigDocument) -> str:
    return yaml.safe_dump(config_to_dict(config), sort_keys=False, allow_unicode=True)


def _plain(value: Any) -> Any:
    """Convierte escalares numpy / enums a tipos que yaml.safe_dump admite"""
    if isinstance(value, ModelKind):
        return value.value
    if hasattr(value, "item"):
        return value.item()
    return value
