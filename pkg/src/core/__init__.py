"""
Tipos de dominio compartidos: lexicon, prior de categoricidad y agentes
"""
from src.core.agent import Agent, GROUP_A, GROUP_B
from src.core.errors import ActuationError, ConfigurationError, DomainError
from src.core.lexicon import EPSILON_DOMAIN, LexiconParams
from src.core.prior import PriorSpec, prior_log_density, prior_log_density_array

__all__ = [
    "Agent", "GROUP_A", "GROUP_B",
    "ActuationError", "ConfigurationError", "DomainError",
    "EPSILON_DOMAIN", "LexiconParams",
    "PriorSpec", "prior_log_density", "prior_log_density_array",
]
