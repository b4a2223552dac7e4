"""
Fixtures compartidas por los tests
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.core.lexicon import LexiconParams  # noqa: E402
from src.simulation.scenarios import ScenarioConfig  # noqa: E402


@pytest.fixture
def lex():
    return LexiconParams()


@pytest.fixture
def small_scenario():
    """Constructor de escenarios pequeños (rápidos) con overrides"""
    def build(**overrides):
        params = dict(M=40, n=20, T=3, seed=11)
        params.update(overrides)
        return ScenarioConfig(**params)
    return build
