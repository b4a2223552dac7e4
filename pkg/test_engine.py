"""
Tests del motor: producción, elección de maestros, aprendizaje y
propiedades de la dinámica entre generaciones
"""

import numpy as np
import pytest
from scipy import stats

from src.core.agent import Agent
from src.core.errors import ConfigurationError
from src.core.prior import PriorSpec
from src.simulation.engine import (
    learn_many, learn_one, produce_token, run_trajectory, sample_teacher, step_generation,
)
from src.simulation.population import PopulationState
from src.simulation.random_streams import DRAWS_PER_TOKEN
from src.simulation.scenarios import InitialDistribution, ModelKind, ScenarioConfig, init_population

FLAT = PriorSpec(family="flat")


def uniform_population(c, M, groups=None):
    groups = np.zeros(M, dtype=np.int8) if groups is None else groups
    return PopulationState(generation=0, c=np.full(M, c), groups=groups, w_m=np.ones(M))


def two_group_population(size_a=50, size_b=50):
    c = np.concatenate([np.full(size_a, 720.0), np.full(size_b, 540.0)])
    groups = np.concatenate([np.zeros(size_a, dtype=np.int8), np.ones(size_b, dtype=np.int8)])
    return PopulationState(generation=0, c=c, groups=groups, w_m=np.ones(c.size))


# ---------------------------------------------------------------------------
# produce_token / sample_teacher
# ---------------------------------------------------------------------------

def test_produce_token_moments():
    rng = np.random.default_rng(1)
    teacher = Agent(c=720.0)
    draws = np.array([produce_token(teacher, 2.0, 50.0, rng) for _ in range(20000)])
    assert draws.mean() == pytest.approx(718.0, abs=4 * 50.0 / np.sqrt(draws.size))
    assert draws.std() == pytest.approx(50.0, rel=0.03)


def test_produce_token_bias_is_a_location_shift():
    teacher = Agent(c=700.0)
    rng_0, rng_2 = np.random.default_rng(5), np.random.default_rng(5)
    for _ in range(100):
        y0 = produce_token(teacher, 0.0, 50.0, rng_0)
        y2 = produce_token(teacher, 2.0, 50.0, rng_2)
        assert y2 - y0 == pytest.approx(-2.0, abs=1e-9)


def test_produce_token_degenerate_sigma():
    rng = np.random.default_rng(0)
    assert produce_token(Agent(c=650.0), 0.0, 1e-9, rng) == pytest.approx(650.0, abs=1e-6)
    with pytest.raises(ValueError):
        produce_token(Agent(c=650.0), 0.0, 0.0, rng)


def test_sample_teacher_extremes():
    pop = two_group_population()
    rng = np.random.default_rng(2)
    assert all(sample_teacher(pop, "A", 0.0, rng).group == "A" for _ in range(500))
    assert all(sample_teacher(pop, "A", 1.0, rng).group == "B" for _ in range(500))
    assert all(sample_teacher(pop, "B", 1.0, rng).group == "A" for _ in range(500))


def test_sample_teacher_cross_fraction():
    pop = two_group_population()
    rng = np.random.default_rng(3)
    draws = 100_000
    other = sum(sample_teacher(pop, "B", 0.05, rng).group == "A" for _ in range(draws))
    assert other / draws == pytest.approx(0.05, abs=0.005)


def test_sample_teacher_single_group():
    pop = uniform_population(700.0, 10)
    rng = np.random.default_rng(4)
    assert sample_teacher(pop, "A", 0.0, rng).c == 700.0
    with pytest.raises(ConfigurationError):
        sample_teacher(pop, "A", 0.1, rng)


# ---------------------------------------------------------------------------
# learn_one / learn_many
# ---------------------------------------------------------------------------

def test_learn_one_sampling_distribution():
    pop = uniform_population(720.0, 50)
    scenario = ScenarioConfig(prior=FLAT, n=100, M=50)
    rng = np.random.default_rng(6)
    c_hat = np.array([learn_one(pop, "A", scenario, rng) for _ in range(400)])
    assert c_hat.mean() == pytest.approx(720.0, abs=4 * 5.0 / np.sqrt(400))
    assert c_hat.std(ddof=1) == pytest.approx(5.0, rel=0.15)


def test_learn_one_single_token():
    pop = uniform_population(630.0, 5)
    scenario = ScenarioConfig(prior=FLAT, n=1, M=5, lam=1.5)
    c_hat = learn_one(pop, "A", scenario, np.random.default_rng(12))

    rng = np.random.default_rng(12)
    teacher = sample_teacher(pop, "A", 0.0, rng)
    y = produce_token(teacher, 1.5, 50.0, rng)
    assert c_hat == pytest.approx(float(scenario.lex.clamp(y)))


def test_learn_one_matches_vectorized_path():
    pop = two_group_population(30, 30)
    scenario = ScenarioConfig(model=ModelKind.M3_GROUP_WEIGHT, prior=PriorSpec(a=0.05), n=25, M=60,
                              a_prob=0.3, b_prob=0.2, a_weight=0.4, b_weight=0.9, lam=1.0)
    for seed in range(5):
        single = learn_one(pop, "B", scenario, np.random.default_rng(seed))
        draws = np.random.default_rng(seed).random((1, scenario.n, DRAWS_PER_TOKEN))
        assert learn_many(pop, 1, scenario, draws)[0] == pytest.approx(single, rel=1e-12)


def test_variant_weight_one_reduces_to_unweighted():
    pop = uniform_population(700.0, 20)
    weighted = ScenarioConfig(model=ModelKind.M2_VARIANT_WEIGHT, w=1.0, n=30, M=20)
    plain = ScenarioConfig(model=ModelKind.M0_BIAS, n=30, M=20)
    draws = np.random.default_rng(7).random((20, 30, DRAWS_PER_TOKEN))
    assert np.array_equal(learn_many(pop, 0, weighted, draws), learn_many(pop, 0, plain, draws))


# ---------------------------------------------------------------------------
# step_generation
# ---------------------------------------------------------------------------

def test_step_generation_preserves_structure(small_scenario):
    scenario = small_scenario(model=ModelKind.M1_CONTACT, a_prob=0.1, b_prob=0.1)
    pop = init_population(scenario)
    nxt = step_generation(pop, scenario)
    assert nxt.generation == 1
    assert nxt.M == pop.M
    assert np.array_equal(nxt.groups, pop.groups)


def test_step_generation_keeps_c_in_domain(lex):
    scenario = ScenarioConfig(lam=40.0, n=10, M=100, init_a=InitialDistribution(560.0, 10.0))
    pop = init_population(scenario)
    for _ in range(3):
        pop = step_generation(pop, scenario)
        assert np.all(pop.c >= 530.5) and np.all(pop.c <= 729.5)


def test_step_generation_without_bias_keeps_mean():
    M, n = 200, 100
    scenario = ScenarioConfig(prior=FLAT, M=M, n=n, seed=21)
    pop = uniform_population(650.0, M)
    nxt = step_generation(pop, scenario)
    assert abs(nxt.c.mean() - 650.0) <= 4 * 50.0 / np.sqrt(n * M)


def test_flat_prior_drift_law():
    drifts = []
    T = 50
    for seed in range(5):
        scenario = ScenarioConfig(prior=FLAT, lam=2.0, M=200, n=100, T=T, seed=seed,
                                  init_a=InitialDistribution(680.0, 10.0))
        means = run_trajectory(scenario).means()
        drifts.append((means[-1] - means[0]) / T)
    assert np.mean(drifts) == pytest.approx(-2.0, abs=0.2)


def test_flat_prior_learner_variance_and_normality():
    M = 10_000
    scenario = ScenarioConfig(prior=FLAT, lam=2.0, M=M, n=100, seed=5,
                              init_a=InitialDistribution(630.0, 10.0))
    pop = init_population(scenario)
    nxt = step_generation(pop, scenario)

    expected_mean = pop.c.mean() - 2.0
    expected_var = (pop.c.var() + 50.0 ** 2) / scenario.n
    assert nxt.c.var(ddof=1) == pytest.approx(expected_var, rel=0.10)
    assert nxt.c.mean() == pytest.approx(expected_mean, abs=4 * np.sqrt(expected_var / M))

    result = stats.kstest(nxt.c, "norm", args=(expected_mean, np.sqrt(expected_var)))
    assert result.pvalue > 1e-3


def test_explicit_rng_is_reproducible(small_scenario):
    scenario = small_scenario()
    pop = init_population(scenario)
    a = step_generation(pop, scenario, rng=np.random.default_rng(99))
    b = step_generation(pop, scenario, rng=np.random.default_rng(99))
    assert np.array_equal(a.c, b.c)


# ---------------------------------------------------------------------------
# run_trajectory
# ---------------------------------------------------------------------------

def test_zero_generations_returns_initial_summary(small_scenario):
    trajectory = run_trajectory(small_scenario(T=0))
    assert len(trajectory.summaries) == 1
    assert trajectory.summaries[0].generation == 0


def test_trajectory_is_deterministic_across_worker_counts():
    scenario = ScenarioConfig(model=ModelKind.M4_INDIVIDUAL_WEIGHT, rho=0.7, w_max=20.0,
                              M=300, n=30, T=4, seed=17)
    serial = run_trajectory(scenario, n_jobs=1)
    threaded = run_trajectory(scenario, n_jobs=3)
    assert np.array_equal(serial.final.c, threaded.final.c)
    assert np.array_equal(serial.final.w_m, threaded.final.w_m)
    assert np.array_equal(serial.means(), threaded.means())


def test_trajectory_samples(small_scenario):
    trajectory = run_trajectory(small_scenario(T=5), sample_every=2)
    assert sorted(trajectory.samples) == [0, 2, 4, 5]
    with pytest.raises(ValueError):
        run_trajectory(small_scenario(), sample_every=0)


def test_stop_on_stable(small_scenario):
    scenario = small_scenario(T=200, prior=PriorSpec(a=0.01), stop_on_stable=True,
                              stable_window=5, stable_delta=5.0)
    trajectory = run_trajectory(scenario)
    assert trajectory.converged_at is not None
    assert trajectory.generations == trajectory.converged_at
    assert trajectory.generations < 200


def test_group_label_mirror_symmetry():
    # A<->B con probabilidades intercambiadas e inicio reflejado sobre el punto medio;
    # el prior de extremos es simétrico respecto de 630
    # B reflejado ocupa el lugar de A: 1260 - 560 = 700 y viceversa
    base = dict(model=ModelKind.M1_CONTACT, prior=PriorSpec(family="endpoint", a=0.3), lam=0.0,
                M=2000, n=100, T=15,
                init_a=InitialDistribution(700.0, 10.0), init_b=InitialDistribution(560.0, 10.0))
    forward = ScenarioConfig(a_prob=0.2, b_prob=0.1, seed=1, **base)
    mirrored = ScenarioConfig(a_prob=0.1, b_prob=0.2, seed=2, **base)
    f = run_trajectory(forward)
    m = run_trajectory(mirrored)
    midpoint = 630.0
    for group, other in (("A", "B"), ("B", "A")):
        reflected = 2 * midpoint - m.means(other)
        assert np.max(np.abs(f.means(group) - reflected)) < 6.0
