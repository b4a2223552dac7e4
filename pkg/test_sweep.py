"""
Tests del barrido: especificación, ejecución, estado estable y bifurcaciones
"""

import math

import numpy as np
import pytest

from src.core.errors import ConfigurationError
from src.core.lexicon import LexiconParams
from src.core.prior import PriorSpec
from src.simulation.engine import run_trajectory
from src.simulation.population import GenerationSummary, GroupStats
from src.simulation.scenarios import InitialDistribution, ScenarioConfig
from src.sweep.stability import detect_stable, stable_at
from src.sweep.sweep_engine import (
    SweepCell, SweepSpec, classify_regime, find_bifurcation, run_sweep,
)

BASE = ScenarioConfig(M=30, n=10, seed=5)


def fake_summaries(means):
    return [
        GenerationSummary(generation=t, overall=GroupStats(m, 1.0, m - 1, m + 1, 10),
                          groups={"A": GroupStats(m, 1.0, m - 1, m + 1, 10)})
        for t, m in enumerate(means)
    ]


def fake_cell(params, mean):
    return SweepCell(params=params, runs=[], final_mean_c=mean, final_mean_by_group={"A": mean},
                     dispersion=0.0, converged_at=(None,), regime=classify_regime(mean, LexiconParams()))


# ---------------------------------------------------------------------------
# Estado estable
# ---------------------------------------------------------------------------

def test_stable_at():
    means = [700.0, 690.0, 689.8, 689.7]
    assert not stable_at(means, 1, 2, 0.5)
    assert not stable_at(means, 2, 2, 0.5)
    assert stable_at(means, 3, 2, 0.5)


def test_detect_stable_earliest_generation():
    means = [720.0 - 10 * t for t in range(10)] + [620.0] * 10
    assert detect_stable(fake_summaries(means), window=3, delta=0.5) == 13


def test_detect_stable_not_converged():
    assert detect_stable(fake_summaries([700.0 - t for t in range(30)]), window=5, delta=0.5) is None
    assert detect_stable(fake_summaries([700.0] * 3), window=5) is None


def test_detect_stable_constant_trajectory_at_window():
    assert detect_stable(fake_summaries([650.0] * 20), window=5, delta=0.5) == 5
    assert detect_stable(fake_summaries([650.0] * 20), window=1, delta=0.5) == 1


def test_detect_stable_monotone_in_delta():
    trajectory = run_trajectory(BASE.replace(T=120, lam=1.0, prior=PriorSpec(a=0.01)))
    found = [detect_stable(trajectory.summaries, window=10, delta=delta) for delta in (0.25, 0.5, 1.0, 2.0, 5.0, 20.0)]
    as_generation = [math.inf if t is None else t for t in found]
    assert as_generation == sorted(as_generation, reverse=True)
    assert found[-1] is not None


def test_detect_stable_rejects_bad_window():
    with pytest.raises(ValueError):
        detect_stable(fake_summaries([700.0] * 5), window=0)


def test_detect_stable_matches_incremental_stop():
    scenario = BASE.replace(T=300, prior=PriorSpec(a=0.01), stop_on_stable=True, stable_window=10, stable_delta=1.0)
    trajectory = run_trajectory(scenario)
    assert detect_stable(trajectory.summaries, window=10, delta=1.0) == trajectory.converged_at


# ---------------------------------------------------------------------------
# SweepSpec
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("axes, key", [
    ((), "sweep.axes"),
    ((("lambda", (0.0,)), ("a", (0.1,)), ("n", (10,))), "sweep.axes"),
    ((("lamda", (0.0, 1.0)),), "sweep.axes.lamda"),
    ((("lambda", ()),), "sweep.axes.lambda"),
    ((("seed", (1, 2)),), "sweep.axes.seed"),
    ((("lambda", (0.0,)), ("lambda", (1.0,))), "sweep.axes"),
])
def test_sweep_spec_validation(axes, key):
    with pytest.raises(ConfigurationError) as exc:
        SweepSpec(base=BASE, axes=axes)
    assert exc.value.key == key


@pytest.mark.parametrize("kwargs, key", [
    ({"T_max": 0}, "sweep.T_max"),
    ({"replicates": 0}, "sweep.replicates"),
    ({"window": 0}, "sweep.window"),
    ({"delta": 0.0}, "sweep.delta"),
])
def test_sweep_spec_settings_validation(kwargs, key):
    with pytest.raises(ConfigurationError) as exc:
        SweepSpec(base=BASE, axes=(("lambda", (0.0,)),), **kwargs)
    assert exc.value.key == key


def test_cells_follow_axis_order():
    spec = SweepSpec(base=BASE, axes=(("lambda", (0.0, 1.0)), ("a", (0.01, 0.02, 0.03))))
    cells = spec.cells()
    assert len(cells) == 6
    assert cells[0] == {"lambda": 0.0, "a": 0.01}
    assert cells[1] == {"lambda": 0.0, "a": 0.02}
    assert cells[3] == {"lambda": 1.0, "a": 0.01}


def test_config_for_sets_stop_rule_and_seeds():
    spec = SweepSpec(base=BASE, axes=(("lambda", (2.0,)),), T_max=77, window=9, delta=0.25)
    config = spec.config_for({"lambda": 2.0}, 0)
    assert (config.lam, config.T, config.stop_on_stable) == (2.0, 77, True)
    assert (config.stable_window, config.stable_delta) == (9, 0.25)
    assert config.seed == BASE.seed
    assert spec.config_for({"lambda": 2.0}, 1).seed != BASE.seed


# ---------------------------------------------------------------------------
# run_sweep
# ---------------------------------------------------------------------------

def small_spec(**kwargs):
    params = dict(base=BASE, axes=(("lambda", (0.0, 30.0)), ("a", (0.01, 0.5))), T_max=30, window=5, delta=1.0)
    params.update(kwargs)
    return SweepSpec(**params)


def test_run_sweep_two_by_two():
    result = run_sweep(small_spec(), progress=False)
    assert len(result.cells) == 4
    assert len(result.runs) == 4
    assert [cell.params for cell in result.cells] == small_spec().cells()
    assert result.value_grid().shape == (2, 2)
    for cell in result.cells:
        assert 530.5 <= cell.final_mean_c <= 729.5
        assert cell.dispersion == 0.0


def test_single_cell_reduces_to_run_trajectory():
    spec = SweepSpec(base=BASE, axes=(("lambda", (3.0,)),), T_max=25, window=5, delta=1.0)
    result = run_sweep(spec, progress=False)
    trajectory = run_trajectory(spec.config_for({"lambda": 3.0}, 0))
    assert result.cells[0].final_mean_c == trajectory.summaries[-1].overall.mean_c
    assert result.cells[0].converged_at == (trajectory.converged_at,)
    assert result.value_grid().shape == (1, 1)


def test_replicates_use_distinct_seeds():
    spec = SweepSpec(base=BASE, axes=(("lambda", (1.0,)),), T_max=10, replicates=3, window=5, delta=0.01)
    result = run_sweep(spec, progress=False)
    runs = result.cells[0].runs
    assert [run.replicate for run in runs] == [0, 1, 2]
    assert len({run.seed for run in runs}) == 3
    assert runs[0].seed == BASE.seed
    finals = [run.final_mean_c for run in runs]
    assert result.cells[0].final_mean_c == pytest.approx(np.median(finals))
    assert result.cells[0].dispersion == pytest.approx(np.std(finals))
    assert result.cells[0].dispersion > 0


def test_invalid_cell_aborts_before_running(mocker):
    run_cell = mocker.patch("src.sweep.sweep_engine._run_cell")
    spec = SweepSpec(base=BASE, axes=(("aProb", (0.5, 2.0)),))
    with pytest.raises(ConfigurationError) as exc:
        run_sweep(spec, progress=False)
    assert exc.value.key == "aProb"
    assert "2.0" in str(exc.value)
    run_cell.assert_not_called()


def test_keep_trajectories():
    result = run_sweep(small_spec(keep_trajectories=True), progress=False)
    for run in result.runs:
        assert run.summaries is not None
        assert run.summaries[-1].generation == run.generations
    assert all(run.summaries is None for run in run_sweep(small_spec(), progress=False).runs)


def test_parallel_sweep_matches_serial():
    serial = run_sweep(small_spec(), n_jobs=1, progress=False)
    parallel = run_sweep(small_spec(), n_jobs=2, progress=False)
    assert [c.final_mean_c for c in serial.cells] == [c.final_mean_c for c in parallel.cells]
    assert [c.converged_at for c in serial.cells] == [c.converged_at for c in parallel.cells]


def _cell_key(cell):
    return tuple(sorted(cell.params.items()))


def test_cells_do_not_depend_on_execution_order():
    forward = run_sweep(small_spec(), progress=False)
    reversed_axes = tuple((name, tuple(reversed(values))) for name, values in small_spec().axes)
    backward = run_sweep(small_spec(axes=reversed_axes), progress=False)
    assert [c.params for c in backward.cells] != [c.params for c in forward.cells]

    by_params = {_cell_key(cell): cell for cell in backward.cells}
    for cell in forward.cells:
        other = by_params[_cell_key(cell)]
        assert other.final_mean_c == cell.final_mean_c
        assert other.final_mean_by_group == cell.final_mean_by_group
        assert other.converged_at == cell.converged_at
        assert other.dispersion == cell.dispersion
        assert [run.final_mean_c for run in other.runs] == [run.final_mean_c for run in cell.runs]


def test_stronger_production_bias_never_ends_higher():
    # ventana > T_max: ninguna celda se detiene antes
    spec = SweepSpec(base=BASE, axes=(("lambda", (0.0, 4.0)), ("a", (0.02,))), T_max=60, window=100, delta=0.5)
    result = run_sweep(spec, progress=False)
    unbiased, biased = result.cells
    assert unbiased.params["lambda"] == 0.0 and biased.params["lambda"] == 4.0
    assert unbiased.converged_at == biased.converged_at == (None,)
    assert unbiased.final_mean_c >= biased.final_mean_c - 1e-6


def test_lambda_sweep_finds_bifurcation():
    base = ScenarioConfig(M=100, n=100, seed=2, prior=PriorSpec(a=0.02), init_a=InitialDistribution(720.0, 10.0))
    spec = SweepSpec(base=base, axes=(("lambda", (0.0, 25.0)),), T_max=300, window=50, delta=0.5)
    result = run_sweep(spec, progress=False)
    pairs = find_bifurcation(result, "lambda", jump=100.0)
    assert len(pairs) == 1
    below, above = pairs[0]
    assert below.final_mean_c >= 700.0 and below.regime == "none"
    assert above.final_mean_c <= 560.0 and above.regime == "full"


# ---------------------------------------------------------------------------
# find_bifurcation / classify_regime
# ---------------------------------------------------------------------------

def test_find_bifurcation_along_one_axis():
    cells = [fake_cell({"lambda": lam}, mean) for lam, mean in ((0.0, 725.0), (1.0, 719.0), (2.0, 540.0), (3.0, 531.0))]
    pairs = find_bifurcation(cells, "lambda", jump=100.0)
    assert [(left.params["lambda"], right.params["lambda"]) for left, right in pairs] == [(1.0, 2.0)]
    assert find_bifurcation(cells, "lambda", jump=500.0) == []


def test_find_bifurcation_in_two_dimensional_grid():
    means = {(0.0, 0.01): 720.0, (0.0, 0.1): 720.0, (2.0, 0.01): 720.0, (2.0, 0.1): 535.0}
    cells = [fake_cell({"lambda": lam, "a": a}, m) for (lam, a), m in means.items()]
    along_lambda = find_bifurcation(cells, "lambda", jump=100.0)
    assert [(l.params, r.params) for l, r in along_lambda] == [({"lambda": 0.0, "a": 0.1}, {"lambda": 2.0, "a": 0.1})]
    along_a = find_bifurcation(cells, "a", jump=100.0)
    assert [(l.params, r.params) for l, r in along_a] == [({"lambda": 2.0, "a": 0.01}, {"lambda": 2.0, "a": 0.1})]


def test_find_bifurcation_unknown_axis():
    with pytest.raises(ValueError):
        find_bifurcation([fake_cell({"lambda": 0.0}, 700.0)], "a", jump=10.0)
    assert find_bifurcation([], "a", jump=10.0) == []


def test_classify_regime(lex):
    assert classify_regime(725.0, lex) == "none"
    assert classify_regime(535.0, lex) == "full"
    assert classify_regime(630.0, lex) == "intermediate"
    assert classify_regime(690.0, lex, margin=50.0) == "none"
