"""Full-size benchmark runs at their default configs. Run with --runslow."""
import pytest

from bridges import TrainConfig
from fitting import fit_wall_time_by_dimension, scaling_slope
from experiments import (
    experiment_config, run_confounder, run_misspecified, run_tunneling, run_benchmark_1000d,
    run_fullrank_audit, run_manifold_recovery,
)

pytestmark = pytest.mark.slow


def test_confounder_isolation():
    m = run_confounder(seed=42).metrics
    assert m['csb_delta_z'] <= 0.1
    assert m['baseline_delta_z'] >= 5.0
    assert m['csb_y'] == pytest.approx(3.0, abs=0.05)
    # the default baseline is the neural joint flow; do(Y = y_fact) leaves it in place
    assert experiment_config('confounder')['baseline_solver'] == 'neural'
    assert m['noop_baseline_delta_z'] <= 0.1


def test_misspecified_graph():
    m = run_misspecified(seed=42).metrics
    assert 2.5 <= m['wrong_delta_z'] <= 6.0
    assert m['error_ratio'] >= 10


def test_tunneling_coverage():
    m = run_tunneling(seed=42).metrics
    assert m['csb_coverage'] >= 0.95
    assert m['ode_coverage'] <= 0.90
    assert m['ode_mode_imbalance'] > m['csb_mode_imbalance']
    assert 0.35 <= m['csb_mode0'] <= 0.65
    assert m['sweep_monotone'] == 1.0


def test_fullrank_bottleneck():
    m = run_fullrank_audit(seed=42).metrics
    assert m['conv_mse'] <= 0.10
    assert m['mlp_mse'] >= 0.25
    assert m['conv_params'] == m['conv_params_small_d'] <= 2e4
    assert m['conv_mse_gap'] <= 0.05


def test_fit_time_is_linear_in_dimension():
    timings = fit_wall_time_by_dimension('markov_chain', [1000, 2000, 4000, 8000],
                                         cfg=TrainConfig(solver='gaussian'), n=2000)
    assert scaling_slope(timings) <= 1.3


def test_manifold_speedup():
    m = run_manifold_recovery(seed=42).metrics
    assert m['circularity'] <= 0.15
    assert m['speedup_projected'] >= 1e4


def test_benchmark_coverage_at_equal_cost():
    m = run_benchmark_1000d(seed=42).metrics
    assert m['csb_coverage'] > m['ode_coverage']
    assert abs(m['train_time_ratio'] - 1.0) <= 0.10
    assert abs(m['inference_time_ratio'] - 1.0) <= 0.10
