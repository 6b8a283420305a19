import numpy as np
import pytest
from scipy.stats import norm

from errors import ConfigError, DimensionMismatch, NonPositiveStd
from graph import Dag, confounder_scm, sin_tanh_chain_scm
from data import Dataset, build_latent_source
from bridges import (
    DiffusionSchedule, GaussianBridge, GaussianLocalBridge, NeuralLocalBridge, JointBridge,
    TrainConfig, bridge_from_bundle, cfm_training_pair, local_kl_energy, select_solver,
    solve_gaussian_bridge, train_local_bridge,
)
from fitting import fit
from nets import epoch_means
from sde import TimeGrid, Trajectory, integrate_sde


def _make_confounder_pair(n=4000, seed=0):
    data1 = confounder_scm().sample(n, seed)
    data0 = build_latent_source(n, 3, seed, data1.names)
    return data0, data1


# schedules

def test_schedule_kinds():
    assert DiffusionSchedule(0.5)(0.3) == 0.5
    assert DiffusionSchedule(0.5, 'bridge_scaled')(0.5) == pytest.approx(0.5)
    assert DiffusionSchedule(0.5, 'bridge_scaled')(0.0) == 0.0
    t = np.linspace(0, 1, 20001)
    g = DiffusionSchedule(0.7, 'bridge_scaled')(t)
    assert np.trapezoid(g ** 2, t) == pytest.approx(DiffusionSchedule(0.7, 'bridge_scaled').total_variance(), rel=1e-4)
    with pytest.raises(ValueError):
        DiffusionSchedule(0.1, 'cosine')
    with pytest.raises(ValueError):
        DiffusionSchedule(-0.1)


def test_train_config_validation():
    assert TrainConfig.from_dict({'epochs': 7}).steps == 7
    assert TrainConfig().replace(sigma=0.3).sigma == 0.3
    with pytest.raises(ConfigError):
        TrainConfig.from_dict({'learning_rate': 0.1})
    with pytest.raises(ConfigError):
        TrainConfig(solver='sinkhorn')
    with pytest.raises(ConfigError):
        TrainConfig(schedule='cosine')


# closed-form Gaussian bridge

def test_gaussian_bridge_endpoints_and_coupling():
    b = solve_gaussian_bridge(1.0, 0.5, -2.0, 2.0)
    assert b.mean(0.0) == 1.0 and b.mean(1.0) == -2.0
    assert b.variance(0.0) == pytest.approx(0.25)
    assert b.variance(1.0) == pytest.approx(4.0)
    assert b.coupling_correlation == pytest.approx(1.0)
    entropic = GaussianBridge(1.0, 0.5, -2.0, 2.0, sigma=1.0)
    assert entropic.coupling_correlation < 1.0
    assert entropic.c == pytest.approx(0.5 * (np.sqrt(4 * 0.25 * 4.0 + 1.0) - 1.0))


def test_gaussian_bridge_validation():
    with pytest.raises(NonPositiveStd):
        GaussianBridge(0.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        GaussianBridge(0.0, 1.0, 1.0, 1.0, cross_cov=1.5)


@pytest.mark.parametrize('sigma,kind', [(0.0, 'constant'), (1.0, 'constant'), (1.0, 'bridge_scaled')])
def test_simulated_bridge_hits_the_target_marginal(sigma, kind):
    b = GaussianBridge(1.0, 0.5, -2.0, 2.0, sigma=sigma, kind=kind)
    rng = np.random.default_rng(0)
    x0 = b.sample_source(20000, rng)
    end = integrate_sde(b.drift, b.schedule, x0, TimeGrid(500), seed=1).end
    assert end.mean() == pytest.approx(-2.0, abs=0.05)
    assert end.std() == pytest.approx(2.0, abs=0.05)


def test_monge_map_is_monotone_and_invertible():
    b = GaussianBridge(1.0, 0.5, -2.0, 2.0)
    x = np.linspace(-3, 3, 50)
    y = b.monge_map(x)
    assert np.all(np.diff(y) > 0)
    assert b.inverse_monge_map(y) == pytest.approx(x)
    # the sigma=0 flow lands on the Monge image
    end = integrate_sde(b.drift, 0.0, x, TimeGrid(1000), seed=0).end
    assert end == pytest.approx(y, abs=1e-2)


def test_deterministic_bridge_matches_quantiles():
    b = GaussianBridge(1.0, 0.5, -2.0, 2.0)
    q = np.linspace(0.005, 0.995, 100)
    end = integrate_sde(b.drift, 0.0, 1.0 + 0.5 * norm.ppf(q), TimeGrid(1000), seed=0).end
    assert end == pytest.approx(-2.0 + 2.0 * norm.ppf(q), abs=1e-3)


def test_mean_shift_energy_and_its_quadratic_growth():
    assert GaussianBridge(0.0, 1.0, 3.0, 1.0).analytic_energy() == pytest.approx(4.5)
    assert GaussianBridge(0.0, 1.0, 6.0, 1.0).analytic_energy() == pytest.approx(18.0)
    bridge = GaussianLocalBridge.from_params(0, (), (0.0, [], 1.0), (3.0, [], 1.0))
    assert local_kl_energy(bridge, n_mc=2000, grid=TimeGrid(100)) == pytest.approx(4.5, rel=1e-6)


# local bridges

def test_gaussian_local_bridge_recovers_the_mechanism():
    data0, data1 = _make_confounder_pair(20000)
    bridge = train_local_bridge(1, data0, data1, parents=(0,), cfg=TrainConfig(solver='gaussian'))
    assert isinstance(bridge, GaussianLocalBridge)
    a1, b1, s1 = bridge.target
    assert b1[0] == pytest.approx(2.0, abs=0.02)
    assert s1 == pytest.approx(0.3, abs=0.01)
    assert bridge.source[2] == pytest.approx(1.0, abs=0.02)


def test_degenerate_conditional_is_rejected():
    x = np.linspace(0, 1, 50)
    with pytest.raises(NonPositiveStd):
        GaussianLocalBridge(1, (0,)).fit(np.random.default_rng(0).standard_normal(50), x, np.zeros(50), x)


def test_parent_path_is_required_and_checked():
    bridge = GaussianLocalBridge.from_params(1, (0,), (0.0, [0.0], 1.0), (0.0, [2.0], 0.3))
    with pytest.raises(DimensionMismatch):
        bridge.drift_field(None)
    bad = Trajectory(np.zeros((11, 4, 2)), TimeGrid(10))
    with pytest.raises(DimensionMismatch):
        bridge.drift_field(bad)


def test_gaussian_child_follows_its_parent_path():
    bridge = GaussianLocalBridge.from_params(1, (0,), (0.0, [0.0], 1.0), (0.0, [2.0], 0.3))
    grid = TimeGrid(200)
    parent = Trajectory.constant(np.array([[1.0], [-1.0]]), grid)
    end = integrate_sde(bridge.drift_field(parent), 0.0, np.zeros((2, 1)), grid, seed=0).end
    # a zero latent lands on the conditional target mean 2 * parent
    assert end[:, 0] == pytest.approx([2.0, -2.0], abs=1e-6)


def test_solver_selection():
    data0, data1 = _make_confounder_pair(5000)
    assert select_solver(data0.samples[:, 1], data0.samples[:, [0]],
                         data1.samples[:, 1], data1.samples[:, [0]]) == 'gaussian'
    chain = sin_tanh_chain_scm(3, noise_std=0.1).sample(5000, 0).samples
    latent = build_latent_source(5000, 6, 0).samples
    assert select_solver(latent[:, 4], latent[:, [1, 0]], chain[:, 4], chain[:, [1, 0]]) == 'neural'
    assert select_solver(latent[:, :2], latent[:, []], chain[:, :2], chain[:, []]) == 'neural'
    assert select_solver(latent[:, 4], latent[:, [1, 0]], chain[:, 4], chain[:, [1, 0]],
                         TrainConfig(solver='gaussian')) == 'gaussian'


def test_cfm_pair():
    x0, x1 = np.zeros((3, 2)), np.ones((3, 2))
    x_t, v = cfm_training_pair(x0, x1, 0.25, 0.0, np.zeros((3, 2)))
    assert np.all(x_t == 0.25) and np.all(v == 1.0)
    x_t, _ = cfm_training_pair(x0, x1, 0.0, 5.0, np.ones((3, 2)))
    assert np.all(x_t == 0.0)
    with pytest.raises(ValueError):
        cfm_training_pair(np.zeros(3), np.zeros(4), 0.5, 0.0, 0.0)


def test_neural_root_bridge_learns_a_shift():
    rng = np.random.default_rng(0)
    x0 = rng.standard_normal((4000, 1))
    x1 = 3.0 + rng.standard_normal((4000, 1))
    bridge = NeuralLocalBridge(0, (), hidden=(32, 32), seed=1)
    bridge.train(x0, x1, None, TrainConfig(steps=1500, batch=128, lr=0.01), seed=2)
    initial, final = bridge.heldout_loss
    assert final < initial
    # epoch means never rise by more than 5%
    means = epoch_means(bridge.loss_history, 250)
    assert len(means) == 6
    assert np.all(means[1:] <= 1.05 * means[:-1])
    end = integrate_sde(bridge.drift_field(), 0.0, x0[:2000], TimeGrid(100), seed=0).end
    assert end.mean() == pytest.approx(3.0, abs=0.3)

    meta, arrays = bridge.to_bundle()
    clone = bridge_from_bundle(meta, arrays)
    x = np.linspace(-2, 2, 5)[:, None]
    assert np.array_equal(clone.drift(x, 0.3), bridge.drift(x, 0.3))


def test_neural_child_needs_parent_paths():
    data0, data1 = _make_confounder_pair(200)
    with pytest.raises(DimensionMismatch):
        train_local_bridge(1, data0, data1, parents=(0,), cfg=TrainConfig(solver='neural', steps=5))


def test_neural_child_learns_the_sin_tanh_mechanism():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4000, 2))
    u = rng.standard_normal((4000, 1))
    x1 = np.sin(a[:, [1]]) + 0.5 * np.tanh(a[:, [0]]) + 0.1 * u
    # parents (a1, a0) held at their factual values along the path
    parent_states = np.broadcast_to(a[:, [1, 0]], (6, 4000, 2)).copy()
    bridge = NeuralLocalBridge(3, (1, 0), hidden=(32, 32), seed=1)
    bridge.train(u, x1, parent_states, TrainConfig(steps=2000, batch=256, lr=0.01), seed=2)
    initial, final = bridge.heldout_loss
    assert final < 0.5 * initial


def test_identity_transport_has_no_drift():
    x = np.random.default_rng(0).standard_normal((2000, 1))
    bridge = NeuralLocalBridge(0, (), hidden=(16,), seed=1)
    bridge.train(x, x, None, TrainConfig(steps=200, batch=64, lr=0.01), seed=2)
    assert bridge.heldout_drift_energy() <= 0.05
    with pytest.raises(DimensionMismatch):
        NeuralLocalBridge(1, (0,)).heldout_drift_energy()


def test_neural_bridge_hits_the_target_marginal():
    x0 = np.random.default_rng(0).standard_normal((10000, 1))
    bridge = NeuralLocalBridge(0, (), hidden=(32, 32), seed=1)
    bridge.train(x0, x0 + 3.0, None, TrainConfig(steps=1500, batch=128, lr=0.01), seed=2)
    end = integrate_sde(bridge.drift_field(), 0.0, x0, TimeGrid(100), seed=0).end
    assert end.mean() == pytest.approx(x0.mean() + 3.0, abs=0.05)
    assert end.std() == pytest.approx(x0.std(), abs=0.05)


def test_neural_child_needs_one_parent_path_per_row():
    rng = np.random.default_rng(0)
    x0, x1 = rng.standard_normal((100, 1)), rng.standard_normal((100, 1))
    bridge = NeuralLocalBridge(1, (0,), hidden=(4,))
    with pytest.raises(DimensionMismatch):
        bridge.train(x0, x1, np.zeros((6, 50, 1)), TrainConfig(steps=1))


# structure-blind baseline

def test_joint_gaussian_transport_matches_moments():
    data0, data1 = _make_confounder_pair(20000)
    joint = JointBridge('gaussian').fit(data0.select(['Y', 'Z']), data1.select(['Y', 'Z']))
    out = joint.transport(data0.select(['Y', 'Z']).samples, TimeGrid(200))
    assert np.cov(out, rowvar=False) == pytest.approx(np.cov(data1.select(['Y', 'Z']).samples, rowvar=False), abs=0.1)
    back = joint.abduct(joint.transport(data0.select(['Y', 'Z']).samples[:50], TimeGrid(1000)), TimeGrid(1000))
    assert back == pytest.approx(data0.select(['Y', 'Z']).samples[:50], abs=2e-2)


def test_joint_counterfactual_drags_the_correlated_coordinate():
    data0, data1 = _make_confounder_pair(20000)
    joint = JointBridge('gaussian').fit(data0.select(['Y', 'Z']), data1.select(['Y', 'Z']))
    fact = np.array([[-8.0, -8.1]])
    out = joint.counterfactual(fact, {0: 3.0}, TimeGrid(100))
    assert out[0, 0] == 3.0
    assert abs(out[0, 1] - fact[0, 1]) > 5.0
    with pytest.raises(DimensionMismatch):
        joint.counterfactual(fact, {5: 1.0})


# factorised control energy

def _make_chain_model(sigma=0.5):
    dag = Dag(2, ((0, 1),), ('A', 'B'))
    rng = np.random.default_rng(0)
    a = rng.standard_normal(8000)
    b = 1.5 * a + 0.5 * rng.standard_normal(8000)
    data1 = Dataset(np.column_stack([1.0 + 2.0 * a, b]), ['A', 'B'])
    data0 = build_latent_source(8000, 2, 0, ['A', 'B'])
    return fit(dag, data0, data1, cfg=TrainConfig(solver='gaussian', sigma=sigma), seed=0)


def test_total_energy_is_the_sum_of_local_energies():
    model = _make_chain_model()
    grid = TimeGrid(200)
    total, local = model.energy(n_mc=20000, seed=0, grid=grid)
    assert total == pytest.approx(sum(local.values()))

    root = float(model.bridges[0].conditional().analytic_energy(n_quad=401))
    _, paths = model.generate(20000, grid, seed=0, return_paths=True)
    child = float(np.mean(model.bridges[1].conditional(paths[0]).analytic_energy(n_quad=401)))
    assert total == pytest.approx(root + child, rel=0.03)


def test_admissible_perturbations_never_lower_the_energy():
    model = _make_chain_model()
    grid = TimeGrid(100)
    optimal, _ = model.energy(n_mc=10000, seed=1, grid=grid)
    rng = np.random.default_rng(3)
    for _ in range(10):
        options = {}
        for i, bridge in enumerate(model.bridges):
            bound = bridge.source[2] * bridge.target[2]
            options[i] = {'cross_cov': rng.uniform(-0.5, 1.0) * bound}
        perturbed, _ = model.energy(n_mc=10000, seed=1, grid=grid, field_options=options)
        assert perturbed >= optimal * 0.99
