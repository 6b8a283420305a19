import numpy as np
import pytest

from errors import DimensionMismatch, NonPositiveStd, UnfittedModel
from graph import confounder_scm, sin_tanh_chain_scm
from data import Dataset, build_latent_source
from bridges import GaussianLocalBridge, TrainConfig, train_local_bridge
from fitting import CsbModel, fit, fit_wall_time_by_dimension, scaling_slope, path_hash, save_model, load_model
from sde import TimeGrid, Trajectory, hybrid_counterfactual


GAUSSIAN = TrainConfig(solver='gaussian', sigma=0.1)
TINY_NEURAL = TrainConfig(solver='neural', steps=10, batch=32, hidden=(8,), path_rows=64, path_steps=5)


def _make_confounder_pair(n=4000, seed=0):
    scm = confounder_scm()
    data1 = scm.sample(n, seed)
    data0 = build_latent_source(n, 3, seed, data1.names)
    return scm, data0, data1


def _make_chain_pair(d=2, n=256, seed=0):
    scm = sin_tanh_chain_scm(d)
    data1 = scm.sample(n, seed)
    data0 = build_latent_source(n, data1.d, seed, data1.names)
    return scm, data0, data1


def _bundles(model):
    return [model.bridges[i].to_bundle() for i in range(len(model.bridges))]


def _same_bundle(a, b):
    meta_a, arrays_a = a
    meta_b, arrays_b = b
    return meta_a == meta_b and arrays_a.keys() == arrays_b.keys() and all(
        np.array_equal(arrays_a[k], arrays_b[k]) for k in arrays_a
    )


def test_every_node_is_trained_exactly_once():
    scm, data0, data1 = _make_confounder_pair()
    calls = []

    def counting_trainer(node, *args, **kwargs):
        calls.append(node)
        return train_local_bridge(node, *args, **kwargs)

    model = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0, trainer=counting_trainer)
    assert sorted(calls) == [0, 1, 2]
    assert model.metadata['train_calls'] == {0: 1, 1: 1, 2: 1}
    assert model.metadata['solvers'] == {0: 'gaussian', 1: 'gaussian', 2: 'gaussian'}
    assert len(model.metadata['layer_wall_time']) == 2


def test_layer_order_does_not_change_the_bridges():
    scm, data0, data1 = _make_chain_pair()
    plain = fit(scm.dag, data0, data1, cfg=TINY_NEURAL, seed=3)
    shuffled = fit(scm.dag, data0, data1, cfg=TINY_NEURAL, seed=3, layer_order_seed=11)
    for a, b in zip(_bundles(plain), _bundles(shuffled)):
        assert _same_bundle(a, b)
    assert plain.metadata['parent_path_hash'] == shuffled.metadata['parent_path_hash']


def test_neural_children_condition_on_parent_paths():
    scm, data0, data1 = _make_chain_pair()
    model = fit(scm.dag, data0, data1, cfg=TINY_NEURAL, seed=3)
    hashes = model.metadata['parent_path_hash']
    for i in range(scm.node_count):
        if scm.dag.parents(i):
            assert hashes[i] is not None
        else:
            assert hashes[i] is None
    assert path_hash(None) is None


def test_neural_children_see_every_target_row():
    scm, data0, data1 = _make_chain_pair(n=256)
    rows = {}

    def recording_trainer(node, data0, data1, parent_paths, *args, **kwargs):
        if parent_paths is not None:
            rows[node] = parent_paths.forward_states().shape[1]
        return train_local_bridge(node, data0, data1, parent_paths, *args, **kwargs)

    # path_rows (64) only sets the abduction chunk
    fit(scm.dag, data0, data1, cfg=TINY_NEURAL, seed=0, trainer=recording_trainer)
    assert rows == {i: 256 for i in range(scm.node_count) if scm.dag.parents(i)}


def test_child_columns_never_reach_the_parent_bridges():
    scm, data0, data1 = _make_confounder_pair()
    poisoned = data1.samples.copy()
    poisoned[:, 2] = 5.0 * poisoned[:, 2] + np.random.default_rng(9).standard_normal(data1.n)
    clean = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0)
    dirty = fit(scm.dag, data0, Dataset(poisoned, data1.names), cfg=GAUSSIAN, seed=0)
    assert _same_bundle(clean.bridges[0].to_bundle(), dirty.bridges[0].to_bundle())
    assert _same_bundle(clean.bridges[1].to_bundle(), dirty.bridges[1].to_bundle())
    assert not _same_bundle(clean.bridges[2].to_bundle(), dirty.bridges[2].to_bundle())


@pytest.mark.parametrize('make_pair,cfg', [(_make_confounder_pair, GAUSSIAN), (_make_chain_pair, TINY_NEURAL)])
def test_node_drift_ignores_non_parent_coordinates(make_pair, cfg):
    scm, data0, data1 = make_pair()
    model = fit(scm.dag, data0, data1, cfg=cfg, seed=0)
    grid = TimeGrid(10)
    states = np.random.default_rng(4).standard_normal((11, 8, model.d))
    for i in range(scm.node_count):
        keep = set(model.columns(i)) | set(model.parent_columns(i))
        poisoned = states.copy()
        poisoned[..., [c for c in range(model.d) if c not in keep]] = 1e6
        clean_field = model.drift_field(i, Trajectory(states, grid))
        dirty_field = model.drift_field(i, Trajectory(poisoned, grid))
        x = states[3][:, model.columns(i)]
        for t in (0.0, 0.3, 1.0):
            assert np.array_equal(clean_field(x, t), dirty_field(x, t))


def test_failures_name_the_node():
    scm, data0, data1 = _make_confounder_pair(500)
    flat = data1.samples.copy()
    flat[:, 2] = 0.0
    with pytest.raises(NonPositiveStd, match=r'node 2 \(Z\)'):
        fit(scm.dag, data0, Dataset(flat, data1.names), cfg=GAUSSIAN)
    with pytest.raises(DimensionMismatch):
        fit(scm.dag, data0, data1, cfg=GAUSSIAN, widths=[1, 1])


def test_confounder_counterfactual_leaves_the_sibling_alone():
    scm, data0, data1 = _make_confounder_pair(20000)
    model = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0)
    fact = data1.samples[:20]
    grid = TimeGrid(500)
    out = model.counterfactual(fact, {'Y': 3.0}, grid)
    assert np.all(out[:, 1] == 3.0)
    assert out[:, 0] == pytest.approx(fact[:, 0], abs=0.05)
    assert out[:, 2] == pytest.approx(fact[:, 2], abs=0.05)
    # an empty intervention reproduces the unit
    assert model.counterfactual(fact, {}, grid) == pytest.approx(fact, abs=0.05)


def test_intervening_on_the_root_moves_its_children():
    scm, data0, data1 = _make_confounder_pair(20000)
    model = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0)
    fact = data1.samples[:1]
    out = model.counterfactual(fact[0], {0: fact[0, 0] + 1.0}, TimeGrid(500))
    assert out.shape == (3,)
    # Y and Z follow the +1 shift of X through their slope of 2
    assert out[1] - fact[0, 1] == pytest.approx(2.0, abs=0.1)
    assert out[2] - fact[0, 2] == pytest.approx(2.0, abs=0.1)


def test_stochastic_regeneration_is_seeded_per_node():
    scm, data0, data1 = _make_confounder_pair(4000)
    model = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0)
    fact = data1.samples[:10]
    grid = TimeGrid(100)
    out, paths = hybrid_counterfactual(model, fact, {'Y': 3.0}, grid, sigma_gen=0.3, seed=5,
                                       return_paths=True)
    noop = hybrid_counterfactual(model, fact, {}, grid, sigma_gen=0.3, seed=5)
    assert np.all(paths[1].states == 3.0)
    # X and Z have no intervened ancestor, so they match the no-op run draw for draw
    assert np.array_equal(out[:, [0, 2]], noop[:, [0, 2]])
    assert not np.allclose(noop, fact, atol=1e-6)


def test_generated_samples_match_the_target_moments():
    scm, data0, data1 = _make_confounder_pair(20000)
    model = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0)
    x = model.generate(20000, TimeGrid(200), seed=1)
    _, cov = scm.analytic_moments()
    assert np.cov(x, rowvar=False) == pytest.approx(cov, abs=0.15)


def test_model_store_round_trip(tmp_path):
    scm, data0, data1 = _make_confounder_pair()
    model = fit(scm.dag, data0, data1, cfg=GAUSSIAN, seed=0)
    save_model(model, tmp_path / 'model')
    back = load_model(tmp_path / 'model')
    assert back.dag.edges == model.dag.edges
    assert back.column_names == ('X', 'Y', 'Z')
    assert back.schedule == model.schedule
    assert back.metadata['train_calls'] == {'0': 1, '1': 1, '2': 1}
    fact = data1.samples[:5]
    grid = TimeGrid(100)
    assert back.counterfactual(fact, {'Y': 3.0}, grid) == pytest.approx(
        model.counterfactual(fact, {'Y': 3.0}, grid), rel=1e-4, abs=1e-5)
    with pytest.raises(FileNotFoundError):
        load_model(tmp_path / 'nowhere')


def test_neural_model_store_round_trip(tmp_path):
    scm, data0, data1 = _make_chain_pair()
    model = fit(scm.dag, data0, data1, cfg=TINY_NEURAL, seed=1)
    back = load_model(save_model(model, tmp_path))
    grid = TimeGrid(20)
    assert back.generate(10, grid, seed=4) == pytest.approx(model.generate(10, grid, seed=4), abs=1e-4)


def test_unfitted_model_refuses_to_run():
    scm = confounder_scm()
    bridges = [GaussianLocalBridge(i, scm.dag.parents(i)) for i in range(3)]
    model = CsbModel(scm.dag, bridges)
    with pytest.raises(UnfittedModel):
        model.generate(5)
    with pytest.raises(UnfittedModel):
        model.counterfactual(np.zeros(3), {'Y': 1.0})


def test_scaling_slope():
    assert scaling_slope([(10, 1.0), (100, 10.0), (1000, 100.0)]) == pytest.approx(1.0)
    assert scaling_slope([(10, 1.0), (100, 100.0)]) == pytest.approx(2.0)


def test_fit_wall_time_by_dimension():
    timings = fit_wall_time_by_dimension('markov_chain', [4, 8], cfg=GAUSSIAN, n=300)
    assert [d for d, _ in timings] == [4, 8]
    assert all(seconds > 0 for _, seconds in timings)
    with pytest.raises(ValueError):
        fit_wall_time_by_dimension('markov_chain', [8, 4])
    with pytest.raises(ValueError):
        fit_wall_time_by_dimension('lattice', [4])
