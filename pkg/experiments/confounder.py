import logging
import numpy as np
import pandas as pd

from graph import confounder_scm
from graph.seeding import derive_seed
from data import build_latent_source
from bridges import JointBridge, TrainConfig
from fitting import fit
from sde import TimeGrid, stack_paths
from evaluation import mechanism_leakage, transport_cost_l2
from .common import Stopwatch, make_report
from .config import experiment_config

logger = logging.getLogger(__name__)


def factual_unit(scm, fact_x: float, seed: int) -> np.ndarray:
    """One tail unit: X pinned at fact_x, Y and Z drawn from their mechanisms."""
    return scm.intervene({0: fact_x}).sample(1, derive_seed(seed, 11)).samples[0]


def confounder_data(cfg: dict, seed: int):
    scm = confounder_scm(cfg['noise_std'])
    data1 = scm.sample(cfg['n'], seed)
    data0 = build_latent_source(cfg['n'], data1.d, seed, data1.names)
    return scm, data0, data1


def fit_csb(dag, data0, data1, cfg: dict, seed: int):
    train = TrainConfig(solver='gaussian', sigma=cfg['sigma'], seed=seed)
    return fit(dag, data0, data1, cfg=train, seed=seed)


def run_confounder(seed: int = 42, cfg: dict = None, large: bool = False):
    """
    Fork Y <- X -> Z. A tail unit (X = fact_x) is pushed through do(Y = do_value) by
    the causal bridge and by a joint transport over (Y, Z) that ignores the graph.
    Z must not move under the causal model.
    """
    cfg = experiment_config('confounder', cfg, large)
    clock = Stopwatch()
    scm, data0, data1 = confounder_data(cfg, seed)
    grid = TimeGrid(cfg['grid_steps'])
    do = cfg['do_value']
    x_fact = factual_unit(scm, cfg['fact_x'], seed)

    # 1. Causal bridge: fit once, hybrid counterfactual
    model = fit_csb(scm.dag, data0, data1, cfg, seed)
    fit_time = clock.lap()
    csb, paths = model.counterfactual(x_fact, {'Y': do}, grid, cfg['sigma_gen'], seed, return_paths=True)
    csb_noop = model.counterfactual(x_fact, {'Y': x_fact[1]}, grid, cfg['sigma_gen'], seed)

    # 2. Structure-blind joint transport over (Y, Z)
    joint = JointBridge(cfg['baseline_solver'], TrainConfig(seed=seed)).fit(
        data0.select(['Y', 'Z']), data1.select(['Y', 'Z']), seed=seed
    )
    base = joint.counterfactual(x_fact[None, 1:], {0: do}, grid)[0]
    base_noop = joint.counterfactual(x_fact[None, 1:], {0: x_fact[1]}, grid)[0]

    # 3. Population of factual units
    units = scm.sample(cfg['population'], derive_seed(seed, 12)).samples
    csb_pop = model.counterfactual(units, {'Y': do}, grid, cfg['sigma_gen'], seed)
    base_pop = joint.counterfactual(units[:, 1:], {0: do}, grid)

    metrics = {
        'fact_x': x_fact[0], 'fact_y': x_fact[1], 'fact_z': x_fact[2],
        'csb_x': csb[0], 'csb_y': csb[1], 'csb_z': csb[2],
        'csb_delta_z': abs(csb[2] - x_fact[2]),
        'baseline_y': base[0], 'baseline_z': base[1],
        'baseline_delta_z': abs(base[1] - x_fact[2]),
        'noop_csb_delta_z': abs(csb_noop[2] - x_fact[2]),
        'noop_baseline_delta_z': abs(base_noop[1] - x_fact[2]),
        'csb_population_delta_z': float(np.mean(np.abs(csb_pop[:, 2] - units[:, 2]))),
        'baseline_population_delta_z': float(np.mean(np.abs(base_pop[:, 1] - units[:, 2]))),
        'csb_leakage': mechanism_leakage(units, csb_pop, [0, 2]),
        'baseline_leakage': mechanism_leakage(units[:, 1:], base_pop, [1]),
        'csb_transport_cost': transport_cost_l2(x_fact[None, 1:], csb[None, 1:]),
        'baseline_transport_cost': transport_cost_l2(x_fact[None, 1:], base[None, :]),
        'fit_time_s': fit_time,
    }
    logger.info('confounder: CSB |dZ|=%.4f, baseline |dZ|=%.3f', metrics['csb_delta_z'], metrics['baseline_delta_z'])

    table = pd.DataFrame([
        {'Method': 'Factual', 'Y': x_fact[1], 'X': x_fact[0], 'Z': x_fact[2], 'delta_z': 0.0},
        {'Method': 'Joint baseline', 'Y': base[0], 'X': np.nan, 'Z': base[1], 'delta_z': metrics['baseline_delta_z']},
        {'Method': 'CSB', 'Y': csb[1], 'X': csb[0], 'Z': csb[2], 'delta_z': metrics['csb_delta_z']},
    ])
    trajectory = stack_paths([paths[i] for i in range(3)]).to_frame(0, list(scm.names))
    return make_report('confounder', metrics, clock, cfg, seed, inputs=(data1.samples,),
                       artifacts={'table': table, 'trajectory': trajectory})
