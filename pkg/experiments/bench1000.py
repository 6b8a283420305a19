import logging
import time
import numpy as np

from graph import markov_chain_scm, descendants
from graph.seeding import derive_seed
from data import build_latent_source
from bridges import TrainConfig
from fitting import fit
from sde import TimeGrid
from evaluation import mechanism_leakage, support_coverage, metrics_table
from .common import Stopwatch, make_report
from .config import experiment_config

logger = logging.getLogger(__name__)


def run_benchmark_1000d(seed: int = 42, cfg: dict = None, large: bool = False):
    """
    Causal surgery on a d-node AR(1) chain: do(x_k = do_value) at the middle node.
    Both variants use the neural solver on every node and differ only in sigma:
    the deterministic flow (sigma = 0) and the causal bridge (sigma = cfg['sigma']).
    Coverage is measured on the descendants of k against the true counterfactual,
    leakage on the non-descendants. Wall times are medians over cfg['timing_repeats'] runs.
    """
    cfg = experiment_config('bench1000', cfg, large)
    clock = Stopwatch()
    d = cfg['d']
    scm = markov_chain_scm(d, cfg['coefficient'])
    data1 = scm.sample(cfg['n'], seed)
    data0 = build_latent_source(cfg['n'], d, seed, data1.names)
    grid = TimeGrid(cfg['grid_steps'])

    k = d // 2
    unit_seed = derive_seed(seed, 21)
    units = scm.sample(cfg['n_units'], unit_seed).samples
    truth = scm.intervene({k: cfg['do_value']}).sample(cfg['n_units'], unit_seed).samples
    below = sorted(descendants(scm.dag, k))
    protected = [j for j in range(d) if j != k and j not in below]

    variants = (('ode', 0.0), ('csb', float(cfg['sigma'])))
    repeats = cfg['timing_repeats']
    train_times = {label: [] for label, _ in variants}
    infer_times = {label: [] for label, _ in variants}
    models, counterfactuals = {}, {}
    # seeded fits: every repeat rebuilds the same model
    for _ in range(repeats):
        for label, sigma in variants:
            train = TrainConfig(steps=cfg['train_steps'], batch=cfg['batch'], lr=cfg['lr'], sigma=sigma,
                                seed=seed, hidden=tuple(cfg['hidden']), solver='neural',
                                path_steps=cfg['path_steps'], path_rows=cfg['path_rows'])
            models[label] = fit(scm.dag, data0, data1, cfg=train, seed=seed)
            train_times[label].append(models[label].metadata['wall_time'])
    for _ in range(repeats):
        for label, sigma in variants:
            t0 = time.perf_counter()
            counterfactuals[label] = models[label].counterfactual(units, {k: cfg['do_value']}, grid, sigma, seed)
            infer_times[label].append(time.perf_counter() - t0)

    runs = {}
    for label, _ in variants:
        cf = counterfactuals[label]
        runs[label] = {
            'train_time_s': float(np.median(train_times[label])),
            'inference_time_s': float(np.median(infer_times[label])),
            'coverage': support_coverage(cf[:, below], truth[:, below]),
            'leakage': mechanism_leakage(units, cf, protected),
            'descendant_mse': float(np.mean((cf[:, below] - truth[:, below]) ** 2)),
        }
        logger.info('%s at d=%d: train %.1fs, coverage %.3f', label, d, runs[label]['train_time_s'],
                    runs[label]['coverage'])
    del models, counterfactuals

    metrics = {f'{label}_{key}': value for label, run in runs.items() for key, value in run.items()}
    metrics['train_time_ratio'] = runs['csb']['train_time_s'] / runs['ode']['train_time_s']
    metrics['inference_time_ratio'] = runs['csb']['inference_time_s'] / runs['ode']['inference_time_s']

    table = metrics_table({'Deterministic flow': runs['ode'], 'CSB': runs['csb']}).reset_index()
    return make_report('bench1000', metrics, clock, cfg, seed, inputs=(data1.samples,),
                       artifacts={'table': table})
