import logging
import numpy as np
import pandas as pd

from graph import Dag
from graph.seeding import derive_seed
from data import build_embedded_moons, classify_moons, random_embedding
from bridges import TrainConfig
from fitting import fit
from sde import TimeGrid
from evaluation import mode_fractions, support_coverage
from .common import Stopwatch, make_report
from .config import experiment_config

logger = logging.getLogger(__name__)

PREVIEW_ROWS = 500


def moon_populations(cfg: dict, seed: int):
    """
    Control and stimulated moons embedded in R^dim. Control cells sit close to the moon
    plane with cfg['control_weight'] of their mass on the upper moon; the stimulated
    population is balanced, shifted by cfg['shift'] and scattered off the plane with
    std cfg['response_spread'].
    """
    embedding = random_embedding(cfg['dim'], 2, seed)
    geometry = dict(radius=cfg['radius'], gap=cfg['gap'], noise=cfg['noise'])
    data0, _ = build_embedded_moons(cfg['n'], cfg['dim'], derive_seed(seed, 1), embedding,
                                    weight=cfg['control_weight'], spread=cfg['control_spread'], **geometry)
    data1, labels1 = build_embedded_moons(cfg['n'], cfg['dim'], derive_seed(seed, 2), embedding,
                                          offset=cfg['shift'], spread=cfg['response_spread'], **geometry)
    return embedding, data0, data1, labels1


def principal_axes(cloud: np.ndarray, k: int = 2) -> np.ndarray:
    centred = cloud - cloud.mean(axis=0)
    _, _, vt = np.linalg.svd(centred, full_matrices=False)
    return vt[:k].T


def run_tunneling(seed: int = 42, cfg: dict = None, large: bool = False):
    """
    Moons to shifted moons in R^dim. One neural bridge over the whole state is trained
    at every sigma of the sweep; sigma = 0 is the deterministic flow, cfg['sigma'] the causal bridge.

    A flow is a bijection of the near-planar control cloud, so it cannot rebuild the
    off-plane scatter of the response; the diffusion term can. Mode masses are read
    by nearest-moon classification in the moon plane.
    """
    cfg = experiment_config('tunneling', cfg, large)
    clock = Stopwatch()
    embedding, data0, data1, labels1 = moon_populations(cfg, seed)
    dag = Dag(1, (), ('state',))
    grid = TimeGrid(cfg['grid_steps'])
    sigmas = sorted(set(float(s) for s in cfg['sigma_sweep']) | {0.0, float(cfg['sigma'])})

    generated, metrics = {}, {}
    for s in sigmas:
        train = TrainConfig(steps=cfg['train_steps'], batch=cfg['batch'], lr=cfg['lr'], sigma=s,
                            seed=seed, hidden=tuple(cfg['hidden']), solver='neural')
        model = fit(dag, data0, data1, cfg=train, seed=seed, widths=[cfg['dim']])
        generated[s] = model.generate(cfg['n_gen'], grid, sigma=s, seed=derive_seed(seed, 3))
        metrics[f'coverage_sigma_{s:g}'] = support_coverage(generated[s], data1)
        logger.info('sigma=%g: coverage %.3f', s, metrics[f'coverage_sigma_{s:g}'])

    geometry = dict(radius=cfg['radius'], gap=cfg['gap'], offset=cfg['shift'])
    target_fractions = mode_fractions(labels1)
    for label, s in (('ode', 0.0), ('csb', float(cfg['sigma']))):
        fractions = mode_fractions(classify_moons(generated[s] @ embedding, **geometry))
        metrics[f'{label}_coverage'] = metrics[f'coverage_sigma_{s:g}']
        metrics[f'{label}_mode0'] = fractions[0]
        metrics[f'{label}_mode1'] = fractions[1]
        metrics[f'{label}_mode_imbalance'] = float(np.abs(fractions - target_fractions).sum())
    metrics['target_mode0'] = target_fractions[0]

    coverage = [metrics[f'coverage_sigma_{float(s):g}'] for s in sorted(cfg['sigma_sweep'])]
    metrics['sweep_monotone'] = float(all(b >= a for a, b in zip(coverage, coverage[1:])))

    # PCA of the causal-bridge cloud, for external plotting
    axes = principal_axes(generated[float(cfg['sigma'])])
    projection = pd.DataFrame(axes, columns=['pc1', 'pc2'])
    frames = []
    for label, cloud in (('source', data0.samples), ('target', data1.samples),
                         ('ode', generated[0.0]), ('csb', generated[float(cfg['sigma'])])):
        pts = cloud[:PREVIEW_ROWS] @ axes
        frames.append(pd.DataFrame({'method': label, 'pc1': pts[:, 0], 'pc2': pts[:, 1]}))
    clouds = pd.concat(frames, ignore_index=True)

    return make_report('tunneling', metrics, clock, cfg, seed, inputs=(data0.samples, data1.samples),
                       artifacts={'projection': projection, 'clouds': clouds})
