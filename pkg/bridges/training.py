import logging
import numpy as np
from scipy import stats

from errors import DimensionMismatch
from graph.seeding import derive_seed
from .BaseBridge import BaseBridge
from .DiffusionSchedule import DiffusionSchedule
from .GaussianLocalBridge import GaussianLocalBridge
from .NeuralLocalBridge import NeuralLocalBridge
from .config import TrainConfig

logger = logging.getLogger(__name__)

NONLINEAR_GAIN = 0.01


def _r2(y, design):
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    total = np.sum((y - y.mean()) ** 2)
    return 1.0 - float(resid @ resid) / total if total > 0 else 1.0, resid


def nonlinearity_gain(y, parents) -> float:
    """R^2 gained by adding squared and cubed parents to a linear regression."""
    if parents.size == 0:
        return 0.0
    ones = np.ones((y.shape[0], 1))
    linear, _ = _r2(y, np.hstack([ones, parents]))
    cubic, _ = _r2(y, np.hstack([ones, parents, parents ** 2, parents ** 3]))
    return cubic - linear


def looks_gaussian(y, parents) -> bool:
    """Linear conditional mean with Gaussian residuals, judged on sample moments."""
    n = y.shape[0]
    ones = np.ones((n, 1))
    _, resid = _r2(y, np.hstack([ones, parents]) if parents.size else ones)
    if np.std(resid) == 0:
        return False
    # 6 standard errors of the sample skew / excess kurtosis, never tighter than the floors
    skew_tol = max(0.15, 6.0 * np.sqrt(6.0 / n))
    kurt_tol = max(0.3, 6.0 * np.sqrt(24.0 / n))
    return (abs(stats.skew(resid)) < skew_tol
            and abs(stats.kurtosis(resid)) < kurt_tol
            and nonlinearity_gain(y, parents) < NONLINEAR_GAIN)


def select_solver(x0, pa0, x1, pa1, cfg: TrainConfig = None) -> str:
    """'gaussian' when both conditionals look linear-Gaussian (or cfg forces it), else 'neural'."""
    cfg = cfg if cfg is not None else TrainConfig()
    if cfg.solver != 'auto':
        return cfg.solver
    x0, x1 = np.asarray(x0, dtype=float), np.asarray(x1, dtype=float)
    if x0.ndim > 1 and x0.shape[1] > 1:
        return 'neural'
    x0, x1 = x0.reshape(-1), x1.reshape(-1)
    pa0 = np.asarray(pa0, dtype=float).reshape(x0.shape[0], -1)
    pa1 = np.asarray(pa1, dtype=float).reshape(x1.shape[0], -1)
    return 'gaussian' if looks_gaussian(x0, pa0) and looks_gaussian(x1, pa1) else 'neural'


def train_local_bridge(
    node: int,
    data0,
    data1,
    parent_paths=None,
    schedule: DiffusionSchedule = None,
    cfg: TrainConfig = None,
    parents=(),
    columns=None,
    parent_columns=None,
    seed: int = None,
    solver: str = None,
) -> BaseBridge:
    """
    Solve the local bridge of `node` between data0 and data1.

    Parameters:
    - data0, data1: Datasets whose columns cover the node and its parents
    - parent_paths: Trajectory (K+1, n, n_parents) of the parents for every one of the n
                    target rows; only neural solvers read it
    - parents: parent node indices
    - columns, parent_columns: dataset columns of the node and of its parents
                               (default: [node] and the parent indices)
    - solver: overrides the automatic choice
    """
    cfg = cfg if cfg is not None else TrainConfig()
    schedule = schedule if schedule is not None else DiffusionSchedule(cfg.sigma, cfg.schedule)
    seed = cfg.seed if seed is None else seed
    parents = tuple(parents)
    columns = [node] if columns is None else list(columns)
    parent_columns = list(parents) if parent_columns is None else list(parent_columns)

    if data0.d != data1.d:
        raise DimensionMismatch(f'data0 has {data0.d} columns, data1 has {data1.d}.')
    needed = columns + parent_columns
    if needed and max(needed) >= data0.d:
        raise DimensionMismatch(f'node {node} reads column {max(needed)} of a {data0.d}-column dataset.')

    x0 = data0.samples[:, columns]
    x1 = data1.samples[:, columns]
    pa0 = data0.samples[:, parent_columns]
    pa1 = data1.samples[:, parent_columns]
    solver = solver or select_solver(x0, pa0, x1, pa1, cfg)
    logger.debug('node %d: %s solver, %d parents', node, solver, len(parents))

    if solver == 'gaussian':
        if len(columns) != 1:
            raise DimensionMismatch(f'node {node}: the Gaussian solver handles scalar nodes only.')
        return GaussianLocalBridge(node, parents, schedule=schedule).fit(x0, pa0, x1, pa1)

    bridge = NeuralLocalBridge(node, parents, schedule=schedule, width=len(columns),
                               hidden=cfg.hidden, seed=derive_seed(seed, 1))
    states = None
    if parents:
        if parent_paths is None:
            raise DimensionMismatch(f'node {node}: neural solver needs parent paths.')
        states = parent_paths.forward_states()
    bridge.train(x0, x1, states, cfg, seed=seed)
    return bridge
