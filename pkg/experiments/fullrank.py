import logging
import numpy as np

from graph.seeding import derive_rng, derive_seed
from data import build_chain_pair
from nets import Conv1dDrift, Mlp, fit_net
from evaluation import recovery_mse, metrics_table
from .common import Stopwatch, make_report
from .config import experiment_config

logger = logging.getLogger(__name__)

EVAL_CHUNK = 8


def predict(net, x, chunk: int = EVAL_CHUNK) -> np.ndarray:
    return np.concatenate([net.forward(x[i:i + chunk]) for i in range(0, x.shape[0], chunk)])


def _chain_split(cfg: dict, d: int, seed: int):
    data0, data1 = build_chain_pair(cfg['n_train'] + cfg['n_val'], d, seed, cfg['noise_std'])
    n = cfg['n_train']
    return data0.samples[:n], data1.samples[:n], data0.samples[n:], data1.samples[n:]


def train_regressor(net, x0, x1, cfg: dict, seed: int):
    """Momentum SGD on minibatches of (x0, x1) rows; returns the loss history."""
    def sample_batch(rng):
        idx = rng.integers(0, x0.shape[0], cfg['batch'])
        return x0[idx], x1[idx]

    return fit_net(net, sample_batch, cfg['steps'], lr=cfg['lr'], momentum=cfg['momentum'],
                   rng=derive_rng(seed, 31), label=net.name)


def conv_run(cfg: dict, d: int, seed: int, clock: Stopwatch) -> dict:
    x0, x1, v0, v1 = _chain_split(cfg, d, seed)
    clock.lap()
    net = Conv1dDrift(left_context=cfg['left_context'], hidden=cfg['conv_hidden'], seed=derive_seed(seed, 2))
    history = train_regressor(net, x0, x1, cfg, seed)
    return {
        'mse': recovery_mse(predict(net, v0), v1),
        'params': net.param_count(),
        'wall_time_s': clock.lap(),
        'final_train_loss': history[-1],
    }


def run_fullrank_audit(seed: int = 42, cfg: dict = None, large: bool = False):
    """
    Full-rank sin/tanh chain X1 = sin(X0) + 0.5 tanh(shifted X0) + noise at dimension d.
    A d -> hidden -> d global MLP and the weight-shared causal convolution get the same
    step budget; the convolution is also trained at d_small to show its error and size do not depend on d.
    """
    cfg = experiment_config('fullrank', cfg, large)
    clock = Stopwatch()
    d = cfg['d']

    # 1. Global MLP
    x0, x1, v0, v1 = _chain_split(cfg, d, seed)
    clock.lap()
    mlp = Mlp([d, cfg['mlp_hidden'], d], seed=derive_seed(seed, 1))
    history = train_regressor(mlp, x0, x1, cfg, seed)
    runs = {'Global MLP': {
        'mse': recovery_mse(predict(mlp, v0), v1),
        'params': mlp.param_count(),
        'wall_time_s': clock.lap(),
        'final_train_loss': history[-1],
    }}
    del mlp, x0, x1, v0, v1
    logger.info('global MLP at d=%d: mse %.4f', d, runs['Global MLP']['mse'])

    # 2. Decomposed convolution at d and at d_small
    runs['Conv1dDrift'] = conv_run(cfg, d, seed, clock)
    runs['Conv1dDrift (small d)'] = conv_run(cfg, cfg['d_small'], seed, clock)
    logger.info('conv at d=%d: mse %.4f', d, runs['Conv1dDrift']['mse'])

    mlp_run, conv, small = runs['Global MLP'], runs['Conv1dDrift'], runs['Conv1dDrift (small d)']
    metrics = {
        'mlp_mse': mlp_run['mse'],
        'mlp_params': mlp_run['params'],
        'mlp_wall_time_s': mlp_run['wall_time_s'],
        'conv_mse': conv['mse'],
        'conv_params': conv['params'],
        'conv_wall_time_s': conv['wall_time_s'],
        'conv_mse_small_d': small['mse'],
        'conv_params_small_d': small['params'],
        'param_ratio': mlp_run['params'] / conv['params'],
        'mse_ratio': mlp_run['mse'] / max(conv['mse'], 1e-12),
        'conv_mse_gap': abs(conv['mse'] - small['mse']),
    }
    table = metrics_table(runs).reset_index()
    table['d'] = [d, d, cfg['d_small']]
    return make_report('fullrank', metrics, clock, cfg, seed, artifacts={'table': table})
