"""
Default settings of every experiment. A run merges, in order: these defaults,
the large-scale overrides when --large is set, a user JSON file, and CLI flags.
"""
import copy
import hashlib
import json

from errors import ConfigError

DEFAULTS = {
    'confounder': {
        'n': 5000,
        'noise_std': 0.3,
        'fact_x': -3.93,
        'do_value': 3.0,
        'sigma': 0.0,
        'sigma_gen': 0.01,
        'grid_steps': 200,
        'population': 200,
        'baseline_solver': 'neural',
    },
    'misspecified': {
        'n': 5000,
        'noise_std': 0.3,
        'fact_x': -3.93,
        'do_value': 3.0,
        'sigma': 0.0,
        'sigma_gen': 0.01,
        'grid_steps': 200,
        'population': 500,
    },
    'tunneling': {
        'dim': 10,
        'n': 4000,
        'n_gen': 4000,
        'radius': 1.0,
        'gap': 0.5,
        'noise': 0.05,
        'shift': [3.0, 0.0],
        'control_weight': 0.8,
        'control_spread': 0.002,
        'response_spread': 0.5,
        'sigma': 0.25,
        'sigma_sweep': [0.0, 0.25, 0.5],
        'grid_steps': 200,
        'train_steps': 3000,
        'batch': 256,
        'lr': 0.005,
        'hidden': [128, 128],
    },
    'bench1000': {
        'd': 1000,
        'coefficient': 0.8,
        'n': 2000,
        'n_units': 500,
        'do_value': 2.0,
        'sigma': 0.5,
        'grid_steps': 50,
        'train_steps': 150,
        'batch': 128,
        'lr': 0.01,
        'hidden': [16],
        'path_steps': 10,
        'path_rows': 512,
        'timing_repeats': 3,
    },
    'fullrank': {
        'd': 10000,
        'd_small': 1000,
        'noise_std': 0.1,
        'n_train': 512,
        'n_val': 64,
        'steps': 500,
        'batch': 8,
        'lr': 0.02,
        'momentum': 0.9,
        'mlp_hidden': 512,
        'conv_hidden': [80, 120],
        'left_context': 1,
    },
    'manifold': {
        'd': 1000,
        'n': 2000,
        'r0': 1.0,
        'r1': 2.0,
        'center': [1.5, -0.5],
        'noise': 0.01,
        'sigma': 0.0,
        'grid_steps': 100,
        'd_ref': 50,
        'trials': 5,
        'iterations': 100,
        'extrapolate_d': 100000,
    },
}

# full-size dimensions behind --large
LARGE = {
    'tunneling': {'dim': 50},
    'fullrank': {'d': 100000, 'd_small': 10000},
    'manifold': {'d': 100000},
}


def experiment_config(name: str, overrides: dict = None, large: bool = False) -> dict:
    if name not in DEFAULTS:
        raise ConfigError(f'Unknown experiment {name!r}; expected one of {sorted(DEFAULTS)}.')
    cfg = copy.deepcopy(DEFAULTS[name])
    if large:
        cfg.update(LARGE.get(name, {}))
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(cfg))
    if unknown:
        raise ConfigError(f'{name}: unknown config keys {unknown}.')
    cfg.update(overrides)
    return cfg


def load_overrides(path) -> dict:
    """JSON file, either flat or keyed by experiment name."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigError(f'{path}: {exc}') from exc
    if not isinstance(doc, dict):
        raise ConfigError(f'{path}: expected a JSON object.')
    return doc


def overrides_for(name: str, doc: dict) -> dict:
    if name in doc and isinstance(doc[name], dict):
        return doc[name]
    return {k: v for k, v in doc.items() if k not in DEFAULTS}


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode()).hexdigest()
