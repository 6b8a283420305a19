from .DiffusionSchedule import DiffusionSchedule, SCHEDULE_KINDS
from .GaussianBridge import GaussianBridge, solve_gaussian_bridge
from .BaseBridge import BaseBridge
from .GaussianLocalBridge import GaussianLocalBridge
from .NeuralLocalBridge import NeuralLocalBridge
from .JointBridge import JointBridge
from .config import TrainConfig
from .cfm import cfm_training_pair
from .training import select_solver, train_local_bridge, looks_gaussian, nonlinearity_gain
from .energy import local_kl_energy, path_energy


def bridge_from_bundle(meta: dict, arrays: dict, schedule=None) -> BaseBridge:
    """Rebuild a local bridge from its to_bundle() output."""
    if meta['solver'] == 'gaussian':
        return GaussianLocalBridge.from_bundle(meta, arrays, schedule)
    if meta['solver'] == 'neural':
        return NeuralLocalBridge.from_bundle(meta, arrays, schedule)
    raise ValueError(f"Unknown solver {meta['solver']!r}.")
