from .BaseNet import BaseNet, param_count
from .Mlp import Mlp
from .Conv1dDrift import Conv1dDrift
from .MomentumSGD import MomentumSGD
from .training import fit_net, mse_loss_and_grads, epoch_means
from .gradcheck import finite_difference_check, output_input_gradient


def build_net(spec: dict) -> BaseNet:
    """Rebuild a net from its spec() dict."""
    spec = dict(spec)
    kind = spec.pop('type')
    if kind == 'Mlp':
        return Mlp(**spec)
    if kind == 'Conv1dDrift':
        return Conv1dDrift(**spec)
    raise ValueError(f'Unknown net type {kind!r}.')
