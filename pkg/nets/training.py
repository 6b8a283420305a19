import logging
from typing import Callable
import numpy as np

from errors import NonFiniteLoss
from .BaseNet import BaseNet
from .MomentumSGD import MomentumSGD

logger = logging.getLogger(__name__)


def mse_loss_and_grads(net: BaseNet, inputs, targets):
    """Mean squared error over all output entries and its exact parameter gradients."""
    pred = net.forward(inputs)
    resid = pred - targets
    loss = float(np.mean(resid ** 2))
    grads, _ = net.backward(inputs, 2.0 * resid / resid.size)
    return loss, grads


def fit_net(
    net: BaseNet,
    sample_batch: Callable,
    steps: int,
    lr: float = 1e-3,
    momentum: float = 0.9,
    rng: np.random.Generator = None,
    log_every: int = 0,
    label: str = '',
) -> list:
    """
    Minimise MSE over `steps` minibatches drawn by sample_batch(rng) -> (inputs, targets).
    Returns the per-step loss history. Raises NonFiniteLoss on divergence.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    opt = MomentumSGD(net.params, lr=lr, momentum=momentum)
    history = []
    last = None
    for step in range(steps):
        inputs, targets = sample_batch(rng)
        loss, grads = mse_loss_and_grads(net, inputs, targets)
        if not np.isfinite(loss):
            raise NonFiniteLoss(
                f'{label or net.name}: loss became {loss} at step {step} (last finite loss {last}).',
                step=step, last_loss=last,
            )
        opt.step(grads)
        history.append(loss)
        last = loss
        if log_every and step % log_every == 0:
            logger.debug('%s step %d loss %.5f', label or net.name, step, loss)
    return history


def epoch_means(history, epoch_len: int) -> np.ndarray:
    h = np.asarray(history, dtype=float)
    n = len(h) // epoch_len
    if n == 0:
        return h[:1] if len(h) else h
    return h[: n * epoch_len].reshape(n, epoch_len).mean(axis=1)
