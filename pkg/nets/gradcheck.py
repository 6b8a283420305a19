import numpy as np

from .BaseNet import BaseNet


def _half_sq_loss(net, x, target):
    return 0.5 * float(np.sum((net.forward(x) - target) ** 2))


def finite_difference_check(net: BaseNet, x, target, h: float = 1e-4, floor: float = 1e-7) -> np.ndarray:
    """
    Entrywise relative error between backward() and central differences for the
    loss 0.5 * ||net(x) - target||^2. `floor` guards entries that are both ~0.
    """
    out = net.forward(x)
    analytic, _ = net.backward(x, out - target)
    analytic = np.concatenate([g.ravel() for g in analytic]) if analytic else np.zeros(0)

    flat = net.get_flat()
    numeric = np.zeros_like(flat)
    for j in range(flat.size):
        orig = flat[j]
        flat[j] = orig + h
        net.set_flat(flat)
        up = _half_sq_loss(net, x, target)
        flat[j] = orig - h
        net.set_flat(flat)
        down = _half_sq_loss(net, x, target)
        flat[j] = orig
        numeric[j] = (up - down) / (2 * h)
    net.set_flat(flat)

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / denom


def output_input_gradient(net: BaseNet, x, position: int) -> np.ndarray:
    """Exact gradient of sum over the batch of output[:, position] w.r.t. every input entry."""
    out = net.forward(x)
    cot = np.zeros_like(out)
    cot[..., position] = 1.0
    _, dx = net.backward(x, cot)
    return dx
