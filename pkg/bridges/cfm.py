import numpy as np


def cfm_training_pair(x0, x1, t, sigma, noise):
    """
    Independent conditional flow matching sample.

    x_t = (1-t) x0 + t x1 + sigma sqrt(t(1-t)) noise,   v = x1 - x0.
    `t` broadcasts against the states (a scalar, or (n, 1) for a batch).
    """
    x0 = np.asarray(x0, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    if x0.shape != x1.shape:
        raise ValueError(f'x0 {x0.shape} and x1 {x1.shape} must have the same shape.')
    t = np.asarray(t, dtype=float)
    spread = sigma * np.sqrt(np.clip(t * (1.0 - t), 0.0, None))
    x_t = (1.0 - t) * x0 + t * x1 + spread * np.asarray(noise, dtype=float)
    return x_t, x1 - x0
