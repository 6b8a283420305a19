import numpy as np


class MomentumSGD:
    """Heavy-ball SGD: v <- mu v - lr g ; p <- p + v (in place)."""
    def __init__(self, params, lr=1e-3, momentum=0.9):
        self.params = params
        self.lr = float(lr)
        self.momentum = float(momentum)
        self.velocity = [np.zeros_like(p) for p in params]

    def step(self, grads):
        for p, v, g in zip(self.params, self.velocity, grads):
            v *= self.momentum
            v -= self.lr * g
            p += v
