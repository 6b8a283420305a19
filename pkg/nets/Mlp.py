import numpy as np

from errors import ShapeMismatch
from graph.seeding import derive_rng
from .BaseNet import BaseNet, glorot


class Mlp(BaseNet):
    """
    Fully connected tanh network, linear output layer.

    Parameters:
    - widths: layer widths [w_in, h_1, ..., w_out]; fewer than two widths is the empty net
    - seed: initialisation seed
    - zero_head: start the output layer at zero so the initial map is identically 0
    """
    def __init__(self, widths, name='Mlp', seed=0, zero_head=False, **params):
        super().__init__(name)
        self.widths = [int(w) for w in widths]
        self.seed = int(seed)
        self.zero_head = bool(zero_head)
        rng = derive_rng(self.seed, 9001)

        n_layers = max(len(self.widths) - 1, 0)
        for k in range(n_layers):
            w_in, w_out = self.widths[k], self.widths[k + 1]
            W = glorot(rng, w_in, w_out, (w_in, w_out))
            if zero_head and k == n_layers - 1:
                W = np.zeros((w_in, w_out))
            self.params += [W, np.zeros(w_out)]
            self.param_names += [f'W{k}', f'b{k}']

    @staticmethod
    def count_params(widths) -> int:
        """sum over layers of (w_in + 1) * w_out, without allocating anything."""
        widths = [int(w) for w in widths]
        return int(sum((a + 1) * b for a, b in zip(widths[:-1], widths[1:])))

    @property
    def n_layers(self) -> int:
        return len(self.params) // 2

    def _check(self, x):
        if self.widths and x.shape[-1] != self.widths[0]:
            raise ShapeMismatch(f'{self.name}: input width {x.shape[-1]} != {self.widths[0]}.')

    def _forward_memory(self, x):
        # keep every post-activation for the backward sweep
        memory = [x]
        a = x
        for k in range(self.n_layers):
            W, b = self.params[2 * k], self.params[2 * k + 1]
            z = a @ W + b
            a = z if k == self.n_layers - 1 else np.tanh(z)
            memory.append(a)
        return memory

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        return self._forward_memory(x)[-1]

    def backward(self, x, cotangent):
        x = np.asarray(x, dtype=float)
        self._check(x)
        memory = self._forward_memory(x)
        delta = np.asarray(cotangent, dtype=float)
        if delta.shape != memory[-1].shape:
            raise ShapeMismatch(f'{self.name}: cotangent shape {delta.shape} != output {memory[-1].shape}.')

        grads = [None] * len(self.params)
        for k in reversed(range(self.n_layers)):
            W = self.params[2 * k]
            a_prev = memory[k]
            if k < self.n_layers - 1:
                delta = delta * (1.0 - memory[k + 1] ** 2)   # tanh'
            grads[2 * k] = a_prev.reshape(-1, a_prev.shape[-1]).T @ delta.reshape(-1, delta.shape[-1])
            grads[2 * k + 1] = delta.reshape(-1, delta.shape[-1]).sum(axis=0)
            delta = delta @ W.T
        return grads, delta

    def spec(self) -> dict:
        return {'type': 'Mlp', 'widths': self.widths, 'seed': self.seed, 'zero_head': self.zero_head}
