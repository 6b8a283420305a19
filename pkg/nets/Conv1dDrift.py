import numpy as np

from errors import ShapeMismatch
from graph.seeding import derive_rng
from .BaseNet import BaseNet, glorot


class Conv1dDrift(BaseNet):
    """
    Weight-shared causal 1-D convolution drift.

    Output position i reads input positions i-L..i only: the first layer is a
    width-(L+1) convolution over left-zero-padded inputs, every later layer and
    the head are pointwise. The parameter count does not depend on the sequence
    length d.

    Input: (n, C, d) or (n, d) when C == 1. Output: (n, d) for one output channel,
    else (n, out_channels, d).

    The default (C=1, L=1, hidden=(80, 120)) holds 10,081 parameters, a reconstructed
    ~10k footprint that stays three orders of magnitude below a 512-wide global MLP
    at d = 10^4.
    """
    def __init__(
        self,
        in_channels=1,
        left_context=1,
        hidden=(80, 120),
        out_channels=1,
        name='Conv1dDrift',
        seed=0,
        zero_head=False,
        **params
    ):
        super().__init__(name)
        self.in_channels = int(in_channels)
        self.left_context = int(left_context)
        self.hidden = [int(h) for h in hidden]
        self.out_channels = int(out_channels)
        self.seed = int(seed)
        self.zero_head = bool(zero_head)
        if self.left_context < 0 or not self.hidden:
            raise ValueError('left_context must be >= 0 and at least one hidden layer is required.')

        rng = derive_rng(self.seed, 9002)
        k = self.left_context + 1
        fan_in = self.in_channels * k
        # first layer stored flattened over (channel, lag)
        self.params += [glorot(rng, fan_in, self.hidden[0], (self.hidden[0], fan_in)), np.zeros(self.hidden[0])]
        self.param_names += ['W0', 'b0']
        for j in range(1, len(self.hidden)):
            h_in, h_out = self.hidden[j - 1], self.hidden[j]
            self.params += [glorot(rng, h_in, h_out, (h_out, h_in)), np.zeros(h_out)]
            self.param_names += [f'W{j}', f'b{j}']
        head = glorot(rng, self.hidden[-1], self.out_channels, (self.out_channels, self.hidden[-1]))
        if self.zero_head:
            head = np.zeros_like(head)
        self.params += [head, np.zeros(self.out_channels)]
        self.param_names += ['W_head', 'b_head']

    @staticmethod
    def count_params(in_channels=1, left_context=1, hidden=(80, 120), out_channels=1) -> int:
        widths = [in_channels * (left_context + 1)] + list(hidden) + [out_channels]
        return int(sum((a + 1) * b for a, b in zip(widths[:-1], widths[1:])))

    def _as_channels(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 2 and self.in_channels == 1:
            x = x[:, None, :]
        if x.ndim != 3 or x.shape[1] != self.in_channels:
            raise ShapeMismatch(f'{self.name}: expected (n, {self.in_channels}, d) input, got {x.shape}.')
        return x

    def _windows(self, x):
        # windows[:, c*K + k, i] = x[:, c, i - k], zero for i - k < 0
        n, C, d = x.shape
        K = self.left_context + 1
        win = np.zeros((n, C, K, d))
        for k in range(K):
            if k == 0:
                win[:, :, 0, :] = x
            elif k < d:
                win[:, :, k, k:] = x[:, :, :d - k]
        return win.reshape(n, C * K, d)

    def _unwindow(self, dwin, shape):
        n, C, d = shape
        K = self.left_context + 1
        dwin = dwin.reshape(n, C, K, d)
        dx = np.zeros(shape)
        for k in range(K):
            if k == 0:
                dx += dwin[:, :, 0, :]
            elif k < d:
                dx[:, :, :d - k] += dwin[:, :, k, k:]
        return dx

    def _forward_memory(self, x):
        memory = [self._windows(x)]
        a = memory[0]
        n_layers = len(self.params) // 2
        for j in range(n_layers):
            W, b = self.params[2 * j], self.params[2 * j + 1]
            z = np.matmul(W, a) + b[None, :, None]
            a = z if j == n_layers - 1 else np.tanh(z)
            memory.append(a)
        return memory

    def _squeeze(self, out):
        return out[:, 0, :] if self.out_channels == 1 else out

    def forward(self, x):
        x = self._as_channels(x)
        return self._squeeze(self._forward_memory(x)[-1])

    def backward(self, x, cotangent):
        flat_input = np.ndim(x) == 2
        x = self._as_channels(x)
        memory = self._forward_memory(x)
        delta = np.asarray(cotangent, dtype=float)
        if self.out_channels == 1 and delta.ndim == 2:
            delta = delta[:, None, :]
        if delta.shape != memory[-1].shape:
            raise ShapeMismatch(f'{self.name}: cotangent shape {delta.shape} != output {memory[-1].shape}.')

        n_layers = len(self.params) // 2
        grads = [None] * len(self.params)
        for j in reversed(range(n_layers)):
            W = self.params[2 * j]
            if j < n_layers - 1:
                delta = delta * (1.0 - memory[j + 1] ** 2)
            grads[2 * j] = np.tensordot(delta, memory[j], axes=([0, 2], [0, 2]))
            grads[2 * j + 1] = delta.sum(axis=(0, 2))
            delta = np.matmul(W.T, delta)

        dx = self._unwindow(delta, x.shape)
        if flat_input:
            dx = dx[:, 0, :]
        return grads, dx

    def spec(self) -> dict:
        return {
            'type': 'Conv1dDrift',
            'in_channels': self.in_channels,
            'left_context': self.left_context,
            'hidden': self.hidden,
            'out_channels': self.out_channels,
            'seed': self.seed,
            'zero_head': self.zero_head,
        }
