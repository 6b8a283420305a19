from abc import ABC, abstractmethod
import numpy as np


class BaseNet(ABC):
    """Interface for hand-rolled nets with exact gradients."""

    @abstractmethod
    def __init__(self, name, **params):
        self.name = name
        self.params = []
        self.param_names = []

    @abstractmethod
    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def backward(self, x: np.ndarray, cotangent: np.ndarray):
        """
        Returns (param_grads, input_grad): gradients of <cotangent, forward(x)>
        with respect to every entry of self.params and to x.
        """
        raise NotImplementedError

    @abstractmethod
    def spec(self) -> dict:
        """Constructor arguments needed to rebuild the net."""
        raise NotImplementedError

    def param_count(self) -> int:
        return int(sum(p.size for p in self.params))

    def state(self) -> dict:
        return {name: p for name, p in zip(self.param_names, self.params)}

    def load_state(self, state: dict):
        for name, p in zip(self.param_names, self.params):
            p[...] = np.asarray(state[name], dtype=float).reshape(p.shape)

    def get_flat(self) -> np.ndarray:
        if not self.params:
            return np.zeros(0)
        return np.concatenate([p.ravel() for p in self.params])

    def set_flat(self, flat: np.ndarray):
        offset = 0
        for p in self.params:
            p[...] = flat[offset: offset + p.size].reshape(p.shape)
            offset += p.size


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape) -> np.ndarray:
    return rng.standard_normal(shape) * np.sqrt(2.0 / (fan_in + fan_out))


def param_count(net) -> int:
    return 0 if net is None else net.param_count()
