from abc import ABC, abstractmethod
import numpy as np

from errors import DimensionMismatch
from .DiffusionSchedule import DiffusionSchedule


class BaseBridge(ABC):
    """Interface for every local bridge X_i | Pa_i."""

    solver = None

    @abstractmethod
    def __init__(self, node, parents, name, schedule=None, width=1, **params):
        """Store the node, its parent indices and the training schedule."""
        self.node = int(node)
        self.parents = tuple(int(p) for p in parents)
        self.name = name
        self.schedule = schedule if schedule is not None else DiffusionSchedule()
        self.width = int(width)
        self.fitted = False

    @abstractmethod
    def drift_field(self, parent_path=None, sigma=None):
        """
        Returns f(x, t) for states x of shape (n, width), conditioned on the parent
        trajectory (states (K+1, n, n_parents)) and only on it. `sigma` selects the
        entropic level of the field; None keeps the training level.
        """
        raise NotImplementedError

    @abstractmethod
    def sample_source(self, n, rng: np.random.Generator, parent_path=None) -> np.ndarray:
        """n draws (n, width) from the source conditional."""
        raise NotImplementedError

    @abstractmethod
    def to_bundle(self):
        """(json-able metadata, {tensor name: array}) for the model store."""
        raise NotImplementedError

    def drift(self, x, t, parent_path=None, sigma=None):
        return self.drift_field(parent_path, sigma)(self.as_batch(x), t)

    def diffusion(self, sigma=None) -> DiffusionSchedule:
        return self.schedule if sigma is None else self.schedule.with_sigma(sigma)

    def as_batch(self, x) -> np.ndarray:
        """Coerce a scalar, (n,) or (n, width) state to (n, width)."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1, 1)
        elif x.ndim == 1:
            x = x[:, None] if self.width == 1 else x[None, :]
        if x.shape[1] != self.width:
            raise DimensionMismatch(f'{self.name}: state width {x.shape[1]} != {self.width}.')
        return x

    def _check_parent_path(self, parent_path, n=None):
        if not self.parents:
            return None
        if parent_path is None:
            raise DimensionMismatch(f'{self.name}: node {self.node} needs the paths of parents {self.parents}.')
        states = parent_path.states
        if states.ndim != 3 or states.shape[2] != len(self.parents):
            raise DimensionMismatch(
                f'{self.name}: parent path shape {states.shape} does not carry {len(self.parents)} parents.'
            )
        if n is not None and states.shape[1] != n:
            raise DimensionMismatch(f'{self.name}: {states.shape[1]} parent paths for {n} states.')
        return parent_path

    def __repr__(self):
        return f'{type(self).__name__}(node={self.node}, parents={self.parents}, fitted={self.fitted})'
