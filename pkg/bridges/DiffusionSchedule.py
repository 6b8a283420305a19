from dataclasses import dataclass, replace
import numpy as np

SCHEDULE_KINDS = ('constant', 'bridge_scaled')


@dataclass(frozen=True)
class DiffusionSchedule:
    """
    Diffusion coefficient g(t) of the reference process.

    - constant:      g(t) = sigma
    - bridge_scaled: g(t) = 2 sigma sqrt(t(1-t)), zero at both ends, sigma at t = 1/2

    sigma = 0 is the deterministic ODE limit for either kind.
    """
    sigma: float = 0.0
    kind: str = 'constant'

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f'Unknown schedule {self.kind!r}; expected one of {SCHEDULE_KINDS}.')
        if not self.sigma >= 0:
            raise ValueError(f'sigma must be >= 0, got {self.sigma}.')
        object.__setattr__(self, 'sigma', float(self.sigma))

    def __call__(self, t):
        if self.kind == 'constant':
            return self.sigma if np.ndim(t) == 0 else np.full(np.shape(t), self.sigma)
        return 2.0 * self.sigma * np.sqrt(np.clip(t * (1.0 - t), 0.0, None))

    @property
    def is_deterministic(self) -> bool:
        return self.sigma == 0.0

    def total_variance(self) -> float:
        """Integral of g(t)^2 over [0, 1]."""
        if self.kind == 'constant':
            return self.sigma ** 2
        return 2.0 * self.sigma ** 2 / 3.0

    def clock(self, t):
        """Normalised variance clock s(t) = int_0^t g^2 / int_0^1 g^2 (s = t when sigma = 0)."""
        if self.kind == 'constant' or self.sigma == 0.0:
            return t
        return 3.0 * t ** 2 - 2.0 * t ** 3

    def clock_rate(self, t):
        if self.kind == 'constant' or self.sigma == 0.0:
            return 1.0
        return 6.0 * t * (1.0 - t)

    def values(self, grid) -> np.ndarray:
        return np.asarray(self(grid.times), dtype=float)

    def with_sigma(self, sigma: float) -> 'DiffusionSchedule':
        return replace(self, sigma=float(sigma))
