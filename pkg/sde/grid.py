from dataclasses import dataclass
import numpy as np
import pandas as pd


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < ... < t_N = 1."""
    n_steps: int = 200

    def __post_init__(self):
        if int(self.n_steps) < 1:
            raise ValueError(f'n_steps must be >= 1, got {self.n_steps}.')
        object.__setattr__(self, 'n_steps', int(self.n_steps))

    @property
    def dt(self) -> float:
        return 1.0 / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_steps + 1)

    def index(self, t: float) -> int:
        return int(np.clip(np.rint(t * self.n_steps), 0, self.n_steps))


class Trajectory:
    """
    Time-discretised path. `states[k]` is the state after k integration steps, so a
    backward trajectory starts at t=1 and ends at t=0. A state is (dim,) or (n, dim).
    """
    def __init__(self, states, grid: TimeGrid, sigma_used: float = 0.0, direction: str = 'forward'):
        if direction not in ('forward', 'backward'):
            raise ValueError(f'direction must be forward or backward, got {direction!r}.')
        states = np.asarray(states, dtype=float)
        if states.shape[0] != grid.n_steps + 1:
            raise ValueError(f'{states.shape[0]} states for a {grid.n_steps}-step grid.')
        if not np.all(np.isfinite(states)):
            raise ValueError('Trajectory states must be finite.')
        self.states = states
        self.grid = grid
        self.sigma_used = float(sigma_used)
        self.direction = direction

    @classmethod
    def constant(cls, value, grid: TimeGrid) -> 'Trajectory':
        value = np.asarray(value, dtype=float)
        return cls(np.broadcast_to(value, (grid.n_steps + 1,) + value.shape).copy(), grid)

    @property
    def times(self) -> np.ndarray:
        t = self.grid.times
        return t if self.direction == 'forward' else t[::-1]

    def _row(self, t: float) -> int:
        k = self.grid.index(t)
        return k if self.direction == 'forward' else self.grid.n_steps - k

    def at(self, t: float) -> np.ndarray:
        """State at the grid time nearest to t."""
        return self.states[self._row(t)]

    @property
    def start(self) -> np.ndarray:
        """State at t = 0."""
        return self.at(0.0)

    @property
    def end(self) -> np.ndarray:
        """State at t = 1."""
        return self.at(1.0)

    @property
    def final(self) -> np.ndarray:
        """Last integrated state (t=1 forward, t=0 backward)."""
        return self.states[-1]

    def forward_states(self) -> np.ndarray:
        return self.states if self.direction == 'forward' else self.states[::-1]

    def select(self, columns) -> 'Trajectory':
        return Trajectory(self.states[..., list(columns)], self.grid, self.sigma_used, self.direction)

    def rows(self, index) -> 'Trajectory':
        """Sub-batch of a (K+1, n, dim) path."""
        return Trajectory(self.states[:, index], self.grid, self.sigma_used, self.direction)

    def to_frame(self, sample: int = 0, names=None) -> pd.DataFrame:
        """Columns t, x_0..x_{d-1} in ascending time for one sample of a batch."""
        states = self.forward_states()
        if states.ndim == 3:
            states = states[:, sample, :]
        elif states.ndim == 1:
            states = states[:, None]
        names = names or [f'x_{j}' for j in range(states.shape[1])]
        frame = pd.DataFrame(states, columns=list(names))
        frame.insert(0, 't', self.grid.times)
        return frame


def stack_paths(paths) -> Trajectory:
    """Forward trajectory whose last axis concatenates the given (K+1, n, w_j) paths."""
    paths = list(paths)
    if not paths:
        raise ValueError('stack_paths needs at least one path.')
    grid = paths[0].grid
    if any(p.grid != grid for p in paths):
        raise ValueError('paths live on different grids.')
    states = [p.forward_states() for p in paths]
    states = [s[..., None] if s.ndim == 2 else s for s in states]
    return Trajectory(np.concatenate(states, axis=-1), grid, max(p.sigma_used for p in paths))
