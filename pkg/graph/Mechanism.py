from dataclasses import dataclass
import numpy as np

from errors import DimensionMismatch, NonPositiveStd

KINDS = ('linear', 'sin_tanh_chain', 'constant', 'custom_table')


@dataclass(frozen=True)
class Mechanism:
    """
    Structural assignment x_i := h(parents) + noise_std * eps with Gaussian eps.

    - linear:         coefficients = (w_1, ..., w_p, intercept)
    - sin_tanh_chain: coefficients = (a, b); x = a*sin(parent_0) + b*tanh(parent_1),
                      a missing left neighbour (parent_1) is read as 0
    - constant:       coefficients = (value,), no noise (a do-value)
    - custom_table:   nearest-grid lookup of coefficients over `grid` on the single parent
    """
    kind: str
    coefficients: tuple = ()
    noise_std: float = 0.0
    grid: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f'Unknown mechanism kind {self.kind!r}; expected one of {KINDS}.')
        object.__setattr__(self, 'coefficients', tuple(float(c) for c in self.coefficients))
        object.__setattr__(self, 'grid', tuple(float(g) for g in self.grid))
        object.__setattr__(self, 'noise_std', float(self.noise_std))
        if self.noise_std < 0:
            raise NonPositiveStd(f'noise_std must be >= 0, got {self.noise_std}.')
        if self.kind == 'constant':
            if len(self.coefficients) != 1:
                raise DimensionMismatch('constant mechanism takes exactly one coefficient (the do-value).')
            if self.noise_std != 0.0:
                raise ValueError('constant mechanism must have zero noise_std.')
        if self.kind == 'sin_tanh_chain' and len(self.coefficients) != 2:
            raise DimensionMismatch('sin_tanh_chain takes coefficients (a, b).')
        if self.kind == 'custom_table':
            if len(self.grid) == 0 or len(self.grid) != len(self.coefficients):
                raise DimensionMismatch('custom_table needs one value per grid point.')
            if any(np.diff(self.grid) <= 0):
                raise ValueError('custom_table grid must be strictly increasing.')

    @classmethod
    def constant(cls, value: float) -> 'Mechanism':
        return cls('constant', (float(value),), 0.0)

    @property
    def is_linear_gaussian(self) -> bool:
        return self.kind in ('linear', 'constant')

    def check_arity(self, n_parents: int):
        """Raise DimensionMismatch when the mechanism cannot take `n_parents` inputs."""
        if self.kind == 'linear' and len(self.coefficients) != n_parents + 1:
            raise DimensionMismatch(
                f'linear mechanism has {len(self.coefficients)} coefficients for {n_parents} parents '
                f'(expected {n_parents + 1}).'
            )
        if self.kind == 'constant' and n_parents != 0:
            raise DimensionMismatch('constant mechanism cannot have parents.')
        if self.kind == 'sin_tanh_chain' and n_parents not in (1, 2):
            raise DimensionMismatch('sin_tanh_chain reads (self, left neighbour) parents.')
        if self.kind == 'custom_table' and n_parents != 1:
            raise DimensionMismatch('custom_table reads exactly one parent.')

    def evaluate(self, parents: np.ndarray, noise: np.ndarray) -> np.ndarray:
        """parents: (n, p) parent values; noise: (n,) standard normal draws."""
        parents = np.asarray(parents, dtype=float)
        n = noise.shape[0]
        coef = np.asarray(self.coefficients)

        if self.kind == 'constant':
            return np.full(n, coef[0])
        if self.kind == 'linear':
            base = parents @ coef[:-1] + coef[-1] if parents.shape[1] else np.full(n, coef[-1])
        elif self.kind == 'sin_tanh_chain':
            left = parents[:, 1] if parents.shape[1] > 1 else np.zeros(n)
            base = coef[0] * np.sin(parents[:, 0]) + coef[1] * np.tanh(left)
        else:
            grid = np.asarray(self.grid)
            x = parents[:, 0]
            idx = np.clip(np.searchsorted(grid, x), 1, len(grid) - 1) if len(grid) > 1 else np.zeros(n, int)
            if len(grid) > 1:
                idx = np.where(np.abs(x - grid[idx - 1]) <= np.abs(grid[idx] - x), idx - 1, idx)
            base = coef[idx]
        return base + self.noise_std * noise

    def to_dict(self) -> dict:
        out = {'kind': self.kind, 'coefficients': list(self.coefficients), 'noise_std': self.noise_std}
        if self.grid:
            out['grid'] = list(self.grid)
        return out

    @classmethod
    def from_dict(cls, spec: dict) -> 'Mechanism':
        return cls(
            kind=spec['kind'],
            coefficients=tuple(spec.get('coefficients', ())),
            noise_std=spec.get('noise_std', 0.0),
            grid=tuple(spec.get('grid', ())),
        )
