from dataclasses import dataclass, asdict, fields
import json

from errors import ConfigError
from .DiffusionSchedule import SCHEDULE_KINDS

SOLVERS = ('auto', 'gaussian', 'neural')
COUPLINGS = ('rows', 'shuffle')


@dataclass(frozen=True)
class TrainConfig:
    """
    Hyperparameters shared by every local bridge.

    Parameters:
    - steps, batch, lr, momentum: momentum-SGD budget for neural drifts
    - sigma, schedule: entropic level and g(t) kind used while training
    - seed: master seed; each node trains with a seed derived from it
    - hidden: hidden widths of the conditional drift network
    - solver: auto picks the closed form for linear-Gaussian conditionals
    - coupling: rows pairs data0[k] with data1[k]; shuffle permutes the source rows first
    - path_steps: grid of the parent paths a neural child conditions on
    - path_rows: rows abducted per chunk when those paths are built
    - jobs: worker processes per topological layer
    - log_every: debug log period of the training loss (0 = silent)
    """
    steps: int = 2000
    batch: int = 256
    lr: float = 1e-3
    momentum: float = 0.9
    sigma: float = 0.0
    schedule: str = 'constant'
    seed: int = 42
    hidden: tuple = (64, 64)
    solver: str = 'auto'
    coupling: str = 'rows'
    path_steps: int = 20
    path_rows: int = 2048
    jobs: int = 1
    log_every: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'hidden', tuple(int(h) for h in self.hidden))
        if self.solver not in SOLVERS:
            raise ConfigError(f'solver must be one of {SOLVERS}, got {self.solver!r}.')
        if self.schedule not in SCHEDULE_KINDS:
            raise ConfigError(f'schedule must be one of {SCHEDULE_KINDS}, got {self.schedule!r}.')
        if self.coupling not in COUPLINGS:
            raise ConfigError(f'coupling must be one of {COUPLINGS}, got {self.coupling!r}.')
        if self.steps < 0 or self.batch < 1 or self.lr <= 0:
            raise ConfigError('steps must be >= 0, batch >= 1 and lr > 0.')
        if self.sigma < 0:
            raise ConfigError(f'sigma must be >= 0, got {self.sigma}.')
        if self.path_steps < 1 or self.path_rows < 1 or self.jobs == 0:
            raise ConfigError('path_steps, path_rows must be >= 1 and jobs != 0.')

    @classmethod
    def from_dict(cls, values: dict) -> 'TrainConfig':
        values = dict(values)
        # 'epochs' is accepted as an alias of 'steps'
        if 'epochs' in values:
            values.setdefault('steps', values.pop('epochs'))
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f'Unknown training config keys: {unknown}.')
        return cls(**values)

    @classmethod
    def from_json(cls, path) -> 'TrainConfig':
        try:
            with open(path) as f:
                return cls.from_dict(json.load(f))
        except json.JSONDecodeError as exc:
            raise ConfigError(f'{path}: {exc}') from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d['hidden'] = list(self.hidden)
        return d

    def replace(self, **changes) -> 'TrainConfig':
        return TrainConfig.from_dict({**self.to_dict(), **changes})
