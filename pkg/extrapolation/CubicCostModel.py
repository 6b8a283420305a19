from dataclasses import dataclass, asdict
import logging
import time
import numpy as np

from errors import SingularMatrix
from graph.seeding import derive_rng
from .elimination import gauss_jordan_inverse

logger = logging.getLogger(__name__)

SECONDS_PER_YEAR = 365 * 24 * 3600
HESSIAN_FACTOR = 10


@dataclass(frozen=True)
class CubicCostModel:
    """
    T(d) = t_ref * (d / d_ref)^3 * iterations, the cost of a dense O(d^3) solver that
    repeats one core operation (a matrix inversion) `iterations` times.
    """
    t_ref: float
    d_ref: int
    iterations: int = 100

    def __post_init__(self):
        if not self.t_ref > 0:
            raise ValueError(f't_ref must be > 0, got {self.t_ref}.')
        if self.d_ref < 2:
            raise ValueError(f'd_ref must be >= 2, got {self.d_ref}.')
        if self.iterations < 1:
            raise ValueError(f'iterations must be >= 1, got {self.iterations}.')

    def to_dict(self) -> dict:
        return asdict(self)


def extrapolate(model: CubicCostModel, d: int) -> float:
    if d < model.d_ref:
        raise ValueError(f'd={d} is below the calibration dimension {model.d_ref}.')
    return model.t_ref * (d / model.d_ref) ** 3 * model.iterations


def memory_wall_estimate(d: int, bytes_per_entry: int = 4, factor: float = 1) -> float:
    """Bytes for a dense d x d matrix; factor=HESSIAN_FACTOR for second-order solvers."""
    if d < 1:
        raise ValueError(f'd must be >= 1, got {d}.')
    return float(d) ** 2 * bytes_per_entry * factor


def human_duration(seconds: float) -> str:
    for unit, size in (('years', SECONDS_PER_YEAR), ('days', 86400), ('hours', 3600), ('minutes', 60)):
        if seconds >= size:
            return f'{seconds / size:.2f} {unit}'
    return f'{seconds:.3g} seconds'


def human_bytes(n: float) -> str:
    for unit, size in (('TB', 1e12), ('GB', 1e9), ('MB', 1e6), ('KB', 1e3)):
        if n >= size:
            return f'{n / size:.1f} {unit}'
    return f'{n:.0f} B'


def _timed_inverse(a: np.ndarray) -> float:
    t0 = time.perf_counter()
    gauss_jordan_inverse(a)
    return time.perf_counter() - t0


def calibrate(d_ref: int = 50, trials: int = 20, seed: int = 42, iterations: int = 100,
              warmup: int = 1, max_retries: int = 5) -> CubicCostModel:
    """
    Median wall time of `trials` dense d_ref x d_ref inversions (after `warmup`
    discarded runs). A singular draw is replaced by a fresh matrix, at most
    `max_retries` times.
    """
    if d_ref > 512:
        raise ValueError(f'd_ref={d_ref} is too large to time densely (max 512).')
    for attempt in range(max_retries):
        a = derive_rng(seed + attempt, d_ref).standard_normal((d_ref, d_ref))
        try:
            inv = gauss_jordan_inverse(a)
            err = np.max(np.abs(inv @ a - np.eye(d_ref)))
            if err > 1e-8:
                raise SingularMatrix(f'inverse check failed (|A^-1 A - I| = {err:.2e}).')
            for _ in range(warmup):
                _timed_inverse(a)
            times = [_timed_inverse(a) for _ in range(trials)]
        except SingularMatrix as exc:
            logger.warning('calibration matrix %d rejected: %s', attempt, exc)
            continue
        t_ref = float(np.median(times))
        logger.info('calibrated t_ref=%.6fs at d_ref=%d over %d trials', t_ref, d_ref, trials)
        return CubicCostModel(t_ref, d_ref, iterations)
    raise SingularMatrix(f'no invertible calibration matrix after {max_retries} attempts.')


def extrapolation_table(model: CubicCostModel, dims) -> list:
    return [
        {'d': int(d), 'seconds': extrapolate(model, d), 'human': human_duration(extrapolate(model, d)),
         'memory_bytes': memory_wall_estimate(d), 'memory_human': human_bytes(memory_wall_estimate(d))}
        for d in dims
    ]
