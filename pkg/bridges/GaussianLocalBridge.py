import logging
import numpy as np

from errors import NonPositiveStd, DimensionMismatch
from .BaseBridge import BaseBridge
from .GaussianBridge import GaussianBridge

logger = logging.getLogger(__name__)


def linear_fit(y: np.ndarray, parents: np.ndarray):
    """
    Least squares y ~ intercept + parents @ beta.
    Returns (intercept, beta, residual std).
    """
    n = y.shape[0]
    design = np.column_stack([np.ones(n), parents]) if parents.size else np.ones((n, 1))
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    dof = max(n - design.shape[1], 1)
    return float(coef[0]), coef[1:].astype(float), float(np.sqrt(resid @ resid / dof))


class GaussianLocalBridge(BaseBridge):
    """
    Training-free local bridge for linear-Gaussian conditionals.

    Source and target conditionals are N(a0 + pa(0) @ b0, s0^2) and
    N(a1 + pa(1) @ b1, s1^2), estimated by least squares. Given a parent path the
    node follows the closed-form GaussianBridge between them, so the field can be
    re-solved at any entropic level.
    """
    solver = 'gaussian'

    def __init__(self, node, parents, name='GaussianLocalBridge', schedule=None, **params):
        super().__init__(node, parents, name, schedule=schedule, width=1)
        self.source = None   # (intercept, beta, std)
        self.target = None

    def fit(self, x0, pa0, x1, pa1) -> 'GaussianLocalBridge':
        x0 = np.asarray(x0, dtype=float).reshape(-1)
        x1 = np.asarray(x1, dtype=float).reshape(-1)
        pa0 = np.asarray(pa0, dtype=float).reshape(x0.shape[0], -1)
        pa1 = np.asarray(pa1, dtype=float).reshape(x1.shape[0], -1)
        if pa0.shape[1] != len(self.parents) or pa1.shape[1] != len(self.parents):
            raise DimensionMismatch(f'{self.name}: expected {len(self.parents)} parent columns.')

        self.source = linear_fit(x0, pa0)
        self.target = linear_fit(x1, pa1)
        if self.source[2] <= 0 or self.target[2] <= 0:
            raise NonPositiveStd(
                f'{self.name}: node {self.node} has a degenerate conditional '
                f'(s0={self.source[2]:.3g}, s1={self.target[2]:.3g}).'
            )
        self.fitted = True
        logger.debug('node %d gaussian: s0=%.4f s1=%.4f', self.node, self.source[2], self.target[2])
        return self

    @classmethod
    def from_params(cls, node, parents, source, target, schedule=None) -> 'GaussianLocalBridge':
        bridge = cls(node, parents, schedule=schedule)
        bridge.source = (float(source[0]), np.asarray(source[1], dtype=float), float(source[2]))
        bridge.target = (float(target[0]), np.asarray(target[1], dtype=float), float(target[2]))
        if bridge.source[2] <= 0 or bridge.target[2] <= 0:
            raise NonPositiveStd('conditional stds must be > 0.')
        bridge.fitted = True
        return bridge

    @staticmethod
    def _mean(params, pa):
        intercept, beta, _ = params
        if pa is None:
            return np.asarray(intercept)
        return (intercept + pa @ beta)[:, None]

    def conditional(self, parent_path=None, sigma=None, cross_cov=None) -> GaussianBridge:
        """
        The per-sample GaussianBridge given a parent path. The source mean reads the
        parents at t = 0, the target mean reads them at t = 1.
        """
        path = self._check_parent_path(parent_path)
        pa0 = None if path is None else path.start
        pa1 = None if path is None else path.end
        sched = self.diffusion(sigma)
        return GaussianBridge(
            self._mean(self.source, pa0), self.source[2],
            self._mean(self.target, pa1), self.target[2],
            sigma=sched.sigma, kind=sched.kind, cross_cov=cross_cov,
        )

    def drift_field(self, parent_path=None, sigma=None, cross_cov=None):
        bridge = self.conditional(parent_path, sigma, cross_cov)
        return bridge.drift

    def sample_source(self, n, rng, parent_path=None):
        path = self._check_parent_path(parent_path, n)
        mean = self._mean(self.source, None if path is None else path.start)
        return np.broadcast_to(mean, (n, 1)) + self.source[2] * rng.standard_normal((n, 1))

    def to_bundle(self):
        meta = {
            'solver': self.solver,
            'node': self.node,
            'parents': list(self.parents),
            'source': [self.source[0], self.source[2]],
            'target': [self.target[0], self.target[2]],
        }
        arrays = {'beta0': self.source[1], 'beta1': self.target[1]}
        return meta, arrays

    @classmethod
    def from_bundle(cls, meta, arrays, schedule=None) -> 'GaussianLocalBridge':
        a0, s0 = meta['source']
        a1, s1 = meta['target']
        p = len(meta['parents'])
        return cls.from_params(
            meta['node'], meta['parents'],
            (a0, np.asarray(arrays['beta0']).reshape(p), s0),
            (a1, np.asarray(arrays['beta1']).reshape(p), s1),
            schedule=schedule,
        )
