import logging
import numpy as np
from scipy import linalg, optimize

from errors import DimensionMismatch, UnfittedModel
from sde.grid import TimeGrid
from sde.integrate import integrate_ode
from .NeuralLocalBridge import NeuralLocalBridge
from .config import TrainConfig

logger = logging.getLogger(__name__)


class JointBridge:
    """
    Structure-blind transport over all coordinates at once (sigma = 0), the
    baseline every structured model is compared against.

    - gaussian: Monge map between the fitted joint Gaussians,
                x -> m1 + A (x - m0) with A = S0^-1/2 (S0^1/2 S1 S0^1/2)^1/2 S0^-1/2
    - neural:   one conditional flow matching drift on the full state, conditioned on nothing

    A counterfactual abducts the joint latent, edits the latent coordinates of the
    intervened columns until the regenerated state hits the do-values, keeps every
    other latent coordinate and regenerates.
    """
    def __init__(self, solver='gaussian', cfg: TrainConfig = None, name='JointBridge'):
        if solver not in ('gaussian', 'neural'):
            raise ValueError(f'solver must be gaussian or neural, got {solver!r}.')
        self.solver = solver
        self.cfg = cfg if cfg is not None else TrainConfig()
        self.name = name
        self.d = None
        self.fitted = False

    def fit(self, data0, data1, seed: int = 0) -> 'JointBridge':
        x0, x1 = data0.samples, data1.samples
        if x0.shape[1] != x1.shape[1]:
            raise DimensionMismatch(f'{self.name}: {x0.shape[1]} source vs {x1.shape[1]} target columns.')
        self.d = x0.shape[1]

        if self.solver == 'gaussian':
            self.m0, self.m1 = x0.mean(axis=0), x1.mean(axis=0)
            s0 = np.atleast_2d(np.cov(x0, rowvar=False))
            s1 = np.atleast_2d(np.cov(x1, rowvar=False))
            root0 = linalg.sqrtm(s0).real
            inv_root0 = np.linalg.inv(root0)
            self.A = inv_root0 @ linalg.sqrtm(root0 @ s1 @ root0).real @ inv_root0
            self.A = 0.5 * (self.A + self.A.T)
        else:
            self.net_bridge = NeuralLocalBridge(0, (), name=self.name, width=self.d,
                                                hidden=self.cfg.hidden, seed=seed)
            self.net_bridge.train(x0, x1, None, self.cfg.replace(sigma=0.0), seed=seed)
        self.fitted = True
        logger.debug('%s: fitted %s joint transport over %d coordinates', self.name, self.solver, self.d)
        return self

    def drift(self, x, t):
        if self.solver == 'neural':
            return self.net_bridge.drift_field()(x, t)
        eye = np.eye(self.d)
        m_t = (1.0 - t) * self.m0 + t * self.m1
        gain = (self.A - eye) @ np.linalg.inv((1.0 - t) * eye + t * self.A)
        return (self.m1 - self.m0) + (x - m_t) @ gain.T

    def _check(self, x):
        if not self.fitted:
            raise UnfittedModel(f'{self.name} is not fitted.')
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.d:
            raise DimensionMismatch(f'{self.name}: state width {x.shape[1]} != {self.d}.')
        return x

    def transport(self, x0, grid: TimeGrid = None) -> np.ndarray:
        grid = grid if grid is not None else TimeGrid()
        return integrate_ode(self.drift, self._check(x0), grid).final

    def abduct(self, x1, grid: TimeGrid = None) -> np.ndarray:
        grid = grid if grid is not None else TimeGrid()
        reverse = lambda x, t: -self.drift(x, t)
        return integrate_ode(reverse, self._check(x1), grid, direction='backward').final

    def counterfactual(self, x_fact, assignments: dict, grid: TimeGrid = None) -> np.ndarray:
        """
        Parameters:
        - x_fact: (n, d) factual states
        - assignments: {column index: do-value}
        """
        grid = grid if grid is not None else TimeGrid()
        x_fact = self._check(x_fact)
        latent = self.abduct(x_fact, grid)
        if not assignments:
            return self.transport(latent, grid)

        cols = sorted(int(c) for c in assignments)
        if cols[0] < 0 or cols[-1] >= self.d:
            raise DimensionMismatch(f'{self.name}: do-column outside [0, {self.d}).')
        values = np.array([float(assignments[c]) for c in cols])

        edited = latent.copy()
        for row in range(latent.shape[0]):
            u = latent[row].copy()

            def residual(z):
                u[cols] = z
                return self.transport(u[None, :], grid)[0, cols] - values

            sol = optimize.root(residual, latent[row, cols], method='hybr')
            if not sol.success:
                logger.warning('%s: latent edit for row %d did not converge (%s)', self.name, row, sol.message)
            edited[row, cols] = sol.x
        out = self.transport(edited, grid)
        # the intervened coordinates are reported at their do-values exactly
        out[:, cols] = values
        return out
