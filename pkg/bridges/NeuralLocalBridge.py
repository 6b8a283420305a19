import logging
import numpy as np

from errors import DimensionMismatch
from graph.seeding import TRAIN_STREAM, derive_rng
from nets import Mlp, fit_net, mse_loss_and_grads
from .BaseBridge import BaseBridge
from .cfm import cfm_training_pair
from .config import TrainConfig

logger = logging.getLogger(__name__)

HELDOUT_BATCH = 1024
SOURCE_POOL = 4096


class NeuralLocalBridge(BaseBridge):
    """
    Local bridge whose drift is a tanh MLP on [x_i(t), Pa_i(t), t], trained by
    independent conditional flow matching. The output head starts at zero, so an
    untrained bridge is the identity transport.

    Generation integrates the learned velocity plus sigma dW without a score
    correction.
    """
    solver = 'neural'

    def __init__(self, node, parents, name='NeuralLocalBridge', schedule=None, width=1,
                 hidden=(64, 64), seed=0, **params):
        super().__init__(node, parents, name, schedule=schedule, width=width)
        self.hidden = tuple(int(h) for h in hidden)
        self.net = Mlp([self.width + len(self.parents) + 1, *self.hidden, self.width],
                       name=f'{name}[{node}]', seed=seed, zero_head=True)
        self.source_pool = None
        self.loss_history = []
        self.heldout_loss = (None, None)

    def _inputs(self, x, pa, t):
        n = x.shape[0]
        parts = [x]
        if self.parents:
            parts.append(pa)
        parts.append(np.broadcast_to(np.asarray(t, dtype=float).reshape(-1, 1), (n, 1)))
        return np.concatenate(parts, axis=1)

    def drift_field(self, parent_path=None, sigma=None):
        path = self._check_parent_path(parent_path)
        net = self.net

        def field(x, t):
            pa = path.at(t) if path is not None else None
            return net.forward(self._inputs(x, pa, t))
        return field

    def sample_source(self, n, rng, parent_path=None):
        self._check_parent_path(parent_path, n)
        if self.source_pool is None:
            return rng.standard_normal((n, self.width))
        return self.source_pool[rng.integers(0, self.source_pool.shape[0], n)]

    def train(self, x0, x1, parent_states=None, cfg=None, seed=0) -> list:
        """
        Fit the velocity field on paired rows (x0[k], x1[k]).

        Parameters:
        - x0, x1: (n, width) source and target rows, paired row by row
        - parent_states: (K+1, n, n_parents) parent path of every target row on a uniform grid
        - cfg: TrainConfig (steps, batch, lr, momentum, sigma, coupling)

        Every batch draws fresh rows, each with its own parent path.
        """
        cfg = cfg if cfg is not None else TrainConfig()
        x0 = np.asarray(x0, dtype=float).reshape(-1, self.width)
        x1 = np.asarray(x1, dtype=float).reshape(-1, self.width)
        rng = derive_rng(seed, TRAIN_STREAM)

        # 1. Align rows: one parent path per target row
        n = x1.shape[0]
        if self.parents:
            if parent_states is None or parent_states.ndim != 3 or parent_states.shape[2] != len(self.parents):
                raise DimensionMismatch(f'{self.name}: node {self.node} needs parent paths for {self.parents}.')
            if parent_states.shape[1] != n:
                raise DimensionMismatch(
                    f'{self.name}: {parent_states.shape[1]} parent paths for {n} target rows.')
        if x0.shape[0] < n:
            raise DimensionMismatch(f'{self.name}: {x0.shape[0]} source rows for {n} target rows.')
        source = x0[rng.permutation(x0.shape[0])] if cfg.coupling == 'shuffle' else x0
        source, target = source[:n], x1[:n]
        self.source_pool = x0[:SOURCE_POOL].copy()

        # 2. Hold out the tail rows for a before/after velocity loss
        n_held = n // 10 if n >= 20 else 0
        n_train = n - n_held
        K = parent_states.shape[0] - 1 if self.parents else 0
        sigma = cfg.sigma

        def pairs(rows, t, noise):
            x_t, v = cfm_training_pair(source[rows], target[rows], t, sigma, noise)
            pa = parent_states[np.rint(t[:, 0] * K).astype(int), rows] if self.parents else None
            return self._inputs(x_t, pa, t), v

        def sample_batch(r):
            rows = r.integers(0, n_train, cfg.batch)
            t = r.uniform(0.0, 1.0, (cfg.batch, 1))
            return pairs(rows, t, r.standard_normal((cfg.batch, self.width)))

        held = None
        if n_held:
            hr = derive_rng(seed, TRAIN_STREAM, 1)
            rows = n_train + hr.integers(0, n_held, HELDOUT_BATCH)
            held = pairs(rows, hr.uniform(0.0, 1.0, (HELDOUT_BATCH, 1)),
                         hr.standard_normal((HELDOUT_BATCH, self.width)))
        initial = mse_loss_and_grads(self.net, *held)[0] if held else None

        # 3. Momentum SGD on the velocity MSE
        self.loss_history = fit_net(
            self.net, sample_batch, cfg.steps, lr=cfg.lr, momentum=cfg.momentum, rng=rng,
            log_every=cfg.log_every, label=f'node {self.node}',
        )
        final = mse_loss_and_grads(self.net, *held)[0] if held else None
        self.heldout_loss = (initial, final)
        self.fitted = True
        if held:
            logger.debug('node %d neural: held-out loss %.5f -> %.5f', self.node, initial, final)
        return self.loss_history

    def heldout_drift_energy(self, n=1024, seed=0) -> float:
        """Mean squared drift magnitude at fresh source draws and uniform times (root nodes)."""
        if self.parents:
            raise DimensionMismatch(f'{self.name}: held-out drift energy is defined for root nodes only.')
        rng = derive_rng(seed, TRAIN_STREAM, 2)
        x = self.sample_source(n, rng)
        t = rng.uniform(0.0, 1.0, (n, 1))
        out = self.net.forward(self._inputs(x, None, t))
        return float(np.mean(np.sum(out ** 2, axis=1)))

    def to_bundle(self):
        meta = {
            'solver': self.solver,
            'node': self.node,
            'parents': list(self.parents),
            'width': self.width,
            'net': self.net.spec(),
        }
        arrays = dict(self.net.state())
        if self.source_pool is not None:
            arrays['source_pool'] = self.source_pool
        return meta, arrays

    @classmethod
    def from_bundle(cls, meta, arrays, schedule=None) -> 'NeuralLocalBridge':
        net_spec = meta['net']
        bridge = cls(meta['node'], meta['parents'], schedule=schedule, width=meta['width'],
                     hidden=net_spec['widths'][1:-1], seed=net_spec['seed'])
        bridge.net.load_state(arrays)
        if 'source_pool' in arrays:
            bridge.source_pool = np.asarray(arrays['source_pool'], dtype=float).reshape(-1, bridge.width)
        bridge.fitted = True
        return bridge
