import logging
import numpy as np

from errors import DimensionMismatch, UnfittedModel
from graph import Dag, topological_layers
from graph.seeding import SOURCE_STREAM, derive_rng, derive_seed
from bridges import DiffusionSchedule, path_energy
from sde import TimeGrid, Trajectory, stack_paths, integrate_sde, hybrid_counterfactual, structural_abduction

logger = logging.getLogger(__name__)


class CsbModel:
    """
    A fitted causal bridge: one local bridge per DAG node.

    Parameters:
    - dag: the causal graph
    - bridges: one LocalBridge per node, indexed by node
    - schedule: the DiffusionSchedule used during fitting
    - widths: state width of each node (default 1); node i owns a contiguous block of columns
    - metadata: fit bookkeeping (seeds, solver per node, wall time per layer, train calls)
    """
    def __init__(self, dag: Dag, bridges, schedule: DiffusionSchedule = None, widths=None,
                 layers=None, metadata=None, names=None):
        self.dag = dag
        self.bridges = list(bridges)
        self.schedule = schedule if schedule is not None else DiffusionSchedule()
        self.widths = [1] * dag.node_count if widths is None else [int(w) for w in widths]
        self.layers = layers if layers is not None else topological_layers(dag)
        self.metadata = dict(metadata or {})
        self.names = tuple(names) if names is not None else None

        if len(self.bridges) != dag.node_count or len(self.widths) != dag.node_count:
            raise DimensionMismatch(f'{dag.node_count} nodes need one bridge and one width each.')
        for i, bridge in enumerate(self.bridges):
            if bridge.node != i or bridge.parents != dag.parents(i):
                raise DimensionMismatch(
                    f'bridge for node {i} has parents {bridge.parents}, graph says {dag.parents(i)}.'
                )
        self._offsets = np.concatenate([[0], np.cumsum(self.widths)]).astype(int)

    @property
    def fitted(self) -> bool:
        return all(b.fitted for b in self.bridges)

    @property
    def d(self) -> int:
        return int(self._offsets[-1])

    @property
    def column_names(self) -> tuple:
        if self.names is not None:
            return self.names
        if all(w == 1 for w in self.widths):
            return self.dag.names
        return tuple(f'x{j}' for j in range(self.d))

    def columns(self, node: int) -> list:
        return list(range(self._offsets[node], self._offsets[node + 1]))

    def parent_columns(self, node: int) -> list:
        return [c for p in self.dag.parents(node) for c in self.columns(p)]

    def _check(self, x):
        if not self.fitted:
            raise UnfittedModel('model has unfitted bridges.')
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.d:
            raise DimensionMismatch(f'state has {x.shape[1]} columns, model has {self.d}.')
        return x

    def drift_field(self, node: int, state_path: Trajectory, sigma=None):
        """
        Admissible drift of `node` given a path of the FULL state (K+1, n, d): only the
        parent columns are handed to the local bridge.
        """
        parents = self.parent_columns(node)
        path = state_path.select(parents) if parents else None
        return self.bridges[node].drift_field(path, sigma=sigma)

    def generate(self, n: int = None, grid: TimeGrid = None, sigma=None, seed: int = 0,
                 return_paths: bool = False, sources=None, field_options=None):
        """
        Ancestral transport through every local bridge, from n fresh source draws or
        from given source states (n, d). sigma=None keeps the fitting schedule's level.
        field_options maps a node to extra drift_field arguments (alternative couplings).
        """
        if sources is not None:
            sources = self._check(sources)
            n = sources.shape[0]
        elif not self.fitted:
            raise UnfittedModel('model has unfitted bridges.')
        grid = grid if grid is not None else TimeGrid()
        sigma = self.schedule.sigma if sigma is None else sigma
        pending = {i: len(self.dag.children(i)) for i in range(self.dag.node_count)}
        paths = {}
        out = np.empty((n, self.d))
        for layer in self.layers:
            for i in layer:
                bridge = self.bridges[i]
                parents = self.dag.parents(i)
                pa = stack_paths([paths[p] for p in parents]) if parents else None
                if sources is None:
                    x0 = bridge.sample_source(n, derive_rng(seed, SOURCE_STREAM, i), pa)
                else:
                    x0 = sources[:, self.columns(i)]
                field = bridge.drift_field(pa, sigma=sigma, **(field_options or {}).get(i, {}))
                paths[i] = integrate_sde(field, bridge.diffusion(sigma), x0, grid, derive_seed(seed, i))
                out[:, self.columns(i)] = paths[i].end
                if not return_paths:
                    for p in parents:
                        pending[p] -= 1
                        if pending[p] == 0:
                            del paths[p]
                    if pending[i] == 0:
                        del paths[i]
        return (out, paths) if return_paths else out

    def abduct(self, x, grid: TimeGrid = None) -> np.ndarray:
        """sigma=0 latent of every node for factual states x (n, d)."""
        x = self._check(x)
        grid = grid if grid is not None else TimeGrid()
        paths = {}
        latent = np.empty_like(x)
        for layer in self.layers:
            for i in layer:
                parents = self.dag.parents(i)
                pa = stack_paths([paths[p] for p in parents]) if parents else None
                paths[i] = structural_abduction(self.bridges[i], x[:, self.columns(i)], pa, grid)
                latent[:, self.columns(i)] = paths[i].start
        return latent

    def counterfactual(self, x_fact, assignments, grid: TimeGrid = None, sigma_gen: float = 0.0,
                       seed: int = 0, return_paths: bool = False):
        return hybrid_counterfactual(self, x_fact, assignments, grid, sigma_gen, seed, return_paths)

    def energy(self, n_mc: int = 10000, seed: int = 0, grid: TimeGrid = None, sigma=None,
               field_options=None):
        """
        Control energy of the factorised process from one joint simulation.
        Returns (total, {node: local energy}); total is the sum of the locals.
        """
        grid = grid if grid is not None else TimeGrid()
        sigma = self.schedule.sigma if sigma is None else sigma
        _, paths = self.generate(n_mc, grid, sigma, seed, return_paths=True, field_options=field_options)
        local = {}
        for i, bridge in enumerate(self.bridges):
            parents = self.dag.parents(i)
            pa = stack_paths([paths[p] for p in parents]) if parents else None
            options = (field_options or {}).get(i, {})
            local[i] = path_energy(bridge.drift_field(pa, sigma=sigma, **options), paths[i])
        return float(sum(local.values())), local

    def solvers(self) -> dict:
        return {i: b.solver for i, b in enumerate(self.bridges)}

    def __repr__(self):
        return f'CsbModel(nodes={self.dag.node_count}, layers={len(self.layers)}, d={self.d}, fitted={self.fitted})'
