"""
Causal sequential fitting: one pass over the topological layers, each node's
local bridge solved once, nodes of a layer solved in parallel.
"""
import hashlib
import logging
import time
import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from errors import CsbError, DimensionMismatch
from graph import Dag, topological_layers, FAMILIES
from graph.seeding import derive_rng, derive_seed
from data import build_latent_source
from bridges import DiffusionSchedule, TrainConfig, select_solver, train_local_bridge
from sde import TimeGrid, Trajectory, stack_paths, structural_abduction
from .CsbModel import CsbModel

logger = logging.getLogger(__name__)


def _annotate(err: CsbError, node: int, name: str):
    message = err.args[0] if err.args else ''
    err.args = (f'node {node} ({name}): {message}',) + tuple(err.args[1:])
    return err


def _train_node(trainer, node, name, data0, data1, parent_paths, schedule, cfg, parents,
                columns, parent_columns, seed, solver):
    try:
        return trainer(
            node, data0, data1, parent_paths, schedule, cfg,
            parents=parents, columns=columns, parent_columns=parent_columns, seed=seed, solver=solver,
        )
    except CsbError as err:
        raise _annotate(err, node, name)


def path_hash(trajectory) -> str:
    if trajectory is None:
        return None
    return hashlib.sha256(np.ascontiguousarray(trajectory.forward_states()).tobytes()).hexdigest()[:16]


def _abduct_rows(bridge, x_obs, parent_path, grid: TimeGrid, chunk: int) -> Trajectory:
    """Abducted path of every row of x_obs, `chunk` rows at a time."""
    pieces = []
    for s in range(0, x_obs.shape[0], chunk):
        part = parent_path.rows(slice(s, s + chunk)) if parent_path is not None else None
        pieces.append(structural_abduction(bridge, x_obs[s:s + chunk], part, grid).forward_states())
    return Trajectory(np.concatenate(pieces, axis=1), grid)


def _ancestors_closure(dag, seeds):
    needed, stack = set(), list(seeds)
    while stack:
        p = stack.pop()
        if p not in needed:
            needed.add(p)
            stack.extend(dag.parents(p))
    return needed


def fit(
    dag: Dag,
    data0,
    data1,
    schedule: DiffusionSchedule = None,
    cfg: TrainConfig = None,
    seed: int = None,
    widths=None,
    trainer=None,
    layer_order_seed: int = None,
) -> CsbModel:
    """
    Fit one local bridge per node of `dag` between data0 and data1.

    Parameters:
    - dag: causal graph; node i owns widths[i] consecutive dataset columns
    - data0, data1: source and target Datasets
    - schedule: reference diffusion (default from cfg.sigma / cfg.schedule)
    - cfg: TrainConfig; cfg.jobs workers per layer
    - seed: master seed (default cfg.seed); node i trains with derive_seed(seed, i)
    - trainer: local solver, train_local_bridge unless a test instruments it
    - layer_order_seed: shuffle the submission order inside each layer
    """
    cfg = cfg if cfg is not None else TrainConfig()
    seed = cfg.seed if seed is None else int(seed)
    schedule = schedule if schedule is not None else DiffusionSchedule(cfg.sigma, cfg.schedule)
    trainer = trainer if trainer is not None else train_local_bridge
    widths = [1] * dag.node_count if widths is None else [int(w) for w in widths]

    if len(widths) != dag.node_count:
        raise DimensionMismatch(f'{len(widths)} widths for {dag.node_count} nodes.')
    if data0.d != data1.d or data0.d != sum(widths):
        raise DimensionMismatch(
            f'datasets have {data0.d} and {data1.d} columns, the graph needs {sum(widths)}.'
        )

    offsets = np.concatenate([[0], np.cumsum(widths)]).astype(int)
    columns = [list(range(offsets[i], offsets[i + 1])) for i in range(dag.node_count)]
    parent_columns = [[c for p in dag.parents(i) for c in columns[p]] for i in range(dag.node_count)]
    layers = topological_layers(dag)
    names = dag.names
    start = time.perf_counter()

    # 1. Solver per node, from the data moments alone
    solvers = {}
    for i in range(dag.node_count):
        solvers[i] = select_solver(
            data0.samples[:, columns[i]], data0.samples[:, parent_columns[i]],
            data1.samples[:, columns[i]], data1.samples[:, parent_columns[i]], cfg,
        )

    # 2. Parent paths are simulated only where a neural child conditions on them
    neural = [i for i in range(dag.node_count) if solvers[i] == 'neural']
    needed = _ancestors_closure(dag, [p for i in neural for p in dag.parents(i)])
    consumers = {
        j: sum(1 for c in dag.children(j) if solvers[c] == 'neural' or c in needed)
        for j in range(dag.node_count)
    }
    path_grid = TimeGrid(cfg.path_steps)

    bridges = [None] * dag.node_count
    paths = {}
    train_calls = {i: 0 for i in range(dag.node_count)}
    node_seeds = {i: derive_seed(seed, i) for i in range(dag.node_count)}
    hashes, layer_times = {}, []

    # 3. One pass over the layers
    for k, layer in enumerate(layers):
        t0 = time.perf_counter()
        order = list(layer)
        if layer_order_seed is not None:
            order = list(derive_rng(layer_order_seed, k).permutation(order))

        tasks = []
        for i in order:
            parents = dag.parents(i)
            pa = stack_paths([paths[p] for p in parents]) if parents and solvers[i] == 'neural' else None
            hashes[i] = path_hash(pa)
            tasks.append(delayed(_train_node)(
                trainer, i, names[i], data0, data1, pa, schedule, cfg, parents,
                columns[i], parent_columns[i], node_seeds[i], solvers[i],
            ))
        results = Parallel(n_jobs=cfg.jobs)(tasks)

        for i, bridge in zip(order, results):
            bridges[i] = bridge
            train_calls[i] += 1

        for i in layer:
            parents = dag.parents(i)
            if i in needed:
                pa = stack_paths([paths[p] for p in parents]) if parents else None
                paths[i] = _abduct_rows(bridges[i], data1.samples[:, columns[i]], pa, path_grid, cfg.path_rows)
            if solvers[i] == 'neural' or i in needed:
                for p in parents:
                    consumers[p] -= 1
                    if consumers[p] == 0:
                        del paths[p]

        layer_times.append(time.perf_counter() - t0)
        logger.info('layer %d/%d: %d nodes in %.2fs', k + 1, len(layers), len(layer), layer_times[-1])

    metadata = {
        'seed': seed,
        'node_seeds': node_seeds,
        'solvers': solvers,
        'train_calls': train_calls,
        'parent_path_hash': hashes,
        'layer_wall_time': layer_times,
        'wall_time': time.perf_counter() - start,
        'config': cfg.to_dict(),
    }
    return CsbModel(dag, bridges, schedule, widths, layers, metadata, data1.names)


def _family(family):
    if callable(family):
        return family
    if family not in FAMILIES:
        raise ValueError(f'Unknown SCM family {family!r}; known: {sorted(FAMILIES)}.')
    return FAMILIES[family]


def fit_wall_time_by_dimension(family, dims, cfg: TrainConfig = None, n: int = 2000, seed: int = 42) -> list:
    """
    Fit the family's SCM at every d in `dims` (ascending) and record wall-clock seconds.
    Source data are latent standard normals, targets are SCM samples.
    """
    dims = [int(d) for d in dims]
    if dims != sorted(dims):
        raise ValueError('dims must be ascending.')
    cfg = cfg if cfg is not None else TrainConfig()
    build = _family(family)
    timings = []
    for d in dims:
        scm = build(d)
        data1 = scm.sample(n, seed)
        data0 = build_latent_source(n, data1.d, seed, data1.names)
        t0 = time.perf_counter()
        fit(scm.dag, data0, data1, cfg=cfg, seed=seed)
        seconds = time.perf_counter() - t0
        timings.append((d, seconds))
        logger.info('fit at d=%d: %.3fs', d, seconds)
    return timings


def scaling_slope(timings) -> float:
    """Slope of log(seconds) against log(d)."""
    d, seconds = zip(*timings)
    return float(stats.linregress(np.log(d), np.log(seconds)).slope)
