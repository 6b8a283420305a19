"""
Structural abduction and the hybrid counterfactual.

Abduction reverses one LOCAL bridge in time at sigma = 0: starting from the
observed value at t=1 it integrates the negated forward drift back to t=0,
conditioning on the node's parent paths only. Generation then runs the local
bridges forward from the abducted latents, stochastically when sigma_gen > 0.
"""
import logging
import numpy as np

from errors import UnfittedModel
from graph.seeding import derive_seed
from .grid import TimeGrid, Trajectory, stack_paths
from .integrate import integrate_ode, integrate_sde

logger = logging.getLogger(__name__)


def structural_abduction(bridge, x_obs, parent_traj, grid: TimeGrid = None) -> Trajectory:
    """Backward sigma=0 trajectory of `bridge` from x_obs at t=1; `.start` is the latent."""
    grid = grid if grid is not None else TimeGrid()
    field = bridge.drift_field(parent_traj, sigma=0.0)
    reverse = lambda x, t: -field(x, t)
    return integrate_ode(reverse, bridge.as_batch(x_obs), grid, direction='backward')


def _parent_path(model, node, paths):
    parents = model.dag.parents(node)
    if not parents:
        return None
    return stack_paths([paths[p] for p in parents])


def hybrid_counterfactual(model, x_fact, assignments, grid: TimeGrid = None, sigma_gen: float = 0.0,
                          seed: int = 0, return_paths: bool = False):
    """
    Abduction-action-prediction over a fitted CsbModel.

    1. abduction: every node's latent is recovered by structural_abduction at sigma = 0,
       conditioning on its parents' factual paths, so abduction runs in topological
       order (parents before children) and never in reverse
    2. action: intervened nodes follow a constant path at their do-value for all t
    3. prediction: every other node is regenerated from its latent with diffusion
       sigma_gen, conditioning on the counterfactual parent paths

    Each node draws its Brownian increments from derive_seed(seed, node), so a node
    with no intervened ancestor reproduces its no-intervention value exactly.
    Returns the counterfactual endpoint (same leading shape as x_fact), and the
    counterfactual paths per node when return_paths is set.
    """
    if not model.fitted:
        raise UnfittedModel('hybrid_counterfactual needs a fitted model.')
    grid = grid if grid is not None else TimeGrid()
    single = np.ndim(x_fact) == 1
    x = np.atleast_2d(np.asarray(x_fact, dtype=float))
    targets = {model.dag.index(k): float(v) for k, v in dict(assignments or {}).items()}
    n = x.shape[0]

    pending = {i: len(model.dag.children(i)) for i in range(model.dag.node_count)}
    factual, counterfactual = {}, {}
    out = np.empty_like(x)

    for layer in model.layers:
        for i in layer:
            bridge = model.bridges[i]
            cols = model.columns(i)
            factual[i] = structural_abduction(bridge, x[:, cols], _parent_path(model, i, factual), grid)

            if i in targets:
                counterfactual[i] = Trajectory.constant(np.full((n, len(cols)), targets[i]), grid)
            else:
                field = bridge.drift_field(_parent_path(model, i, counterfactual), sigma=sigma_gen)
                counterfactual[i] = integrate_sde(
                    field, bridge.diffusion(sigma_gen), factual[i].start, grid, derive_seed(seed, i)
                )
            out[:, cols] = counterfactual[i].end

            # release paths nobody downstream still reads
            if not return_paths:
                for p in model.dag.parents(i):
                    pending[p] -= 1
                    if pending[p] == 0:
                        del factual[p], counterfactual[p]
                if pending[i] == 0:
                    del factual[i], counterfactual[i]

    logger.debug('counterfactual over %d units, do=%s, sigma_gen=%.3g', n, targets, sigma_gen)
    result = out[0] if single else out
    if return_paths:
        return result, counterfactual
    return result
