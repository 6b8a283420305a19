import numpy as np

from graph.seeding import SOURCE_STREAM, derive_rng
from sde.grid import TimeGrid
from sde.integrate import integrate_sde


def path_energy(field, trajectory) -> float:
    """E[ int_0^1 1/2 |f(X_t, t)|^2 dt ] along a simulated forward trajectory (left Riemann sum)."""
    grid = trajectory.grid
    total = 0.0
    for k, t in enumerate(grid.times[:-1]):
        b = np.asarray(field(trajectory.states[k], t))
        total += 0.5 * float(np.mean(np.sum(b.reshape(b.shape[0], -1) ** 2, axis=1))) * grid.dt
    return total


def local_kl_energy(bridge, schedule=None, n_mc: int = 10000, seed: int = 0,
                    parent_path=None, grid: TimeGrid = None, **field_options) -> float:
    """
    Monte-Carlo control energy of one local bridge relative to the driftless
    reference. Sources are drawn from the bridge's source conditional, paths are
    simulated with the schedule's diffusion and the drift is re-evaluated along them.

    `schedule` supplies the entropic level (default: the bridge's own); a parent
    path, when given, must carry n_mc rows.
    """
    grid = grid if grid is not None else TimeGrid()
    schedule = schedule if schedule is not None else bridge.schedule
    rng = derive_rng(seed, SOURCE_STREAM, bridge.node)
    x0 = bridge.sample_source(n_mc, rng, parent_path)
    field = bridge.drift_field(parent_path, sigma=schedule.sigma, **field_options)
    trajectory = integrate_sde(field, schedule, x0, grid, seed)
    return path_energy(field, trajectory)
