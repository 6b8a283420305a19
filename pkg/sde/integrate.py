"""
Explicit first-order integrators on a uniform TimeGrid.

    integrate_ode(f, x0, grid)            x_{k+1} = x_k + f(x_k, t_k) dt
    integrate_sde(f, g, x0, grid, seed)   x_{k+1} = x_k + f(x_k, t_k) dt + g(t_k) sqrt(dt) xi_k

A backward run walks t from 1 to 0; the caller supplies the reverse-time field.
With g identically zero the SDE path is bit-identical to the ODE path.
"""
import logging
import numbers
import numpy as np

from errors import NonFiniteState
from graph.seeding import SDE_STREAM, derive_rng
from .grid import TimeGrid, Trajectory

logger = logging.getLogger(__name__)


def _check_args(x0, grid, direction):
    if direction not in ('forward', 'backward'):
        raise ValueError(f'direction must be forward or backward, got {direction!r}.')
    if not isinstance(grid, TimeGrid):
        raise TypeError('grid must be a TimeGrid.')
    x0 = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x0)):
        raise NonFiniteState('initial state is not finite', step=0)
    return x0


def _time(grid, k, direction):
    return k * grid.dt if direction == 'forward' else 1.0 - k * grid.dt


def _as_schedule(g):
    if isinstance(g, numbers.Number):
        value = float(g)
        return lambda t: value
    return g


def integrate_ode(drift, x0, grid: TimeGrid, direction: str = 'forward') -> Trajectory:
    x = _check_args(x0, grid, direction)
    dt = grid.dt
    states = np.empty((grid.n_steps + 1,) + x.shape)
    states[0] = x
    for k in range(grid.n_steps):
        x = x + drift(x, _time(grid, k, direction)) * dt
        if not np.all(np.isfinite(x)):
            raise NonFiniteState(f'ODE state became non-finite at step {k + 1}', step=k + 1)
        states[k + 1] = x
    return Trajectory(states, grid, 0.0, direction)


def integrate_sde(drift, g, x0, grid: TimeGrid, seed: int, direction: str = 'forward') -> Trajectory:
    """
    Euler-Maruyama with diffusion g(t) (a schedule, callable or constant). The Brownian
    increments of the whole run are drawn in one call, at the first step with g != 0.
    """
    x = _check_args(x0, grid, direction)
    sigma_used = getattr(g, 'sigma', None)
    g = _as_schedule(g)
    rng = derive_rng(seed, SDE_STREAM)
    dt = grid.dt
    sqrt_dt = np.sqrt(dt)
    states = np.empty((grid.n_steps + 1,) + x.shape)
    states[0] = x
    sigma_seen = 0.0
    increments = None
    for k in range(grid.n_steps):
        t = _time(grid, k, direction)
        x = x + drift(x, t) * dt
        g_k = float(g(t))
        if g_k != 0.0:
            if increments is None:
                increments = sqrt_dt * rng.standard_normal((grid.n_steps,) + x.shape)
            x = x + g_k * increments[k]
            sigma_seen = max(sigma_seen, g_k)
        if not np.all(np.isfinite(x)):
            raise NonFiniteState(f'SDE state became non-finite at step {k + 1}', step=k + 1)
        states[k + 1] = x
    return Trajectory(states, grid, sigma_seen if sigma_used is None else sigma_used, direction)
