import numpy as np
import pytest

from errors import NonFiniteState
from bridges import GaussianLocalBridge, DiffusionSchedule
from sde import TimeGrid, Trajectory, stack_paths, integrate_ode, integrate_sde, structural_abduction


def test_time_grid():
    grid = TimeGrid(4)
    assert grid.dt == 0.25
    assert grid.times.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert grid.index(0.6) == 2
    with pytest.raises(ValueError):
        TimeGrid(0)


def test_ode_matches_exponential_decay():
    x0 = np.array([1.0, -2.0, 0.5])
    path = integrate_ode(lambda x, t: -x, x0, TimeGrid(1000))
    assert np.all(np.abs(np.exp(-1.0) * x0 - path.end) <= 1e-3 * np.abs(x0))
    assert path.states.shape == (1001, 3)
    assert path.sigma_used == 0.0


def test_zero_diffusion_sde_is_the_ode():
    drift = lambda x, t: np.sin(x) + t
    x0 = np.linspace(-1, 1, 7)[:, None]
    grid = TimeGrid(50)
    ode = integrate_ode(drift, x0, grid)
    sde = integrate_sde(drift, 0.0, x0, grid, seed=123)
    assert np.array_equal(ode.states, sde.states)
    sde = integrate_sde(drift, DiffusionSchedule(0.0, 'bridge_scaled'), x0, grid, seed=123)
    assert np.array_equal(ode.states, sde.states)


def test_sde_is_reproducible_and_has_brownian_variance():
    zero = lambda x, t: np.zeros_like(x)
    x0 = np.zeros((20000, 1))
    grid = TimeGrid(20)
    a = integrate_sde(zero, 0.5, x0, grid, seed=1)
    b = integrate_sde(zero, 0.5, x0, grid, seed=1)
    c = integrate_sde(zero, 0.5, x0, grid, seed=2)
    assert np.array_equal(a.states, b.states)
    assert not np.array_equal(a.states, c.states)
    assert a.end.var() == pytest.approx(0.25, rel=0.05)
    assert a.sigma_used == 0.5


def test_non_finite_state_reports_the_step():
    with pytest.raises(NonFiniteState) as info:
        integrate_ode(lambda x, t: np.full_like(x, np.inf), np.zeros(2), TimeGrid(5))
    assert info.value.step == 1
    with pytest.raises(NonFiniteState):
        integrate_ode(lambda x, t: x, np.array([np.nan]), TimeGrid(5))


def test_backward_trajectory_orientation():
    path = integrate_ode(lambda x, t: np.ones_like(x), np.zeros(1), TimeGrid(10), direction='backward')
    assert path.times[0] == 1.0
    assert path.start == pytest.approx([1.0])    # state at t = 0
    assert path.end == pytest.approx([0.0])      # state at t = 1
    assert path.forward_states()[0] == pytest.approx([1.0])


def test_stack_and_export():
    grid = TimeGrid(3)
    a = Trajectory.constant(np.ones((4, 1)), grid)
    b = Trajectory(np.arange(4.0)[:, None, None] * np.ones((4, 4, 2)), grid)
    stacked = stack_paths([a, b])
    assert stacked.states.shape == (4, 4, 3)
    frame = stacked.to_frame(0, ['a', 'b1', 'b2'])
    assert list(frame.columns) == ['t', 'a', 'b1', 'b2']
    assert frame['b2'].tolist() == [0.0, 1.0, 2.0, 3.0]
    with pytest.raises(ValueError):
        stack_paths([a, Trajectory.constant(np.ones((4, 1)), TimeGrid(5))])


def test_abduction_inverts_a_mean_shift():
    bridge = GaussianLocalBridge.from_params(0, (), (0.0, [], 1.0), (3.0, [], 1.0))
    path = structural_abduction(bridge, np.array([3.0]), None, TimeGrid(1000))
    assert path.start[0, 0] == pytest.approx(0.0, abs=1e-3)


def test_abduction_round_trip_on_a_scaling_bridge():
    bridge = GaussianLocalBridge.from_params(0, (), (1.0, [], 0.5), (-2.0, [], 2.0))
    u = np.linspace(-1.0, 3.0, 9)[:, None]
    grid = TimeGrid(1000)
    x1 = integrate_ode(bridge.drift_field(), u, grid).end
    back = structural_abduction(bridge, x1, None, grid).start
    assert np.max(np.abs(back - u)) <= 1e-2
