from .grid import TimeGrid, Trajectory, stack_paths
from .integrate import integrate_ode, integrate_sde
from .abduction import structural_abduction, hybrid_counterfactual
