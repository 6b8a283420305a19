from .elimination import gauss_jordan_inverse
from .CubicCostModel import (
    CubicCostModel,
    calibrate,
    extrapolate,
    extrapolation_table,
    memory_wall_estimate,
    human_duration,
    human_bytes,
    HESSIAN_FACTOR
)
