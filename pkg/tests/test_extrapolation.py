import numpy as np
import pytest

from errors import SingularMatrix
from extrapolation import (
    CubicCostModel, calibrate, extrapolate, extrapolation_table, gauss_jordan_inverse,
    memory_wall_estimate, human_duration, human_bytes, HESSIAN_FACTOR,
)

# timing of one 50 x 50 inversion on a reference workstation
REFERENCE = CubicCostModel(t_ref=0.000251, d_ref=50, iterations=100)


def test_extrapolation_at_one_hundred_thousand_dimensions():
    seconds = extrapolate(REFERENCE, 10 ** 5)
    assert seconds == pytest.approx(2.008e8, rel=1e-3)
    assert human_duration(seconds) == '6.37 years'


def test_extrapolation_scales_cubically():
    one = CubicCostModel(0.01, 20, iterations=1)
    assert extrapolate(one, 20) == pytest.approx(0.01)
    assert extrapolate(REFERENCE, 100) == pytest.approx(8 * 100 * 0.000251)
    with pytest.raises(ValueError):
        extrapolate(REFERENCE, 10)


def test_cost_model_validation():
    with pytest.raises(ValueError):
        CubicCostModel(0.0, 50)
    with pytest.raises(ValueError):
        CubicCostModel(1.0, 1)
    with pytest.raises(ValueError):
        CubicCostModel(1.0, 50, iterations=0)


def test_memory_wall():
    assert memory_wall_estimate(10 ** 5) == pytest.approx(4e10, rel=1e-2)
    assert human_bytes(memory_wall_estimate(10 ** 5)) == '40.0 GB'
    assert memory_wall_estimate(10 ** 5, factor=HESSIAN_FACTOR) == pytest.approx(4e11, rel=1e-2)
    assert human_bytes(4e11) == '400.0 GB'
    with pytest.raises(ValueError):
        memory_wall_estimate(0)


def test_table_rows():
    rows = extrapolation_table(REFERENCE, [10 ** 4, 10 ** 5])
    assert [r['d'] for r in rows] == [10 ** 4, 10 ** 5]
    assert rows[1]['seconds'] == pytest.approx(1000 * rows[0]['seconds'])
    assert rows[1]['human'] == '6.37 years'


def test_gauss_jordan_inverse():
    a = np.random.default_rng(0).standard_normal((30, 30))
    inv = gauss_jordan_inverse(a)
    assert np.max(np.abs(inv @ a - np.eye(30))) <= 1e-8
    # a zero leading entry needs the row swap
    swap = np.array([[0.0, 1.0], [2.0, 0.0]])
    assert gauss_jordan_inverse(swap) == pytest.approx(np.array([[0.0, 0.5], [1.0, 0.0]]))


def test_singular_and_malformed_matrices():
    with pytest.raises(SingularMatrix):
        gauss_jordan_inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularMatrix):
        gauss_jordan_inverse(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        gauss_jordan_inverse(np.zeros((2, 3)))


def test_calibration_returns_a_positive_time():
    model = calibrate(d_ref=20, trials=3, iterations=7)
    assert model.t_ref > 0
    assert model.d_ref == 20 and model.iterations == 7
    with pytest.raises(ValueError):
        calibrate(d_ref=1000)


def test_calibration_grows_cubically():
    small = calibrate(d_ref=30, trials=5)
    large = calibrate(d_ref=60, trials=5)
    assert 4.0 <= large.t_ref / small.t_ref <= 16.0
