import numpy as np
import pytest

from conftest import random_density
from kbes_chain.density import check_density, defects, hermitize, is_x_state
from kbes_chain.errors import ShapeError, StateError


def test_valid_density_passes(rng):
    rho = random_density(rng)
    assert np.array_equal(check_density(rho), rho)
    d = defects(rho)
    assert d.trace_deviation < 1e-14 and d.hermiticity_defect < 1e-14 and d.min_eigenvalue > 0


@pytest.mark.parametrize(
    "bad",
    [
        np.diag([0.5, 0.6]),
        np.array([[0.5, 0.1], [0.0, 0.5]]),
        np.diag([1.2, -0.2]),
    ],
)
def test_invalid_density_rejected(bad):
    with pytest.raises(StateError):
        check_density(bad)


def test_nonsquare_rejected():
    with pytest.raises(ShapeError):
        defects(np.zeros((2, 3)))


def test_hermitize():
    m = np.array([[1, 2j], [0, 1]])
    assert np.array_equal(hermitize(m), [[1, 1j], [-1j, 1]])


def test_x_state_detection():
    rho = np.eye(4) / 4
    rho[0, 3] = rho[3, 0] = 0.1
    assert is_x_state(rho)
    rho[0, 1] = rho[1, 0] = 1e-3
    assert not is_x_state(rho)
