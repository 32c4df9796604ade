import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_poly_coeffs(rng, degree):
    return rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
