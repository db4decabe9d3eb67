import numpy as np
import pytest

from dr_affine.subspace import AffineSubspace

E1, E2, E3 = np.eye(3)


@pytest.fixture
def parallel_lines():
    """U = span{e1}, V = e2 + span{e1} in R^2 (gap (0, -1))."""
    U = AffineSubspace.linear([[1.0, 0.0]])
    V = AffineSubspace.from_span([0.0, 1.0], [[1.0, 0.0]])
    return U, V


@pytest.fixture
def skew_lines():
    """U = span{e1}, V = e3 + span{e2} in R^3 (gap (0, 0, -1))."""
    U = AffineSubspace.linear([E1])
    V = AffineSubspace.from_span(E3, [E2])
    return U, V


@pytest.fixture
def lines_60():
    """Two lines through the origin of R^2 at 60 degrees."""
    t = np.pi / 3
    U = AffineSubspace.linear([[1.0, 0.0]])
    V = AffineSubspace.linear([[np.cos(t), np.sin(t)]])
    return U, V


def random_pair(rng, n, du, dv, offset_scale=1.0):
    def one(k):
        basis = rng.standard_normal((k, n))
        return AffineSubspace.from_span(offset_scale * rng.standard_normal(n), basis)

    return one(du), one(dv)
