import numpy as np
import pytest

from tvpriv import Channel, JointSource, Pmf


@pytest.fixture
def binary_source() -> JointSource:
    """Ternary secret, binary data: p = 1/3, column gap 0.6, T(X;Y) = 2/15."""
    return JointSource(
        Pmf(np.array([1 / 3, 2 / 3])),
        Channel(np.array([[0.5, 0.3], [0.3, 0.2], [0.2, 0.5]])),
        y_values=np.array([1.0, 0.0]),
    )


@pytest.fixture
def uniform3_source() -> JointSource:
    """Ternary source with uniform marginals and one vanishing cost term."""
    return JointSource(
        Pmf(np.ones(3) / 3),
        Channel(np.array([[2 / 3, 1 / 3, 0.0],
                          [0.0, 1 / 3, 2 / 3],
                          [1 / 3, 1 / 3, 1 / 3]])),
        y_values=np.array([1.0, 0.0, -1.0]),
    )


@pytest.fixture
def independent_source() -> JointSource:
    """X carries no information about Y: every cost term vanishes."""
    return JointSource(
        Pmf(np.array([0.25, 0.35, 0.4])),
        Channel(np.array([[0.6, 0.6, 0.6], [0.4, 0.4, 0.4]])),
    )


def random_source(rng, nx, ny, with_values=False):
    values = None
    if with_values:
        values = np.sort(rng.normal(size=ny))
        while len(np.unique(values)) != ny:
            values = np.sort(rng.normal(size=ny))
    return JointSource(Pmf(rng.dirichlet(np.ones(ny))),
                       Channel(rng.dirichlet(np.ones(nx), size=ny).T),
                       values)
