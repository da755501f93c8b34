import numpy as np
import pytest

from contirl import BasisSpec, IRLProblem, PolyDensity, PolyTransition


@pytest.fixture(scope="session")
def basis():
    return BasisSpec()


@pytest.fixture(scope="session")
def edge_density():
    # (3/2) s^2: unit mass concentrated toward the interval ends
    return PolyDensity(np.array([0.0, 0.0, 1.5]))


@pytest.fixture(scope="session")
def uniform_density():
    return PolyDensity(np.array([0.5]))


@pytest.fixture(scope="session")
def engineered_problem(edge_density, uniform_density):
    """Hand-built separable 3-action problem.

    Action 0 pushes mass to the interval ends regardless of state, action
    1 is uniform, action 2 is uniform with a mild state-dependent tilt.
    The margin profiles of both non-optimal actions stay positive, so the
    instance is comfortably separable with a small Lipschitz constant.
    """
    mix = PolyDensity(0.8 * np.array([0.5, 0.0, 0.0])
                      + 0.2 * np.array([0.0, 0.0, 1.5]))
    return IRLProblem(transitions=(
        PolyTransition(pa=edge_density, pb=edge_density),
        PolyTransition(pa=uniform_density, pb=uniform_density),
        PolyTransition(pa=uniform_density, pb=mix),
    ), gamma=0.7)


@pytest.fixture(scope="session")
def myopic_problem(edge_density, uniform_density):
    """Two-action gamma=0 instance solvable by inspection (k=3)."""
    return IRLProblem(transitions=(
        PolyTransition(pa=edge_density, pb=edge_density),
        PolyTransition(pa=uniform_density, pb=uniform_density),
    ), gamma=0.0)
