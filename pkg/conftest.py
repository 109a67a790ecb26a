import numpy as np
import pytest

from config import Config


@pytest.fixture(autouse=True, scope="session")
def quiet():
    """Silence status lines during tests."""
    verbose = Config.VERBOSE
    Config.VERBOSE = False
    yield
    Config.VERBOSE = verbose


@pytest.fixture
def rng():
    return np.random.default_rng(20160107)


@pytest.fixture
def random_density_matrix():
    """Factory for full-rank random density matrices."""

    def make(rng, dim=4):
        G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = G @ G.conj().T
        return rho / np.trace(rho).real

    return make


@pytest.fixture
def random_x_state():
    """Factory for random valid X-shaped two-qubit states."""

    def make(rng):
        p = rng.dirichlet(np.ones(4))
        rho = np.diag(p).astype(np.complex128)
        outer = np.sqrt(p[0] * p[3]) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        inner = np.sqrt(p[1] * p[2]) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        rho[0, 3], rho[3, 0] = outer, np.conj(outer)
        rho[1, 2], rho[2, 1] = inner, np.conj(inner)
        return rho

    return make


@pytest.fixture
def family_params():
    """Seeded (theta, q, nu2) triples covering the valid domain."""

    def make(n, seed=7, q_max=0.99, nu2_max=0.1):
        gen = np.random.default_rng(seed)
        thetas = gen.uniform(0.0, np.pi / 2, n)
        qs = gen.uniform(0.0, q_max, n)
        nu2s = gen.uniform(0.0, nu2_max, n)
        return list(zip(thetas.tolist(), qs.tolist(), nu2s.tolist()))

    return make
