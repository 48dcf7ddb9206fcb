import numpy as np
import pytest

from akl import OscillatorSpec, solve


def harmonic_spec(N: int, L: float = 10.0, J: int = 40) -> OscillatorSpec:
    return OscillatorSpec(k=1, l=1, half_width=L, grid_points=N, modes=J)


@pytest.fixture(scope="session")
def harmonic_base():
    """Reference harmonic basis at the acceptance resolution."""
    return solve(harmonic_spec(2001))


@pytest.fixture(scope="session")
def harmonic_small():
    """Cheaper harmonic basis for transform/multiplier/modulation tests."""
    return solve(harmonic_spec(1025))


@pytest.fixture(scope="session")
def harmonic_small_fine():
    """Half-step refinement of harmonic_small (same box, same mode count)."""
    return solve(harmonic_spec(2049))


@pytest.fixture(scope="session")
def harmonic_tiny():
    return solve(harmonic_spec(513, J=24))


@pytest.fixture(scope="session")
def harmonic_tiny_fine():
    return solve(harmonic_spec(1025, J=24))


@pytest.fixture(scope="session")
def harmonic_deep():
    """Wider box trusting ~64 modes, for long trace sums."""
    return solve(OscillatorSpec(k=1, l=1, half_width=16.0, grid_points=1025, modes=64))


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
