"""
Shared fixtures for qcachenet tests.
"""
import numpy as np
import pytest

from src.qcachenet.channels import PureState
from src.qcachenet.path_fidelity import ChannelParams
from src.qcachenet.queueing import QueueEngine, QueueParams
from src.qcachenet.schemas import ExperimentConfig


@pytest.fixture
def rng():
    """Seeded generator for reproducible random inputs."""
    return np.random.default_rng(20240611)


@pytest.fixture
def zero_state():
    return PureState.zero()


@pytest.fixture
def channel_params():
    """Reference channel constants: eta=0.2 dB/km, T=1 ms, c=2e8 m/s."""
    return ChannelParams(eta=0.2, time_constant_s=1e-3, light_speed=2e8)


@pytest.fixture
def markov_engine():
    return QueueEngine("markov")


@pytest.fixture
def sweep_queue():
    """Queue at lambda=0.2 MHz, gamma=0.025 MHz; call with a capacity."""
    def make(capacity: int) -> QueueParams:
        return QueueParams.from_mhz(0.2, 0.025, capacity)
    return make


@pytest.fixture
def small_config():
    """Experiment config small enough for end-to-end CLI runs."""
    return ExperimentConfig(
        path_lengths_km=[80.0],
        arrival_rates_mhz=[0.2],
        serving_rates_mhz=[0.1],
        qubit_counts=[3, 5],
        edge_counts=[4],
        memory_units=[1, 2, 3],
        trials=10_000,
        served_target=10_000,
        seed=7,
    )


@pytest.fixture
def random_pure_states(rng):
    """100 pure states drawn uniformly on the Bloch sphere."""
    vectors = rng.normal(size=(100, 3))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    return [PureState(tuple(v)) for v in vectors]


def pytest_configure(config):
    """Register custom markers"""
    config.addinivalue_line(
        "markers", "slow: Tests that take longer to run"
    )
