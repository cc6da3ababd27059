"""
Embedded Markov chain solver for the M/D/1/I memory queue.

The chain is observed at departure epochs. During one deterministic
service of length 1/gamma the number of Poisson arrivals is
Poisson(rho); arrivals that would exceed the capacity are folded into
the capacity-capped state. The departure-epoch distribution is turned
into the time-stationary one with the finite M/G/1/K relations

    p_j = pi_j / (pi_0 + rho),  j < I
    p_I = 1 - 1 / (pi_0 + rho)

and the mean wait of accepted qubits follows from Little's law.
"""
import logging
from functools import lru_cache

import numpy as np
from scipy import linalg
from scipy.stats import poisson

from .params import QueueParams
from ..data_structures import QueueStats
from ..errors import NumericalFailureError

logger = logging.getLogger(__name__)


def transition_matrix(capacity: int, rho: float) -> np.ndarray:
    """
    Departure-epoch transition matrix over states 0..capacity-1.

    Row i gives the distribution of the number left behind by the next
    departure, given i were left behind by the current one.
    """
    size = capacity
    matrix = np.zeros((size, size))
    for i in range(size):
        # An empty system waits for an arrival, which then starts service.
        base = max(i - 1, 0)
        for j in range(base, size - 1):
            matrix[i, j] = poisson.pmf(j - base, rho)
        matrix[i, size - 1] = poisson.sf(size - 2 - base, rho)
    return matrix


def departure_distribution(capacity: int, rho: float) -> np.ndarray:
    """Stationary distribution of the embedded chain (linear solve)."""
    matrix = transition_matrix(capacity, rho)
    size = matrix.shape[0]
    system = matrix.T - np.eye(size)
    system[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    try:
        pi = linalg.solve(system, rhs)
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalFailureError(f"Embedded chain solve failed (I={capacity}, rho={rho}): {e}")
    if not np.all(np.isfinite(pi)):
        raise NumericalFailureError(f"Embedded chain solve produced non-finite values (I={capacity}, rho={rho})")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


@lru_cache(maxsize=4096)
def mean_wait_markov(q: QueueParams) -> QueueStats:
    """
    Steady-state queue statistics from the embedded Markov chain.

    Returns:
        QueueStats with the time-stationary distribution over 0..I,
        blocking probability p_I and the mean wait of accepted qubits
        W = L_q / (lambda (1 - p_I)).
    """
    capacity = q.capacity
    rho = q.utilization
    pi = departure_distribution(capacity, rho)

    normalizer = pi[0] + rho
    stationary = np.empty(capacity + 1)
    stationary[:capacity] = pi / normalizer
    stationary[capacity] = max(1.0 - 1.0 / normalizer, 0.0)
    stationary /= stationary.sum()

    blocking = float(stationary[capacity])
    mean_number = float(np.dot(np.arange(capacity + 1), stationary))
    waiting = np.arange(-1, capacity).clip(min=0)
    mean_queue = float(np.dot(waiting, stationary))
    accepted_rate = q.arrival_rate * (1.0 - blocking)
    mean_wait = mean_queue / accepted_rate if accepted_rate > 0 else 0.0

    logger.debug(
        f"markov I={capacity} rho={rho:.4g}: wait={mean_wait:.6g}s "
        f"blocking={blocking:.4g} L={mean_number:.4g}"
    )
    return QueueStats(
        mean_wait_seconds=mean_wait,
        mean_number_in_system=mean_number,
        blocking_probability=blocking,
        stationary_distribution=tuple(float(p) for p in stationary),
        backend="markov",
        utilization=rho,
    )
