"""
Discrete-event simulation of the M/D/1/I memory queue.

Independent oracle for the Markov and analytic backends. Arrivals are
Poisson, service is deterministic, and an arrival that finds all I
positions occupied is dropped. Departures are kept in a deque in FIFO
order, so the head of the deque is always the next departure.
"""
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Union

import numpy as np

from .params import QueueParams
from ..config import MAX_WORKERS
from ..data_structures import QueueStats
from ..errors import InvalidConfigError

logger = logging.getLogger(__name__)

MIN_SERVED_TARGET = 10_000
BATCH_COUNT = 20
_EXPONENTIAL_BUFFER = 65_536

SeedLike = Union[int, np.random.SeedSequence]


class _ExponentialStream:
    """Buffered unit-rate exponential draws from one generator."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self._buffer = rng.standard_exponential(_EXPONENTIAL_BUFFER)
        self._index = 0

    def next(self) -> float:
        if self._index == _EXPONENTIAL_BUFFER:
            self._buffer = self._rng.standard_exponential(_EXPONENTIAL_BUFFER)
            self._index = 0
        value = self._buffer[self._index]
        self._index += 1
        return value


def _batch_stderr(samples: np.ndarray, batches: int = BATCH_COUNT) -> float:
    """Standard error of the mean by non-overlapping batch means."""
    size = len(samples) // batches
    if size < 2:
        return 0.0
    means = samples[: size * batches].reshape(batches, size).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(batches))


def simulate_queue(q: QueueParams, served_target: int, seed: SeedLike) -> QueueStats:
    """
    Simulate until `served_target` qubits have been accepted and served.

    While the memory is full, every arrival before the head departure is
    dropped; by memorylessness their count is Poisson(lambda * gap) and the
    next arrival after the departure is a fresh exponential, so full
    periods are skipped in one step.

    Returns:
        QueueStats with empirical mean wait (arrival to service start),
        blocking fraction, time-average occupancy and batch-means stderr.
        Bit-reproducible for a fixed seed.
    """
    if served_target < MIN_SERVED_TARGET:
        raise InvalidConfigError(
            f"served_target={served_target} is below the minimum of {MIN_SERVED_TARGET}"
        )

    rng = np.random.default_rng(seed)
    stream = _ExponentialStream(rng)
    capacity = q.capacity
    mean_gap = 1.0 / q.arrival_rate
    service = q.service_time

    waits = np.empty(served_target)
    occupancy_time = np.zeros(capacity + 1)
    departures: deque = deque()
    clock = 0.0
    last_event = 0.0
    last_departure = 0.0
    accepted = 0
    blocked = 0

    while accepted < served_target:
        clock += stream.next() * mean_gap

        while departures and departures[0] <= clock:
            leaving = departures.popleft()
            occupancy_time[len(departures) + 1] += leaving - last_event
            last_event = leaving

        if len(departures) >= capacity:
            head = departures[0]
            blocked += 1 + int(rng.poisson(q.arrival_rate * (head - clock)))
            clock = head
            continue

        occupancy_time[len(departures)] += clock - last_event
        last_event = clock
        start = last_departure if last_departure > clock else clock
        waits[accepted] = start - clock
        last_departure = start + service
        departures.append(last_departure)
        accepted += 1

    # Drain so that the occupancy clock covers every served qubit.
    while departures:
        leaving = departures.popleft()
        occupancy_time[len(departures) + 1] += leaving - last_event
        last_event = leaving

    total_time = occupancy_time.sum()
    stationary = occupancy_time / total_time if total_time > 0 else occupancy_time
    arrivals = accepted + blocked
    mean_wait = float(waits.mean())

    logger.debug(
        f"des I={capacity} rho={q.utilization:.4g}: wait={mean_wait:.6g}s "
        f"blocking={blocked / arrivals:.4g} served={accepted}"
    )
    return QueueStats(
        mean_wait_seconds=mean_wait,
        mean_number_in_system=float(np.dot(np.arange(capacity + 1), stationary)),
        blocking_probability=blocked / arrivals,
        stationary_distribution=tuple(float(p) for p in stationary),
        backend="des",
        utilization=q.utilization,
        stderr=_batch_stderr(waits),
        served=accepted,
    )


def merge_replications(results: List[QueueStats]) -> QueueStats:
    """Served-count weighted average of independent replications."""
    served = np.array([r.served for r in results], dtype=float)
    weights = served / served.sum()
    stationary = np.sum(
        [w * np.asarray(r.stationary_distribution) for w, r in zip(weights, results)], axis=0
    )
    return QueueStats(
        mean_wait_seconds=float(np.dot(weights, [r.mean_wait_seconds for r in results])),
        mean_number_in_system=float(np.dot(weights, [r.mean_number_in_system for r in results])),
        blocking_probability=float(np.dot(weights, [r.blocking_probability for r in results])),
        stationary_distribution=tuple(float(p) for p in stationary),
        backend="des",
        utilization=results[0].utilization,
        stderr=float(np.sqrt(np.sum((weights * [r.stderr for r in results]) ** 2))),
        served=int(served.sum()),
    )


def simulate_queue_replicated(
    q: QueueParams,
    served_target: int,
    seed: int,
    replications: int = 1,
    max_workers: Optional[int] = None,
) -> QueueStats:
    """
    Run independent replications and merge them.

    Replication seeds are spawned from one SeedSequence, and results are
    merged in replication order, so the output does not depend on the
    number of workers.
    """
    if replications < 1:
        raise InvalidConfigError(f"replications={replications} must be >= 1")
    if replications == 1:
        return simulate_queue(q, served_target, seed)

    seeds = np.random.SeedSequence(seed).spawn(replications)
    with ThreadPoolExecutor(max_workers=max_workers or MAX_WORKERS) as executor:
        results = list(executor.map(lambda s: simulate_queue(q, served_target, s), seeds))
    return merge_replications(results)
