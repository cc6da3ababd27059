"""
Path Fidelity

Composes per-edge costs into an end-to-end path fidelity. Each swap
merges the accumulated pair with the next edge using the isotropic-noise
rule F' = F f + (1 - F)(1 - f) / 3, starting from the first edge's
fidelity. The memory dwell of every edge is the total time overhead of
the path (swap wait plus queue wait).
"""
import logging
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Optional, Sequence

from .channels import (
    FiberParams,
    MemoryParams,
    PureState,
    check_probability,
    edge_cost,
)
from .data_structures import PathReport
from .errors import InvalidConfigError
from .queueing import QueueEngine, QueueParams, t_total_overhead
from .swap_timing import SPEED_OF_LIGHT_FIBER, SwapSchedule, swap_iterations, t_swap

logger = logging.getLogger(__name__)

DWELL_MODES = ("per_edge", "once")


@dataclass(frozen=True)
class ChannelParams:
    """
    Physical constants shared by every edge.

    Attributes:
        eta: Fiber attenuation (dB/km)
        time_constant_s: Memory time constant T (s)
        light_speed: Speed of light in fiber (m/s)
    """
    eta: float = 0.2
    time_constant_s: float = 1e-3
    light_speed: float = SPEED_OF_LIGHT_FIBER

    def __post_init__(self):
        if not self.eta >= 0:
            raise InvalidConfigError(f"Attenuation eta={self.eta!r} must be >= 0")
        if not self.time_constant_s > 0:
            raise InvalidConfigError(f"Memory time constant {self.time_constant_s!r} s must be > 0")
        if not self.light_speed > 0:
            raise InvalidConfigError(f"Light speed {self.light_speed!r} must be > 0")


@dataclass(frozen=True)
class PathConfig:
    """
    One repeater path of the network graph.

    Attributes:
        total_length_km: Path length L
        edge_count: Number of edges M; the path has M - 1 repeaters
        memory_units: Memory units I per repeater
        input_state: State used to evaluate edge fidelity
    """
    total_length_km: float
    edge_count: int
    memory_units: int
    input_state: PureState = field(default_factory=PureState.zero)

    def __post_init__(self):
        if not self.total_length_km > 0:
            raise InvalidConfigError(f"Path length {self.total_length_km!r} km must be > 0")
        if isinstance(self.edge_count, bool) or int(self.edge_count) != self.edge_count or self.edge_count < 1:
            raise InvalidConfigError(f"Edge count must be a positive integer, got {self.edge_count!r}")
        if int(self.memory_units) != self.memory_units or self.memory_units < 1:
            raise InvalidConfigError(f"Memory units must be a positive integer, got {self.memory_units!r}")

    @property
    def edge_length_km(self) -> float:
        return self.total_length_km / self.edge_count

    @property
    def repeater_count(self) -> int:
        return self.edge_count - 1


def compose_swap_fidelity(f_accum: float, f_next: float) -> float:
    """One swap step: F' = F f + (1 - F)(1 - f) / 3."""
    f_accum = check_probability(f_accum, "f_accum")
    f_next = check_probability(f_next, "f_next")
    value = f_accum * f_next + (1.0 - f_accum) * (1.0 - f_next) / 3.0
    return min(max(value, 0.0), 1.0)


def path_fidelity(edge_fidelities: Sequence[float]) -> float:
    """
    Left fold of compose_swap_fidelity starting from the first edge.

    Raises:
        InvalidConfigError: If the sequence is empty
    """
    values = list(edge_fidelities)
    if not values:
        raise InvalidConfigError("Path fidelity needs at least one edge")
    first = check_probability(values[0], "f_1")
    return reduce(compose_swap_fidelity, values[1:], first)


def evaluate_path_edges(
    edge_lengths_km: Sequence[float],
    q: QueueParams,
    cp: ChannelParams,
    input_state: Optional[PureState] = None,
    engine: Optional[QueueEngine] = None,
    dwell: str = "per_edge",
    doubled_exponent: bool = False,
    seed: Optional[int] = None,
) -> PathReport:
    """
    Evaluate a path with arbitrary edge lengths.

    Swap rounds are timed by the longest edge.

    Args:
        edge_lengths_km: Length of every edge, in path order
        q: Memory queue of the path
        cp: Shared channel constants
        input_state: State whose fidelity is tracked (default |0>)
        engine: Queue backend (default Markov chain)
        dwell: "per_edge" charges t_total at every edge, "once" only at the last
        doubled_exponent: Use the 2^j swap-time variant
        seed: DES seed override
    """
    lengths = [float(length) for length in edge_lengths_km]
    if not lengths:
        raise InvalidConfigError("A path needs at least one edge")
    if any(not length > 0 for length in lengths):
        raise InvalidConfigError(f"Edge lengths must be > 0, got {lengths}")
    if dwell not in DWELL_MODES:
        raise InvalidConfigError(f"Unknown dwell mode '{dwell}'. Supported: {', '.join(DWELL_MODES)}")

    state = input_state or PureState.zero()
    engine = engine or QueueEngine("markov")
    edge_count = len(lengths)

    schedule = SwapSchedule(
        edge_length_km=max(lengths),
        light_speed=cp.light_speed,
        iterations=swap_iterations(edge_count),
        edge_count=edge_count,
    )
    swap_wait = t_swap(schedule, doubled_exponent=doubled_exponent)
    queue_wait = engine.mean_wait(q, seed)
    total = t_total_overhead(swap_wait, queue_wait)

    costs = []
    for index, length in enumerate(lengths):
        charged = total if dwell == "per_edge" or index == edge_count - 1 else 0.0
        costs.append(edge_cost(
            state,
            FiberParams(cp.eta, length),
            MemoryParams(charged, cp.time_constant_s),
        ))

    fidelity = path_fidelity([1.0 - c for c in costs])
    logger.debug(
        f"path M={edge_count} I={q.capacity}: t_swap={swap_wait:.4g}s "
        f"t_queue={queue_wait:.4g}s f_T={fidelity:.6f}"
    )
    return PathReport(
        edge_costs=tuple(costs),
        path_fidelity=fidelity,
        path_cost=1.0 - fidelity,
        t_swap=swap_wait,
        t_queue=queue_wait,
        t_total=total,
        total_length_km=sum(lengths),
        edge_count=edge_count,
        memory_units=q.capacity,
        arrival_rate=q.arrival_rate,
        serving_rate=q.serving_rate,
    )


def evaluate_path(
    pc: PathConfig,
    q: QueueParams,
    cp: ChannelParams,
    engine: Optional[QueueEngine] = None,
    dwell: str = "per_edge",
    doubled_exponent: bool = False,
    seed: Optional[int] = None,
) -> PathReport:
    """
    Evaluate a homogeneous path (every edge has length L/M).

    Raises:
        InvalidConfigError: If the queue capacity differs from the path's memory units
    """
    if q.capacity != pc.memory_units:
        raise InvalidConfigError(
            f"Queue capacity {q.capacity} does not match path memory units {pc.memory_units}"
        )
    report = evaluate_path_edges(
        [pc.edge_length_km] * pc.edge_count,
        q,
        cp,
        input_state=pc.input_state,
        engine=engine,
        dwell=dwell,
        doubled_exponent=doubled_exponent,
        seed=seed,
    )
    return replace(report, total_length_km=pc.total_length_km)
