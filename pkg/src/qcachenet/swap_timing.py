"""
Entanglement Swapping Latency

Waiting time of a path while nested entanglement swaps build the
end-to-end pair. Swaps at iteration j span 2^(j-1) edges, so the total
wait is sum_{j=1..J} 2^(j-1) l / c = (2^J - 1) l / c.
"""
import logging
import math
from dataclasses import dataclass, asdict
from typing import Any, Dict

from .errors import InvalidConfigError

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT_FIBER = 2e8  # m/s


def swap_iterations(edge_count: int) -> int:
    """
    Number of nested swap rounds for a path of `edge_count` edges.

    Uses ceil(log2(M)): the swap tree is as balanced as possible, so
    M = 5 needs as many rounds as M = 8.

    Raises:
        InvalidConfigError: If edge_count < 1
    """
    if isinstance(edge_count, bool) or int(edge_count) != edge_count or edge_count < 1:
        raise InvalidConfigError(f"Edge count must be a positive integer, got {edge_count!r}")
    return (int(edge_count) - 1).bit_length()


@dataclass(frozen=True)
class SwapSchedule:
    """
    Swap schedule of one path.

    Attributes:
        edge_length_km: Length l of the longest edge (km)
        light_speed: Speed of light in fiber c (m/s)
        iterations: Number of swap rounds J
        edge_count: Number of edges M
    """
    edge_length_km: float
    light_speed: float = SPEED_OF_LIGHT_FIBER
    iterations: int = 0
    edge_count: int = 1

    def __post_init__(self):
        if not self.light_speed > 0:
            raise InvalidConfigError(f"Light speed {self.light_speed!r} m/s must be > 0")
        if not self.edge_length_km >= 0:
            raise InvalidConfigError(f"Edge length {self.edge_length_km!r} km must be >= 0")
        if self.edge_count < 1:
            raise InvalidConfigError(f"Edge count {self.edge_count!r} must be >= 1")
        expected = swap_iterations(self.edge_count)
        if self.iterations != expected:
            raise InvalidConfigError(
                f"Swap iterations {self.iterations!r} do not match M={self.edge_count} (expected {expected})"
            )

    @classmethod
    def from_path(
        cls,
        total_length_km: float,
        edge_count: int,
        light_speed: float = SPEED_OF_LIGHT_FIBER,
    ) -> "SwapSchedule":
        """Derive l = L/M and J = ceil(log2 M) from a path."""
        iterations = swap_iterations(edge_count)
        return cls(
            edge_length_km=total_length_km / edge_count,
            light_speed=light_speed,
            iterations=iterations,
            edge_count=edge_count,
        )

    @property
    def hop_time(self) -> float:
        """Light travel time l/c over one edge, in seconds."""
        return self.edge_length_km * 1000.0 / self.light_speed

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def t_swap(schedule: SwapSchedule, doubled_exponent: bool = False) -> float:
    """
    Total swap waiting time t_{w-e} in seconds.

    Args:
        schedule: Path swap schedule
        doubled_exponent: Use 2^j instead of 2^(j-1) per round
            (compatibility with the form restated in the optimization
            problem); doubles the result.
    """
    factor = 2.0 ** schedule.iterations - 1.0
    if doubled_exponent:
        factor *= 2.0
    wait = factor * schedule.hop_time
    logger.debug(
        f"t_swap: M={schedule.edge_count} J={schedule.iterations} l={schedule.edge_length_km:.4g} km -> {wait:.4g} s"
    )
    return wait


def t_swap_literal_sum(schedule: SwapSchedule, exponent_offset: int = -1) -> float:
    """Evaluate sum_{j=1..J} 2^(j + offset) l/c term by term."""
    return math.fsum(
        2.0 ** (j + exponent_offset) * schedule.hop_time
        for j in range(1, schedule.iterations + 1)
    )
