"""
Queue parameters for the repeater memory (M/D/1/I).
"""
from dataclasses import dataclass, asdict
from typing import Any, Dict

from ..errors import InvalidConfigError

MHZ = 1e6


@dataclass(frozen=True)
class QueueParams:
    """
    Finite-capacity memory queue with Poisson arrivals and deterministic service.

    Attributes:
        arrival_rate: lambda in Hz
        serving_rate: gamma in Hz (service takes exactly 1/gamma)
        capacity: I, total positions including the qubit in service
    """
    arrival_rate: float
    serving_rate: float
    capacity: int

    def __post_init__(self):
        if not self.arrival_rate > 0:
            raise InvalidConfigError(f"Arrival rate {self.arrival_rate!r} Hz must be > 0")
        if not self.serving_rate > 0:
            raise InvalidConfigError(f"Serving rate {self.serving_rate!r} Hz must be > 0")
        if isinstance(self.capacity, bool) or int(self.capacity) != self.capacity or self.capacity < 1:
            raise InvalidConfigError(f"Memory capacity must be a positive integer, got {self.capacity!r}")
        object.__setattr__(self, "capacity", int(self.capacity))

    @classmethod
    def from_mhz(cls, arrival_mhz: float, serving_mhz: float, capacity: int) -> "QueueParams":
        """Build from rates given in MHz."""
        return cls(arrival_mhz * MHZ, serving_mhz * MHZ, capacity)

    @property
    def utilization(self) -> float:
        """rho = lambda / gamma; values >= 1 are allowed."""
        return self.arrival_rate / self.serving_rate

    @property
    def service_time(self) -> float:
        return 1.0 / self.serving_rate

    def scaled(self, factor: float) -> "QueueParams":
        """Multiply both rates by `factor` (same utilization)."""
        return QueueParams(self.arrival_rate * factor, self.serving_rate * factor, self.capacity)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def t_total_overhead(t_swap: float, t_queue: float) -> float:
    """Total time overhead t_w = t_{w-e} + t_{w-q}."""
    if not t_swap >= 0 or not t_queue >= 0:
        raise InvalidConfigError(
            f"Time overheads must be >= 0, got t_swap={t_swap!r}, t_queue={t_queue!r}"
        )
    return t_swap + t_queue
