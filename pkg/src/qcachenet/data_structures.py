"""
Data structures for the QCacheNet simulator.
All structures are JSON-serializable for result tables and summaries.
"""
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class QueueStats:
    """
    Steady-state statistics of one M/D/1/I memory queue.

    Attributes:
        mean_wait_seconds: Mean queueing delay of an accepted qubit (excludes service)
        mean_number_in_system: Time-average number of qubits in memory
        blocking_probability: Fraction of arrivals dropped on a full memory
        stationary_distribution: Time-stationary probabilities of 0..I qubits
        backend: Engine that produced the numbers (markov, analytic, des)
        utilization: rho = lambda / gamma
        stderr: Standard error of mean_wait_seconds (0 for exact backends)
        served: Number of served qubits (DES only)
    """
    mean_wait_seconds: float
    mean_number_in_system: float
    blocking_probability: float
    stationary_distribution: Tuple[float, ...]
    backend: str
    utilization: float
    stderr: float = 0.0
    served: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        data["stationary_distribution"] = list(self.stationary_distribution)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "QueueStats":
        """Create instance from dictionary."""
        data = dict(data)
        data["stationary_distribution"] = tuple(data.get("stationary_distribution", ()))
        return cls(**data)


@dataclass(frozen=True)
class PathReport:
    """
    End-to-end report of one repeater path.

    Attributes:
        edge_costs: Cost C_e of every edge
        path_fidelity: Fidelity f_T after all swaps
        path_cost: C_T = 1 - f_T
        t_swap: Entanglement swapping wait (s)
        t_queue: Memory queueing wait (s)
        t_total: t_swap + t_queue (s)
        total_length_km: Path length L
        edge_count: Number of edges M
        memory_units: Memory capacity I
        arrival_rate: lambda (Hz)
        serving_rate: gamma (Hz)
    """
    edge_costs: Tuple[float, ...]
    path_fidelity: float
    path_cost: float
    t_swap: float
    t_queue: float
    t_total: float
    total_length_km: float = 0.0
    edge_count: int = 1
    memory_units: int = 1
    arrival_rate: float = 0.0
    serving_rate: float = 0.0

    def to_row(self) -> Dict[str, Any]:
        """Flat row for the fidelity sweep table."""
        return {
            "L_km": self.total_length_km,
            "M": self.edge_count,
            "I": self.memory_units,
            "lambda_hz": self.arrival_rate,
            "gamma_hz": self.serving_rate,
            "t_swap_s": self.t_swap,
            "t_queue_s": self.t_queue,
            "fidelity": self.path_fidelity,
            "cost": self.path_cost,
        }

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        data["edge_costs"] = list(self.edge_costs)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PathReport":
        """Create instance from dictionary."""
        data = dict(data)
        data["edge_costs"] = tuple(data["edge_costs"])
        return cls(**data)


@dataclass(frozen=True)
class DecodingReport:
    """
    Logical error probability of a repetition code under one decoder.

    Attributes:
        decoder: Decoder kind (mwm or lut)
        logical_error_exact: Exact enumeration result
        logical_error_mc: Monte Carlo estimate
        mc_stderr: Binomial standard error of the estimate
        trials: Number of Monte Carlo trials
        seed: Root seed of the Monte Carlo run
        num_qubits: Code size K
    """
    decoder: str
    logical_error_exact: float
    logical_error_mc: float
    mc_stderr: float
    trials: int
    seed: int = 0
    num_qubits: int = 0

    @property
    def z_score(self) -> float:
        """(mc - exact) / stderr, 0 when both agree exactly."""
        diff = self.logical_error_mc - self.logical_error_exact
        if self.mc_stderr == 0:
            return 0.0 if diff == 0 else float("inf")
        return diff / self.mc_stderr

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DecodingReport":
        """Create instance from dictionary."""
        return cls(**data)


@dataclass(frozen=True)
class EvaluationRow:
    """
    One evaluated network configuration.

    Attributes:
        edge_count: Edges per path M (repeaters = M - 1)
        num_qubits: Physical qubits / paths K
        memory_units: Memory units I
        raw_rate: R_logic = 1 / t_total (Hz)
        accuracy: 1 - logical error probability
        objective: raw_rate * accuracy (Hz)
        path_fidelity: f_T of each path (the lowest one in a mixed network)
        path_cost: C_T = 1 - f_T
        flip_probability: Per-path bit-flip probability fed to the decoder (the highest one)
        logical_error: Logical error probability
        t_swap: Swap wait of the slowest path (s)
        t_queue: Queue wait of the slowest path (s)
        t_total: Total overhead (s)
        feasible: Whether the fidelity constraint holds
        paths: Per-path (M, I) of a mixed network, empty when every path is alike
    """
    edge_count: int
    num_qubits: int
    memory_units: int
    raw_rate: float
    accuracy: float
    objective: float
    path_fidelity: float
    path_cost: float
    flip_probability: float
    logical_error: float
    t_swap: float
    t_queue: float
    t_total: float
    feasible: bool = True
    paths: Tuple[Tuple[int, int], ...] = ()

    @property
    def key(self) -> Tuple[int, int, int]:
        """Grid coordinates (M, K, I) used for ordering and tie-breaks."""
        return (self.edge_count, self.num_qubits, self.memory_units)

    @property
    def repeaters(self) -> int:
        return self.edge_count - 1

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EvaluationRow":
        """Create instance from dictionary."""
        data = dict(data)
        data["paths"] = tuple(tuple(p) for p in data.get("paths", ()))
        return cls(**data)


@dataclass
class OptimizationResult:
    """
    Outcome of the exhaustive rate/accuracy search.

    Attributes:
        best_config: Selected (M, K, I)
        objective: Accuracy-weighted rate of the best row (Hz)
        raw_rate: Raw logical rate of the best row (Hz)
        accuracy: Decoding accuracy of the best row
        path_fidelity: Path fidelity of the best row
        feasible_count: Number of rows meeting the constraint
        table: Every evaluated row, ordered by grid coordinates
        rejected: (M, K, I) of degenerate rows left out of the table
    """
    best_config: Tuple[int, int, int]
    objective: float
    raw_rate: float
    accuracy: float
    path_fidelity: float
    feasible_count: int
    table: List[EvaluationRow] = field(default_factory=list)
    rejected: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def best_row(self) -> Optional[EvaluationRow]:
        for row in self.table:
            if row.key == self.best_config:
                return row
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "best_config": {
                "M": self.best_config[0],
                "K": self.best_config[1],
                "I": self.best_config[2],
            },
            "objective": self.objective,
            "raw_rate": self.raw_rate,
            "accuracy": self.accuracy,
            "path_fidelity": self.path_fidelity,
            "feasible_count": self.feasible_count,
            "table": [row.to_dict() for row in self.table],
            "rejected": [list(key) for key in self.rejected],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OptimizationResult":
        """Create instance from dictionary."""
        best = data["best_config"]
        return cls(
            best_config=(best["M"], best["K"], best["I"]),
            objective=data["objective"],
            raw_rate=data["raw_rate"],
            accuracy=data["accuracy"],
            path_fidelity=data["path_fidelity"],
            feasible_count=data["feasible_count"],
            table=[EvaluationRow.from_dict(r) for r in data.get("table", [])],
            rejected=[tuple(key) for key in data.get("rejected", [])],
        )
