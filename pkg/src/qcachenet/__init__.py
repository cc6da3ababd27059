"""
QCacheNet - Quantum Repeater Network Simulator and Optimizer

Models a network of K parallel repeater paths that carry one logical
qubit as a repetition code:
- Pauli channel noise for fiber and quantum memory
- Entanglement swapping latency over log2(M) rounds
- M/D/1/I memory queueing delay (Markov chain, closed form, simulation)
- End-to-end path fidelity with Werner swap composition
- MWM and lookup-table decoding of the repetition code
- Exhaustive search for the best accuracy-weighted logical rate
"""

__version__ = "0.1.0"

# Channel model
from .channels import (
    PureState,
    PauliChannel,
    FiberParams,
    MemoryParams,
    p_fiber,
    p_memory,
    fiber_channel,
    memory_channel,
    edge_channel,
    apply_channel,
    fidelity,
    edge_fidelity,
    edge_cost,
)

# Swap timing
from .swap_timing import SPEED_OF_LIGHT_FIBER, SwapSchedule, swap_iterations, t_swap, t_swap_literal_sum

# Queueing
from .queueing import (
    QueueParams,
    QueueEngine,
    mean_wait_analytic,
    mean_wait_markov,
    simulate_queue,
    simulate_queue_replicated,
)

# Path fidelity
from .path_fidelity import ChannelParams, PathConfig, compose_swap_fidelity, path_fidelity, evaluate_path

# Decoding
from .repetition_code import (
    CodeConfig,
    Syndrome,
    RepetitionCode,
    LookupTable,
    syndrome,
    decode_mwm,
    decode_ml,
    build_lut,
    logical_error_exact,
    logical_error_mc,
    flip_probability_from_fidelity,
)

# Optimization
from .optimizer import (
    NetworkConfig,
    SearchSpace,
    raw_rate,
    evaluate_config,
    evaluate_grid,
    select_best,
    grid_search,
    headline_check,
    trend_report,
)

# Data structures
from .data_structures import (
    QueueStats,
    PathReport,
    DecodingReport,
    EvaluationRow,
    OptimizationResult,
)

# Configuration
from .schemas import ExperimentConfig

__all__ = [
    # Channels
    "PureState",
    "PauliChannel",
    "FiberParams",
    "MemoryParams",
    "p_fiber",
    "p_memory",
    "fiber_channel",
    "memory_channel",
    "edge_channel",
    "apply_channel",
    "fidelity",
    "edge_fidelity",
    "edge_cost",
    # Swap timing
    "SPEED_OF_LIGHT_FIBER",
    "SwapSchedule",
    "swap_iterations",
    "t_swap",
    "t_swap_literal_sum",
    # Queueing
    "QueueParams",
    "QueueEngine",
    "mean_wait_analytic",
    "mean_wait_markov",
    "simulate_queue",
    "simulate_queue_replicated",
    # Path fidelity
    "ChannelParams",
    "PathConfig",
    "compose_swap_fidelity",
    "path_fidelity",
    "evaluate_path",
    # Decoding
    "CodeConfig",
    "Syndrome",
    "RepetitionCode",
    "LookupTable",
    "syndrome",
    "decode_mwm",
    "decode_ml",
    "build_lut",
    "logical_error_exact",
    "logical_error_mc",
    "flip_probability_from_fidelity",
    # Optimization
    "NetworkConfig",
    "SearchSpace",
    "raw_rate",
    "evaluate_config",
    "evaluate_grid",
    "select_best",
    "grid_search",
    "headline_check",
    "trend_report",
    # Data structures
    "QueueStats",
    "PathReport",
    "DecodingReport",
    "EvaluationRow",
    "OptimizationResult",
    # Configuration
    "ExperimentConfig",
]
