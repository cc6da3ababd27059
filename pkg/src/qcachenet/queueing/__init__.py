"""Memory queueing delay backends for the M/D/1/I repeater memory."""
from .params import MHZ, QueueParams, t_total_overhead
from .analytic import b_coefficients, mean_wait_analytic
from .markov import mean_wait_markov, transition_matrix, departure_distribution
from .simulation import simulate_queue, simulate_queue_replicated, merge_replications
from .engine import (
    BACKENDS,
    QueueEngine,
    analytic_stats,
    analytic_discrepancy_report,
    max_relative_discrepancy,
)

__all__ = [
    "MHZ",
    "QueueParams",
    "t_total_overhead",
    "b_coefficients",
    "mean_wait_analytic",
    "mean_wait_markov",
    "transition_matrix",
    "departure_distribution",
    "simulate_queue",
    "simulate_queue_replicated",
    "merge_replications",
    "BACKENDS",
    "QueueEngine",
    "analytic_stats",
    "analytic_discrepancy_report",
    "max_relative_discrepancy",
]
