"""
Queue backend selection.
"""
import logging
import math
from typing import Dict, Iterable, List, Optional, Tuple

from .analytic import mean_wait_analytic
from .markov import mean_wait_markov
from .params import QueueParams
from .simulation import simulate_queue_replicated
from ..data_structures import QueueStats
from ..errors import DegenerateFormulaError, InvalidConfigError, NumericalFailureError

logger = logging.getLogger(__name__)

BACKENDS = ("markov", "analytic", "des")


def analytic_stats(q: QueueParams, variant: str = "literal") -> QueueStats:
    """Wrap the closed-form wait; occupancy and blocking are not available."""
    wait = mean_wait_analytic(q, variant)
    return QueueStats(
        mean_wait_seconds=wait,
        mean_number_in_system=float("nan"),
        blocking_probability=float("nan"),
        stationary_distribution=(),
        backend="analytic" if variant == "literal" else f"analytic-{variant}",
        utilization=q.utilization,
    )


class QueueEngine:
    """
    Compute memory queue statistics with a chosen backend.

    The Markov chain is the default for all downstream rate and fidelity
    work. The analytic backend falls back to Markov when its formula is
    degenerate, unless fallback is disabled.

    Example:
        engine = QueueEngine("des", seed=7)
        stats = engine.stats(QueueParams.from_mhz(0.2, 0.1, 5))
    """

    def __init__(
        self,
        backend: str = "markov",
        served_target: int = 1_000_000,
        seed: int = 0,
        replications: int = 1,
        fallback: bool = True,
        max_workers: Optional[int] = None,
    ):
        if backend not in BACKENDS:
            raise InvalidConfigError(f"Unknown queue backend '{backend}'. Supported: {', '.join(BACKENDS)}")
        self.backend = backend
        self.served_target = served_target
        self.seed = seed
        self.replications = replications
        self.fallback = fallback
        self.max_workers = max_workers

    def stats(self, q: QueueParams, seed: Optional[int] = None) -> QueueStats:
        """Queue statistics for `q`; `seed` overrides the engine seed for DES."""
        if self.backend == "markov":
            return mean_wait_markov(q)
        if self.backend == "des":
            return simulate_queue_replicated(
                q,
                self.served_target,
                self.seed if seed is None else seed,
                self.replications,
                self.max_workers,
            )
        try:
            return analytic_stats(q)
        except (DegenerateFormulaError, NumericalFailureError) as e:
            if not self.fallback:
                raise
            logger.warning(f"Analytic backend unusable ({e}); falling back to Markov chain")
            return mean_wait_markov(q)

    def mean_wait(self, q: QueueParams, seed: Optional[int] = None) -> float:
        return self.stats(q, seed).mean_wait_seconds


def analytic_discrepancy_report(grid: Iterable[QueueParams]) -> List[Dict[str, object]]:
    """
    Relative discrepancy of each analytic variant against the Markov chain.

    Degenerate or overflowing formulas are reported with a None value and
    the reason, never raised.
    """
    rows = []
    for q in grid:
        reference = mean_wait_markov(q).mean_wait_seconds
        for variant in ("literal", "full_sum"):
            row = {
                "lambda_hz": q.arrival_rate,
                "gamma_hz": q.serving_rate,
                "capacity": q.capacity,
                "variant": variant,
                "markov_wait": reference,
                "analytic_wait": None,
                "relative_error": None,
                "note": "",
            }
            try:
                value = mean_wait_analytic(q, variant)
                row["analytic_wait"] = value
                if reference > 0:
                    row["relative_error"] = abs(value - reference) / reference
                else:
                    row["relative_error"] = 0.0 if value == 0 else math.inf
            except (DegenerateFormulaError, NumericalFailureError) as e:
                row["note"] = type(e).__name__
            rows.append(row)
    return rows


def max_relative_discrepancy(rows: List[Dict[str, object]]) -> Dict[str, Tuple[float, int]]:
    """Per variant: (max finite relative error, number of degenerate rows)."""
    summary: Dict[str, Tuple[float, int]] = {}
    for variant in ("literal", "full_sum"):
        selected = [r for r in rows if r["variant"] == variant]
        errors = [
            r["relative_error"] for r in selected
            if r["relative_error"] is not None and math.isfinite(r["relative_error"])
        ]
        degenerate = sum(1 for r in selected if r["analytic_wait"] is None)
        summary[variant] = (max(errors) if errors else float("nan"), degenerate)
    return summary
