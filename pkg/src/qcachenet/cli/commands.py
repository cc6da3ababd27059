"""
Experiment commands.

Each command takes an effective ExperimentConfig and returns the rows of
one result table as a DataFrame, ordered by grid coordinates.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from ..config import MAX_WORKERS
from ..errors import DegenerateFormulaError, InfeasibleProblemError, NumericalFailureError
from ..optimizer import NetworkConfig, SearchSpace, evaluate_grid, headline_check, select_best, trend_report
from ..path_fidelity import ChannelParams, PathConfig, evaluate_path
from ..queueing import (
    MHZ,
    QueueEngine,
    QueueParams,
    analytic_discrepancy_report,
    max_relative_discrepancy,
    mean_wait_analytic,
    mean_wait_markov,
)
from ..queueing.simulation import simulate_queue_replicated
from ..reporting import to_frame, write_summary, write_table
from ..repetition_code import DECODERS, CodeConfig, RepetitionCode, flip_probability_from_fidelity
from ..schemas import ExperimentConfig
from ..utils.hashing import derive_seed

logger = logging.getLogger(__name__)

FIDELITY_EDGE_COUNTS = (1, 2, 4, 8)

QUEUE_WAIT_COLUMNS = [
    "lambda_mhz", "gamma_mhz", "I", "rho",
    "markov_wait_s", "markov_blocking", "markov_number",
    "des_wait_s", "des_stderr", "des_blocking", "des_served",
    "analytic_wait_s", "analytic_full_wait_s",
]
FIDELITY_COLUMNS = ["L_km", "M", "I", "lambda_hz", "gamma_hz", "t_swap_s", "t_queue_s", "fidelity", "cost"]
DECODE_COLUMNS = [
    "K", "M", "repeaters", "I", "fidelity", "flip_probability",
    "decoder", "p_exact", "p_mc", "stderr", "trials",
]
OPTIMIZE_COLUMNS = [
    "M", "repeaters", "K", "I", "t_swap_s", "t_queue_s", "t_total_s",
    "fidelity", "cost", "flip_probability", "logical_error",
    "raw_rate_hz", "accuracy", "objective_hz", "feasible",
]


def _engine(cfg: ExperimentConfig, backend: Optional[str] = None) -> QueueEngine:
    return QueueEngine(
        backend or cfg.queue_backend,
        served_target=cfg.served_target,
        seed=cfg.seed,
        replications=cfg.replications,
        max_workers=1,
    )


def _channel_params(cfg: ExperimentConfig) -> ChannelParams:
    return ChannelParams(cfg.eta, cfg.time_constant_s, cfg.light_speed)


def _sweep_queue(cfg: ExperimentConfig, memory_units: int) -> QueueParams:
    return QueueParams.from_mhz(cfg.sweep_arrival_mhz, cfg.sweep_serving_mhz, memory_units)


def _optional_analytic(q: QueueParams, variant: str) -> Optional[float]:
    try:
        return mean_wait_analytic(q, variant)
    except (DegenerateFormulaError, NumericalFailureError):
        return None


def cmd_queue_wait(cfg: ExperimentConfig, workers: Optional[int] = None) -> pd.DataFrame:
    """
    Mean queueing delay over every (lambda, gamma, I) of the config.

    Markov and DES results sit side by side; both analytic variants are
    added and left empty where their formula is degenerate.
    """
    grid = list(itertools.product(cfg.arrival_rates_mhz, cfg.serving_rates_mhz, sorted(set(cfg.memory_units))))
    logger.info(f"queue-wait: {len(grid)} parameter combinations")

    def row(point: Tuple[float, float, int]) -> Dict[str, Any]:
        arrival, serving, capacity = point
        q = QueueParams.from_mhz(arrival, serving, capacity)
        markov = mean_wait_markov(q)
        des = simulate_queue_replicated(
            q,
            cfg.served_target,
            derive_seed(cfg.seed, "queue", arrival, serving, capacity),
            cfg.replications,
            max_workers=1,
        )
        return {
            "lambda_mhz": arrival,
            "gamma_mhz": serving,
            "I": capacity,
            "rho": q.utilization,
            "markov_wait_s": markov.mean_wait_seconds,
            "markov_blocking": markov.blocking_probability,
            "markov_number": markov.mean_number_in_system,
            "des_wait_s": des.mean_wait_seconds,
            "des_stderr": des.stderr,
            "des_blocking": des.blocking_probability,
            "des_served": des.served,
            "analytic_wait_s": _optional_analytic(q, "literal"),
            "analytic_full_wait_s": _optional_analytic(q, "full_sum"),
        }

    with ThreadPoolExecutor(max_workers=workers or MAX_WORKERS) as executor:
        rows = list(executor.map(row, grid))
    return to_frame(rows, QUEUE_WAIT_COLUMNS)


def queue_wait_summary(cfg: ExperimentConfig) -> Dict[str, Any]:
    """Largest relative gap of each closed-form variant to the Markov chain over the queue-wait grid."""
    grid = [
        QueueParams.from_mhz(arrival, serving, capacity)
        for arrival, serving, capacity in itertools.product(
            cfg.arrival_rates_mhz, cfg.serving_rates_mhz, sorted(set(cfg.memory_units))
        )
    ]
    discrepancy = max_relative_discrepancy(analytic_discrepancy_report(grid))
    for variant, (error, degenerate) in discrepancy.items():
        logger.info(f"analytic {variant}: max relative error {error:.4g}, {degenerate} degenerate rows")
    return {
        "analytic_vs_markov": {
            variant: {"max_relative_error": error, "degenerate_rows": degenerate}
            for variant, (error, degenerate) in discrepancy.items()
        },
        "grid_points": len(grid),
        "seed": cfg.seed,
        "config_fingerprint": cfg.fingerprint(),
    }


def cmd_fidelity_sweep(cfg: ExperimentConfig, workers: Optional[int] = None) -> pd.DataFrame:
    """Path fidelity over L, M and I at the sweep arrival and serving rates."""
    edge_counts = sorted(set(FIDELITY_EDGE_COUNTS) | set(cfg.edge_counts))
    grid = list(itertools.product(cfg.path_lengths_km, edge_counts, sorted(set(cfg.memory_units))))
    engine = _engine(cfg)
    cp = _channel_params(cfg)
    logger.info(f"fidelity-sweep: {len(grid)} paths")

    def row(point: Tuple[float, int, int]) -> Dict[str, Any]:
        length, edges, capacity = point
        q = _sweep_queue(cfg, capacity)
        report = evaluate_path(
            PathConfig(length, edges, capacity),
            q,
            cp,
            engine=engine,
            dwell=cfg.dwell,
            doubled_exponent=cfg.doubled_exponent,
            seed=derive_seed(cfg.seed, q.arrival_rate, q.serving_rate, capacity),
        )
        return report.to_row()

    with ThreadPoolExecutor(max_workers=workers or MAX_WORKERS) as executor:
        rows = list(executor.map(row, grid))
    return to_frame(rows, FIDELITY_COLUMNS)


def cmd_decode_error(cfg: ExperimentConfig, workers: Optional[int] = None) -> pd.DataFrame:
    """Exact and Monte Carlo logical error for both decoders over K, M and I."""
    engine = _engine(cfg)
    cp = _channel_params(cfg)
    length = cfg.path_lengths_km[0]
    rows: List[Dict[str, Any]] = []

    grid = itertools.product(sorted(set(cfg.qubit_counts)), sorted(set(cfg.edge_counts)), sorted(set(cfg.memory_units)))
    for num_qubits, edges, capacity in grid:
        q = _sweep_queue(cfg, capacity)
        report = evaluate_path(
            PathConfig(length, edges, capacity),
            q,
            cp,
            engine=engine,
            dwell=cfg.dwell,
            doubled_exponent=cfg.doubled_exponent,
            seed=derive_seed(cfg.seed, q.arrival_rate, q.serving_rate, capacity),
        )
        flip = flip_probability_from_fidelity(report.path_fidelity, cfg.mapping)
        code = RepetitionCode(CodeConfig.uniform(num_qubits, flip))
        # Both decoders see the same samples.
        seed = derive_seed(cfg.seed, "decode", num_qubits, edges, capacity)
        for decoder in DECODERS:
            result = code.logical_error_mc(decoder, cfg.trials, seed, max_workers=workers)
            rows.append({
                "K": num_qubits,
                "M": edges,
                "repeaters": edges - 1,
                "I": capacity,
                "fidelity": report.path_fidelity,
                "flip_probability": flip,
                "decoder": decoder,
                "p_exact": result.logical_error_exact,
                "p_mc": result.logical_error_mc,
                "stderr": result.mc_stderr,
                "trials": result.trials,
            })
    logger.info(f"decode-error: {len(rows)} rows")
    return to_frame(rows, DECODE_COLUMNS)


def network_config(cfg: ExperimentConfig) -> NetworkConfig:
    """Fixed parameters of the optimization; M, K and I come from the search space."""
    return NetworkConfig(
        total_length_km=cfg.path_lengths_km[0],
        arrival_rate=cfg.sweep_arrival_mhz * MHZ,
        serving_rate=cfg.sweep_serving_mhz * MHZ,
        eta=cfg.eta,
        light_speed=cfg.light_speed,
        time_constant_s=cfg.time_constant_s,
        decoder=cfg.decoder,
        mapping=cfg.mapping,
        threshold=cfg.threshold,
        literal_constraint=cfg.literal_constraint,
        doubled_exponent=cfg.doubled_exponent,
        dwell=cfg.dwell,
        queue_backend=cfg.queue_backend,
        served_target=cfg.served_target,
        seed=cfg.seed,
    )


def cmd_optimize(cfg: ExperimentConfig, workers: Optional[int] = None) -> Tuple[pd.DataFrame, Dict[str, Any]]:
    """
    Grid search over (M, K, I).

    The full table is always returned. When no row meets the fidelity
    constraint the summary has status "infeasible" and carries the best
    infeasible row instead of a best configuration.

    Returns:
        (full table, summary record)
    """
    space = SearchSpace(
        edge_counts=tuple(cfg.edge_counts),
        num_qubits=tuple(cfg.qubit_counts),
        memory_units=tuple(cfg.memory_units),
        base=network_config(cfg),
    )
    table, rejected = evaluate_grid(space, max_workers=workers, engine=_engine(cfg))

    summary: Dict[str, Any] = {"status": "ok"}
    try:
        result = select_best(table, cfg.threshold, rejected)
        summary.update(
            best_config=result.to_dict()["best_config"],
            objective_hz=result.objective,
            raw_rate_hz=result.raw_rate,
            accuracy=result.accuracy,
            path_fidelity=result.path_fidelity,
            feasible_count=result.feasible_count,
        )
    except InfeasibleProblemError as e:
        summary.update(
            status="infeasible",
            best_config=None,
            objective_hz=None,
            raw_rate_hz=None,
            accuracy=None,
            path_fidelity=None,
            feasible_count=0,
            best_infeasible_row=e.best_row,
        )

    rows = [
        {
            "M": r.edge_count,
            "repeaters": r.repeaters,
            "K": r.num_qubits,
            "I": r.memory_units,
            "t_swap_s": r.t_swap,
            "t_queue_s": r.t_queue,
            "t_total_s": r.t_total,
            "fidelity": r.path_fidelity,
            "cost": r.path_cost,
            "flip_probability": r.flip_probability,
            "logical_error": r.logical_error,
            "raw_rate_hz": r.raw_rate,
            "accuracy": r.accuracy,
            "objective_hz": r.objective,
            "feasible": r.feasible,
        }
        for r in table
    ]
    summary.update(
        evaluated=len(table),
        rejected=[{"M": m, "K": k, "I": i} for m, k, i in rejected],
        trends=trend_report(table),
        headline=headline_check(table, cfg.decoder),
        seed=cfg.seed,
        config_fingerprint=cfg.fingerprint(),
    )
    return to_frame(rows, OPTIMIZE_COLUMNS), summary


def reproduce_figures(cfg: ExperimentConfig, out_dir: Path, workers: Optional[int] = None) -> Dict[str, Any]:
    """
    Run every experiment and write its table into `out_dir`.

    The optimize table and summary are written even when no row is
    feasible; the returned optimize summary carries the status.
    """
    out_dir = Path(out_dir)
    suffix = cfg.format
    write_table(cmd_queue_wait(cfg, workers), out_dir / f"queue_wait.{suffix}", cfg.format)
    write_summary(queue_wait_summary(cfg), out_dir / "queue_wait_summary.json")
    write_table(cmd_fidelity_sweep(cfg, workers), out_dir / f"fidelity_sweep.{suffix}", cfg.format)
    write_table(cmd_decode_error(cfg, workers), out_dir / f"decode_error.{suffix}", cfg.format)
    table, summary = cmd_optimize(cfg, workers)
    write_table(table, out_dir / f"optimize.{suffix}", cfg.format)
    write_summary(summary, out_dir / "optimize_summary.json")
    return summary
