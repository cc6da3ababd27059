"""
Rate / Accuracy Optimizer

Evaluates the accuracy-weighted logical qubit rate

    R = (1 / t_w) * (1 - P_logical(K, C_T))

for every network configuration in a grid and returns the best feasible
one. Edge length and swap rounds are derived from the edge count M, so
the search runs over (M, K, I). Single configurations may also mix paths
of different (M, I); the decoder then sees unequal flip probabilities.
"""
import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .channels import PureState, check_probability
from .config import MAX_WORKERS
from .data_structures import EvaluationRow, OptimizationResult, PathReport
from .errors import InfeasibleProblemError, InfiniteRateError, InvalidConfigError
from .path_fidelity import ChannelParams, PathConfig, evaluate_path
from .queueing import QueueEngine, QueueParams
from .repetition_code import CodeConfig, RepetitionCode, flip_probability_from_fidelity
from .swap_timing import SPEED_OF_LIGHT_FIBER
from .utils.hashing import derive_seed

logger = logging.getLogger(__name__)

HEADLINE_RATE_HZ = 35e3
HEADLINE_ACCURACY = 0.85


@dataclass(frozen=True)
class NetworkConfig:
    """
    Full configuration of a K-path network.

    Every path has the same (M, I) unless `path_mix` lists one (M, I) pair
    per path; edge_count and memory_units are then ignored.

    Attributes:
        total_length_km: Path length L
        edge_count: Edges per path M
        num_qubits: Paths / physical qubits K
        memory_units: Memory units I per repeater
        arrival_rate: lambda (Hz)
        serving_rate: gamma (Hz)
        eta: Fiber attenuation (dB/km)
        light_speed: Speed of light in fiber (m/s)
        time_constant_s: Memory time constant T (s)
        decoder: mwm or lut
        mapping: Fidelity -> flip probability mapping (werner or bitflip)
        threshold: Feasibility threshold on path fidelity
        literal_constraint: Read the threshold as C_T > threshold instead
        doubled_exponent: Use the 2^j swap-time variant
        dwell: per_edge or once
        queue_backend: markov, analytic or des
        served_target: DES served customers per evaluation
        seed: Root seed for DES queue evaluations
        input_state: State whose fidelity is tracked
        path_mix: Per-path (M, I) pairs of a mixed network
    """
    total_length_km: float = 80.0
    edge_count: int = 4
    num_qubits: int = 3
    memory_units: int = 1
    arrival_rate: float = 0.2e6
    serving_rate: float = 0.025e6
    eta: float = 0.2
    light_speed: float = SPEED_OF_LIGHT_FIBER
    time_constant_s: float = 1e-3
    decoder: str = "lut"
    mapping: str = "werner"
    threshold: float = 0.5
    literal_constraint: bool = False
    doubled_exponent: bool = False
    dwell: str = "per_edge"
    queue_backend: str = "markov"
    served_target: int = 1_000_000
    seed: int = 0
    input_state: PureState = field(default_factory=PureState.zero)
    path_mix: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        check_probability(self.threshold, "threshold")
        if self.path_mix:
            mix = tuple((int(m), int(i)) for m, i in self.path_mix)
            if len(mix) != self.num_qubits:
                raise InvalidConfigError(f"path_mix has {len(mix)} paths, expected K={self.num_qubits}")
            if any(m < 1 or i < 1 for m, i in mix):
                raise InvalidConfigError(f"path_mix entries must be positive (M, I) pairs, got {mix}")
            object.__setattr__(self, "path_mix", mix)

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.edge_count, self.num_qubits, self.memory_units)

    def paths(self) -> Tuple[Tuple[int, int], ...]:
        """(M, I) of every path."""
        return self.path_mix or ((self.edge_count, self.memory_units),) * self.num_qubits

    def path_config(self, edge_count: Optional[int] = None, memory_units: Optional[int] = None) -> PathConfig:
        return PathConfig(
            self.total_length_km,
            edge_count or self.edge_count,
            memory_units or self.memory_units,
            self.input_state,
        )

    def queue_params(self, memory_units: Optional[int] = None) -> QueueParams:
        return QueueParams(self.arrival_rate, self.serving_rate, memory_units or self.memory_units)

    def channel_params(self) -> ChannelParams:
        return ChannelParams(self.eta, self.time_constant_s, self.light_speed)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["input_state"] = self.input_state.to_dict()
        return data


def raw_rate(t_total: float) -> float:
    """
    Raw logical qubit rate 1 / t_w in Hz.

    Raises:
        InfiniteRateError: If t_total is not positive
    """
    if not t_total > 0:
        raise InfiniteRateError(f"Total time overhead {t_total!r} s gives an infinite rate")
    return 1.0 / t_total


def accuracy_weighted_rate(t_total: float, code: CodeConfig, decoder: str) -> Tuple[float, float, float]:
    """(raw rate, accuracy, objective) for a given overhead and code."""
    rate = raw_rate(t_total)
    accuracy = 1.0 - RepetitionCode(code).logical_error_exact(decoder)
    return rate, accuracy, rate * accuracy


def is_feasible(path_fidelity: float, threshold: float, literal_constraint: bool = False) -> bool:
    """f_T >= threshold, or C_T > threshold under the literal reading."""
    if literal_constraint:
        return (1.0 - path_fidelity) > threshold
    return path_fidelity >= threshold


def evaluate_config(cfg: NetworkConfig, engine: Optional[QueueEngine] = None) -> EvaluationRow:
    """
    Evaluate one configuration.

    Each distinct (M, I) path is evaluated once. The logical qubit waits
    for its slowest path, and the constraint must hold on the worst one.

    Raises:
        InfiniteRateError: If the slowest path has zero time overhead
    """
    engine = engine or QueueEngine(cfg.queue_backend, served_target=cfg.served_target, seed=cfg.seed)
    reports: Dict[Tuple[int, int], PathReport] = {}
    for edge_count, memory_units in sorted(set(cfg.paths())):
        reports[(edge_count, memory_units)] = evaluate_path(
            cfg.path_config(edge_count, memory_units),
            cfg.queue_params(memory_units),
            cfg.channel_params(),
            engine=engine,
            dwell=cfg.dwell,
            doubled_exponent=cfg.doubled_exponent,
            seed=derive_seed(cfg.seed, cfg.arrival_rate, cfg.serving_rate, memory_units),
        )

    path_reports = [reports[p] for p in cfg.paths()]
    flips = tuple(flip_probability_from_fidelity(r.path_fidelity, cfg.mapping) for r in path_reports)
    slowest = max(path_reports, key=lambda r: r.t_total)
    worst = min(r.path_fidelity for r in path_reports)
    rate, accuracy, objective = accuracy_weighted_rate(
        slowest.t_total, CodeConfig(cfg.num_qubits, flips), cfg.decoder
    )

    edge_count, memory_units = cfg.key[0], cfg.key[2]
    if cfg.path_mix:
        edge_count = max(m for m, _ in cfg.path_mix)
        memory_units = max(i for _, i in cfg.path_mix)
    row = EvaluationRow(
        edge_count=edge_count,
        num_qubits=cfg.num_qubits,
        memory_units=memory_units,
        raw_rate=rate,
        accuracy=accuracy,
        objective=objective,
        path_fidelity=worst,
        path_cost=1.0 - worst,
        flip_probability=max(flips),
        logical_error=1.0 - accuracy,
        t_swap=slowest.t_swap,
        t_queue=slowest.t_queue,
        t_total=slowest.t_total,
        feasible=is_feasible(worst, cfg.threshold, cfg.literal_constraint),
        paths=cfg.path_mix,
    )
    logger.debug(f"row {row.key}: rate={rate:.6g} acc={accuracy:.6g} f_T={worst:.6g}")
    return row


@dataclass(frozen=True)
class SearchSpace:
    """
    Decision variables of the optimization and the fixed parameters.

    Attributes:
        edge_counts: Candidate M values (l = L/M and J follow from M)
        num_qubits: Candidate K values
        memory_units: Candidate I values
        base: Fixed parameters; its M, K, I are overridden per row
    """
    edge_counts: Tuple[int, ...]
    num_qubits: Tuple[int, ...]
    memory_units: Tuple[int, ...]
    base: NetworkConfig = field(default_factory=NetworkConfig)

    def __post_init__(self):
        for name in ("edge_counts", "num_qubits", "memory_units"):
            values = tuple(getattr(self, name))
            if not values:
                raise InvalidConfigError(f"Search space '{name}' must not be empty")
            object.__setattr__(self, name, values)
        if self.base.path_mix:
            raise InvalidConfigError("The search space varies (M, I) itself; its base must not set path_mix")

    def configs(self) -> List[NetworkConfig]:
        """Every configuration, in lexicographic (M, K, I) order."""
        return [
            replace(self.base, edge_count=m, num_qubits=k, memory_units=i)
            for m, k, i in itertools.product(
                sorted(set(self.edge_counts)),
                sorted(set(self.num_qubits)),
                sorted(set(self.memory_units)),
            )
        ]

    def __len__(self) -> int:
        return len(set(self.edge_counts)) * len(set(self.num_qubits)) * len(set(self.memory_units))


def best_row(rows: Sequence[EvaluationRow]) -> EvaluationRow:
    """Highest objective; ties go to the smaller (M, K, I)."""
    return min(rows, key=lambda r: (-r.objective, r.key))


def _evaluate_or_reject(cfg: NetworkConfig, engine: Optional[QueueEngine]) -> Optional[EvaluationRow]:
    try:
        return evaluate_config(cfg, engine)
    except InfiniteRateError as e:
        logger.warning(f"Rejecting degenerate configuration (M, K, I)={cfg.key}: {e}")
        return None


def evaluate_grid(
    space: SearchSpace,
    max_workers: Optional[int] = None,
    shuffle_seed: Optional[int] = None,
    engine: Optional[QueueEngine] = None,
) -> Tuple[List[EvaluationRow], List[Tuple[int, int, int]]]:
    """
    Evaluate every configuration of the search space.

    Degenerate rows (zero time overhead) are dropped with a warning.

    Returns:
        (rows ordered by (M, K, I), keys of the rejected rows)
    """
    configs = space.configs()
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(configs)
    logger.info(f"Evaluating {len(configs)} configurations")

    with ThreadPoolExecutor(max_workers=max_workers or MAX_WORKERS) as executor:
        results = list(executor.map(lambda c: _evaluate_or_reject(c, engine), configs))

    rows = sorted((r for r in results if r is not None), key=lambda r: r.key)
    rejected = sorted(c.key for c, r in zip(configs, results) if r is None)
    return rows, rejected


def select_best(
    rows: Sequence[EvaluationRow],
    threshold: float,
    rejected: Sequence[Tuple[int, int, int]] = (),
) -> OptimizationResult:
    """
    Best feasible row of an evaluated table.

    Raises:
        InfeasibleProblemError: If no row meets the fidelity constraint
    """
    feasible = [r for r in rows if r.feasible]
    if not feasible:
        raise InfeasibleProblemError(
            f"No configuration meets the fidelity threshold {threshold}",
            best_row=best_row(rows).to_dict() if rows else None,
        )

    best = best_row(feasible)
    logger.info(
        f"Best (M, K, I)={best.key}: objective={best.objective:.6g} Hz "
        f"rate={best.raw_rate:.6g} Hz accuracy={best.accuracy:.6g}"
    )
    return OptimizationResult(
        best_config=best.key,
        objective=best.objective,
        raw_rate=best.raw_rate,
        accuracy=best.accuracy,
        path_fidelity=best.path_fidelity,
        feasible_count=len(feasible),
        table=list(rows),
        rejected=list(rejected),
    )


def grid_search(
    space: SearchSpace,
    max_workers: Optional[int] = None,
    shuffle_seed: Optional[int] = None,
    engine: Optional[QueueEngine] = None,
) -> OptimizationResult:
    """
    Exhaustively evaluate the search space and pick the best feasible row.

    Args:
        space: Search space
        max_workers: Thread pool size for row evaluations
        shuffle_seed: Evaluate rows in a permuted order (result is unchanged)
        engine: Shared queue engine

    Raises:
        InfeasibleProblemError: If no row meets the fidelity constraint
    """
    rows, rejected = evaluate_grid(space, max_workers, shuffle_seed, engine)
    return select_best(rows, space.base.threshold, rejected)


def trend_report(rows: Sequence[EvaluationRow]) -> Dict[str, Any]:
    """
    Adjacent-I comparisons at fixed (M, K).

    Counts how often the raw rate rises (or stays flat) and the accuracy
    falls (or stays flat) when one memory unit is added.
    """
    grouped: Dict[Tuple[int, int], List[EvaluationRow]] = {}
    for row in rows:
        grouped.setdefault((row.edge_count, row.num_qubits), []).append(row)

    comparisons = 0
    rate_up = 0
    rate_down = 0
    accuracy_down = 0
    for group in grouped.values():
        group.sort(key=lambda r: r.memory_units)
        for before, after in zip(group, group[1:]):
            comparisons += 1
            rate_up += after.raw_rate >= before.raw_rate
            rate_down += after.raw_rate <= before.raw_rate
            accuracy_down += after.accuracy <= before.accuracy

    def fraction(count: int) -> float:
        return count / comparisons if comparisons else float("nan")

    return {
        "comparisons": comparisons,
        "rate_nondecreasing_fraction": fraction(rate_up),
        "rate_nonincreasing_fraction": fraction(rate_down),
        "accuracy_nonincreasing_fraction": fraction(accuracy_down),
    }


def headline_check(rows: Sequence[EvaluationRow], decoder: str) -> Dict[str, Any]:
    """
    Compare the K=7, I=9 row (best over M) with ">35 kHz at accuracy >0.85".

    The absolute numbers depend on the memory time constant T, so the
    outcome is reported, never enforced.
    """
    candidates = [r for r in rows if r.num_qubits == 7 and r.memory_units == 9]
    result: Dict[str, Any] = {
        "reference": f"rate > {HEADLINE_RATE_HZ:.0f} Hz, accuracy > {HEADLINE_ACCURACY}",
        "decoder": decoder,
        "note": "absolute values scale with the memory time constant T",
    }
    if decoder != "lut" or not candidates:
        result.update(status="n/a", rate=None, accuracy=None, M=None)
        return result

    row = best_row(candidates)
    passed = row.raw_rate > HEADLINE_RATE_HZ and row.accuracy > HEADLINE_ACCURACY
    result.update(
        status="pass" if passed else "fail",
        rate=row.raw_rate,
        accuracy=row.accuracy,
        M=row.edge_count,
    )
    if not passed:
        logger.warning(
            f"Headline not reproduced: rate={row.raw_rate:.6g} Hz accuracy={row.accuracy:.6g}"
        )
    return result
