"""
Repetition Code Decoding

A logical qubit is spread over K physical qubits, one per path. Each path
flips its qubit independently with probability p_i. Syndrome bit i is the
parity of qubits i and i+1, so every syndrome is consistent with exactly
two flip patterns: a pattern and its complement. Decoders pick one of the
two:
- mwm: the lighter pattern (minimum-weight matching on the 1-D chain)
- lut: the more likely pattern under the per-qubit priors

Decoding fails when the chosen correction is the complement of the actual
flips, i.e. their XOR is the all-ones logical flip.

Patterns and syndromes are handled as integers: bit i is qubit i.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from functools import cached_property
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .channels import check_probability
from .config import MAX_WORKERS, MC_CHUNK_SIZE
from .data_structures import DecodingReport
from .errors import CapacityError, InvalidConfigError, InvalidInputError

logger = logging.getLogger(__name__)

DECODERS = ("mwm", "lut")
MAPPINGS = ("werner", "bitflip")
MAX_EXACT_QUBITS = 25
MIN_MC_TRIALS = 10_000


def flip_probability_from_fidelity(fidelity: float, mapping: str = "werner") -> float:
    """
    Per-path bit-flip probability for a path of the given fidelity.

    werner: X and Y weight of an isotropic Pauli channel, 2(1 - f)/3
    bitflip: the whole infidelity as X, 1 - f
    """
    fidelity = check_probability(fidelity, "fidelity")
    if mapping == "werner":
        return 2.0 * (1.0 - fidelity) / 3.0
    if mapping == "bitflip":
        return 1.0 - fidelity
    raise InvalidConfigError(f"Unknown fidelity mapping '{mapping}'. Supported: {', '.join(MAPPINGS)}")


@dataclass(frozen=True)
class CodeConfig:
    """
    Repetition code over K independent paths.

    Attributes:
        num_qubits: K
        flip_probabilities: Bit-flip probability of each path
    """
    num_qubits: int
    flip_probabilities: Tuple[float, ...]

    def __post_init__(self):
        if isinstance(self.num_qubits, bool) or int(self.num_qubits) != self.num_qubits or self.num_qubits < 1:
            raise InvalidConfigError(f"Number of qubits must be a positive integer, got {self.num_qubits!r}")
        probabilities = tuple(
            check_probability(p, f"p[{i}]") for i, p in enumerate(self.flip_probabilities)
        )
        if len(probabilities) != self.num_qubits:
            raise InvalidConfigError(
                f"Expected {self.num_qubits} flip probabilities, got {len(probabilities)}"
            )
        if any(p > 0.5 for p in probabilities):
            logger.warning(f"Flip probabilities above 0.5 make decoding worse than guessing: {probabilities}")
        if self.num_qubits % 2 == 0:
            logger.debug(f"Even code size K={self.num_qubits}; decoder ties favour leaving qubit 1 alone")
        object.__setattr__(self, "num_qubits", int(self.num_qubits))
        object.__setattr__(self, "flip_probabilities", probabilities)

    @classmethod
    def uniform(cls, num_qubits: int, probability: float) -> "CodeConfig":
        return cls(num_qubits, (probability,) * num_qubits)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.flip_probabilities)) <= 1

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["flip_probabilities"] = list(self.flip_probabilities)
        return data


@dataclass(frozen=True)
class Syndrome:
    """
    Parity-check outcomes of a K-qubit repetition code.

    Attributes:
        bits: K - 1 bits, bit i = parity of qubits i and i+1
    """
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise InvalidInputError(f"Syndrome bits must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", bits)

    def to_int(self) -> int:
        return sum(bit << i for i, bit in enumerate(self.bits))

    @classmethod
    def from_int(cls, value: int, length: int) -> "Syndrome":
        return cls(tuple((value >> i) & 1 for i in range(length)))


def _check_pattern(pattern: Sequence[int], num_qubits: Optional[int] = None) -> Tuple[int, ...]:
    bits = tuple(int(b) for b in pattern)
    if num_qubits is not None and len(bits) != num_qubits:
        raise InvalidInputError(f"Flip pattern has {len(bits)} bits, expected {num_qubits}")
    if not bits:
        raise InvalidInputError("Flip pattern must not be empty")
    if any(b not in (0, 1) for b in bits):
        raise InvalidInputError(f"Flip pattern bits must be 0 or 1, got {bits}")
    return bits


def pattern_to_int(pattern: Sequence[int]) -> int:
    return sum(int(bit) << i for i, bit in enumerate(pattern))


def int_to_pattern(value: int, num_qubits: int) -> Tuple[int, ...]:
    return tuple((int(value) >> i) & 1 for i in range(num_qubits))


def syndrome(error_pattern: Sequence[int], num_qubits: Optional[int] = None) -> Syndrome:
    """
    Syndrome of a flip pattern.

    Raises:
        InvalidInputError: If the pattern length differs from num_qubits
    """
    bits = _check_pattern(error_pattern, num_qubits)
    return Syndrome(tuple(bits[i] ^ bits[i + 1] for i in range(len(bits) - 1)))


def consistent_patterns(s: Syndrome) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """The two flip patterns producing `s`: the one sparing qubit 1, and its complement."""
    pattern = [0]
    for bit in s.bits:
        pattern.append(pattern[-1] ^ bit)
    return tuple(pattern), tuple(1 - b for b in pattern)


def _check_syndrome(s: Syndrome, cfg: CodeConfig) -> None:
    if len(s.bits) != cfg.num_qubits - 1:
        raise InvalidInputError(
            f"Syndrome has {len(s.bits)} bits, expected {cfg.num_qubits - 1} for K={cfg.num_qubits}"
        )


def decode_mwm(s: Syndrome, cfg: CodeConfig) -> Tuple[int, ...]:
    """Lighter of the two consistent patterns; ties keep qubit 1 unflipped."""
    _check_syndrome(s, cfg)
    spare_first, flip_first = consistent_patterns(s)
    return spare_first if sum(spare_first) <= sum(flip_first) else flip_first


def _likelihood(pattern: Sequence[int], probabilities: Sequence[float]) -> float:
    return math.prod(p if bit else 1.0 - p for bit, p in zip(pattern, probabilities))


def decode_ml(s: Syndrome, cfg: CodeConfig) -> Tuple[int, ...]:
    """More likely of the two consistent patterns; ties fall back to decode_mwm."""
    _check_syndrome(s, cfg)
    spare_first, flip_first = consistent_patterns(s)
    spare_likelihood = _likelihood(spare_first, cfg.flip_probabilities)
    flip_likelihood = _likelihood(flip_first, cfg.flip_probabilities)
    if spare_likelihood > flip_likelihood:
        return spare_first
    if flip_likelihood > spare_likelihood:
        return flip_first
    return decode_mwm(s, cfg)


class LookupTable:
    """
    Immutable syndrome -> correction table.

    Corrections are stored as pattern integers indexed by syndrome integer,
    so the table can be shared read-only between workers.
    """

    def __init__(self, num_qubits: int, corrections: np.ndarray, decoder: str):
        self.num_qubits = num_qubits
        self.decoder = decoder
        self._corrections = corrections
        self._corrections.setflags(write=False)

    @property
    def corrections(self) -> np.ndarray:
        return self._corrections

    def __len__(self) -> int:
        return len(self._corrections)

    def __getitem__(self, s: Syndrome) -> Tuple[int, ...]:
        if len(s.bits) != self.num_qubits - 1:
            raise InvalidInputError(
                f"Syndrome has {len(s.bits)} bits, expected {self.num_qubits - 1}"
            )
        return int_to_pattern(self._corrections[s.to_int()], self.num_qubits)

    def items(self) -> Iterator[Tuple[Syndrome, Tuple[int, ...]]]:
        for index in range(len(self)):
            s = Syndrome.from_int(index, self.num_qubits - 1)
            yield s, self[s]


class RepetitionCode:
    """
    Exact and Monte Carlo logical error analysis of one code configuration.

    The 2^K flip patterns are enumerated as 2^(K-1) syndrome classes,
    each holding the pattern that spares qubit 1 and its complement.

    Example:
        code = RepetitionCode(CodeConfig.uniform(3, 0.1))
        code.logical_error_exact("mwm")   # 0.028
    """

    def __init__(self, cfg: CodeConfig):
        self.cfg = cfg
        self.num_qubits = cfg.num_qubits
        self.all_ones = (1 << cfg.num_qubits) - 1
        self.syndrome_mask = (1 << (cfg.num_qubits - 1)) - 1

    def _guard(self) -> None:
        if self.num_qubits > MAX_EXACT_QUBITS:
            raise CapacityError(
                f"K={self.num_qubits} exceeds the exhaustive-table limit of {MAX_EXACT_QUBITS}"
            )

    @cached_property
    def _classes(self) -> Dict[str, np.ndarray]:
        """Per syndrome class: representative, complement, syndrome, weight and likelihoods."""
        self._guard()
        k = self.num_qubits
        representatives = np.arange(1 << (k - 1), dtype=np.uint64) << np.uint64(1)
        spare_likelihood = np.ones(len(representatives))
        flip_likelihood = np.ones(len(representatives))
        weight = np.zeros(len(representatives), dtype=np.int64)
        for i, p in enumerate(self.cfg.flip_probabilities):
            bit = ((representatives >> np.uint64(i)) & np.uint64(1)).astype(bool)
            weight += bit
            spare_likelihood *= np.where(bit, p, 1.0 - p)
            flip_likelihood *= np.where(bit, 1.0 - p, p)
        syndromes = (representatives ^ (representatives >> np.uint64(1))) & np.uint64(self.syndrome_mask)
        return {
            "representatives": representatives,
            "complements": representatives ^ np.uint64(self.all_ones),
            "syndromes": syndromes,
            "weight": weight,
            "spare_likelihood": spare_likelihood,
            "flip_likelihood": flip_likelihood,
        }

    def _choose_representative(self, decoder: str) -> np.ndarray:
        classes = self._classes
        lighter = classes["weight"] <= self.num_qubits - classes["weight"]
        if decoder == "mwm":
            return lighter
        if decoder == "lut":
            spare, flip = classes["spare_likelihood"], classes["flip_likelihood"]
            return np.where(spare == flip, lighter, spare > flip)
        raise InvalidConfigError(f"Unknown decoder '{decoder}'. Supported: {', '.join(DECODERS)}")

    def build_table(self, decoder: str = "lut") -> LookupTable:
        """Syndrome -> correction table for either decoder."""
        classes = self._classes
        chosen = np.where(
            self._choose_representative(decoder),
            classes["representatives"],
            classes["complements"],
        )
        corrections = np.empty(len(chosen), dtype=np.uint64)
        corrections[classes["syndromes"]] = chosen
        return LookupTable(self.num_qubits, corrections, decoder)

    def logical_error_exact(self, decoder: str = "lut") -> float:
        """Sum of the probabilities of every pattern the decoder turns into a logical flip."""
        classes = self._classes
        keep = self._choose_representative(decoder)
        # Choosing a pattern fails exactly when the actual flips are its complement.
        failure = np.where(keep, classes["flip_likelihood"], classes["spare_likelihood"])
        return float(min(max(math.fsum(failure), 0.0), 1.0))

    def _count_failures(self, table: np.ndarray, trials: int, seed: np.random.SeedSequence) -> int:
        rng = np.random.default_rng(seed)
        probabilities = np.asarray(self.cfg.flip_probabilities)
        flips = rng.random((trials, self.num_qubits)) < probabilities
        place_values = np.left_shift(np.uint64(1), np.arange(self.num_qubits, dtype=np.uint64))
        patterns = (flips.astype(np.uint64) * place_values).sum(axis=1, dtype=np.uint64)
        syndromes = (patterns ^ (patterns >> np.uint64(1))) & np.uint64(self.syndrome_mask)
        residual = patterns ^ table[syndromes]
        return int(np.count_nonzero(residual == np.uint64(self.all_ones)))

    def logical_error_mc(
        self,
        decoder: str = "lut",
        trials: int = 1_000_000,
        seed: int = 0,
        max_workers: Optional[int] = None,
        chunk_size: Optional[int] = None,
    ) -> DecodingReport:
        """
        Monte Carlo estimate of the logical error probability.

        Trials are split into fixed-size chunks with seeds spawned from one
        SeedSequence; the estimate is identical for any worker count.
        """
        if trials < MIN_MC_TRIALS:
            raise InvalidConfigError(f"trials={trials} is below the minimum of {MIN_MC_TRIALS}")
        table = self.build_table(decoder).corrections
        chunk_size = chunk_size or MC_CHUNK_SIZE
        sizes = [chunk_size] * (trials // chunk_size)
        if trials % chunk_size:
            sizes.append(trials % chunk_size)
        seeds = np.random.SeedSequence(seed).spawn(len(sizes))

        with ThreadPoolExecutor(max_workers=max_workers or MAX_WORKERS) as executor:
            failures = sum(executor.map(
                lambda job: self._count_failures(table, *job), zip(sizes, seeds)
            ))

        estimate = failures / trials
        stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
        exact = self.logical_error_exact(decoder)
        logger.debug(
            f"K={self.num_qubits} {decoder}: mc={estimate:.6g}±{stderr:.2g} exact={exact:.6g}"
        )
        return DecodingReport(
            decoder=decoder,
            logical_error_exact=exact,
            logical_error_mc=estimate,
            mc_stderr=stderr,
            trials=trials,
            seed=seed,
            num_qubits=self.num_qubits,
        )


def build_lut(cfg: CodeConfig) -> LookupTable:
    """
    Maximum-likelihood syndrome -> correction table.

    Raises:
        CapacityError: If K exceeds the table size guard
    """
    return RepetitionCode(cfg).build_table("lut")


def logical_error_exact(cfg: CodeConfig, decoder: str = "lut") -> float:
    """Exact logical error probability by enumeration."""
    return RepetitionCode(cfg).logical_error_exact(decoder)


def logical_error_mc(cfg: CodeConfig, decoder: str, trials: int, seed: int) -> DecodingReport:
    """Seeded Monte Carlo logical error estimate with its exact counterpart."""
    return RepetitionCode(cfg).logical_error_mc(decoder, trials, seed)


def decoding_report(
    cfg: CodeConfig,
    decoder: str = "lut",
    trials: int = 1_000_000,
    seed: int = 0,
    max_workers: Optional[int] = None,
) -> DecodingReport:
    """Exact and Monte Carlo logical error for one code and decoder."""
    return RepetitionCode(cfg).logical_error_mc(decoder, trials, seed, max_workers=max_workers)
