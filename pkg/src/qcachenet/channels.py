"""
Single-Qubit Pauli Error Channels

Noise model for one qubit travelling over a fiber edge and waiting in a
repeater memory:
- Fiber attenuation as a depolarizing channel
- Memory dwell as a bit-flip channel
- Channel application on 2x2 density matrices
- Uhlmann fidelity and the per-edge cost C = 1 - f
"""
import logging
import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, Tuple

import numpy as np

from .errors import (
    InvalidConfigError,
    InvalidProbabilityError,
    InvalidStateError,
    NumericalFailureError,
)

logger = logging.getLogger(__name__)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)

# Symplectic (x, z) labels of I, X, Y, Z; the product of two Paulis (up to
# phase) has label a XOR b.
_SYMPLECTIC = (0b00, 0b10, 0b11, 0b01)
_FROM_SYMPLECTIC = {label: index for index, label in enumerate(_SYMPLECTIC)}

PROBABILITY_TOLERANCE = 1e-12
STATE_TOLERANCE = 1e-10


def check_probability(p: float, name: str = "p") -> float:
    """
    Validate a probability, clamping round-off within tolerance.

    Raises:
        InvalidProbabilityError: If p lies outside [0, 1] by more than 1e-12
    """
    if not math.isfinite(p) or p < -PROBABILITY_TOLERANCE or p > 1 + PROBABILITY_TOLERANCE:
        raise InvalidProbabilityError(f"{name}={p!r} is not a probability in [0, 1]")
    return min(max(float(p), 0.0), 1.0)


@dataclass(frozen=True)
class PureState:
    """
    Single-qubit pure state stored as a unit Bloch vector.

    Attributes:
        bloch_vector: (x, y, z) with x^2 + y^2 + z^2 = 1
    """
    bloch_vector: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        vector = tuple(float(v) for v in self.bloch_vector)
        if len(vector) != 3:
            raise InvalidStateError(f"Bloch vector must have 3 components, got {len(vector)}")
        norm = math.sqrt(sum(v * v for v in vector))
        if abs(norm - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidStateError(f"Bloch vector norm {norm!r} is not 1 (pure state required)")
        object.__setattr__(self, "bloch_vector", vector)

    @classmethod
    def zero(cls) -> "PureState":
        return cls((0.0, 0.0, 1.0))

    @classmethod
    def one(cls) -> "PureState":
        return cls((0.0, 0.0, -1.0))

    @classmethod
    def plus(cls) -> "PureState":
        return cls((1.0, 0.0, 0.0))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "PureState":
        """Build from polar angle theta and azimuth phi (radians)."""
        return cls((
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        ))

    @classmethod
    def from_amplitudes(cls, alpha: complex, beta: complex) -> "PureState":
        """Build from amplitudes of |0> and |1>; normalizes the pair."""
        norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if norm == 0:
            raise InvalidStateError("Amplitude pair (0, 0) is not a state")
        alpha, beta = complex(alpha) / norm, complex(beta) / norm
        overlap = alpha.conjugate() * beta
        x, y = 2 * overlap.real, 2 * overlap.imag
        z = abs(alpha) ** 2 - abs(beta) ** 2
        length = math.sqrt(x * x + y * y + z * z)
        return cls((x / length, y / length, z / length))

    @classmethod
    def from_name(cls, name: str) -> "PureState":
        """Look up a named state: zero, one, plus, minus."""
        named = {
            "zero": (0.0, 0.0, 1.0),
            "one": (0.0, 0.0, -1.0),
            "plus": (1.0, 0.0, 0.0),
            "minus": (-1.0, 0.0, 0.0),
        }
        if name not in named:
            raise InvalidConfigError(f"Unknown state '{name}'. Supported: {', '.join(named)}")
        return cls(named[name])

    def amplitudes(self) -> np.ndarray:
        """Return (alpha, beta) with a real non-negative alpha."""
        x, y, z = self.bloch_vector
        theta = math.acos(max(-1.0, min(1.0, z)))
        phi = math.atan2(y, x)
        return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])

    def density_matrix(self) -> np.ndarray:
        """rho = (I + x X + y Y + z Z) / 2."""
        x, y, z = self.bloch_vector
        return 0.5 * (PAULI_I + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)

    def to_dict(self) -> Dict[str, Any]:
        return {"bloch_vector": list(self.bloch_vector)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PureState":
        return cls(tuple(data["bloch_vector"]))


@dataclass(frozen=True)
class PauliChannel:
    """
    Pauli channel rho -> sum_v p_v O_v rho O_v^dagger.

    Attributes:
        p_i: Weight of the identity
        p_x: Weight of X (bit flip)
        p_y: Weight of Y
        p_z: Weight of Z (phase flip)
    """
    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        weights = [
            check_probability(w, name)
            for w, name in zip(self.as_tuple(), ("p_i", "p_x", "p_y", "p_z"))
        ]
        total = sum(weights)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidProbabilityError(f"Pauli weights sum to {total!r}, expected 1")
        for name, value in zip(("p_i", "p_x", "p_y", "p_z"), weights):
            object.__setattr__(self, name, value)

    @classmethod
    def identity(cls) -> "PauliChannel":
        return cls(1.0, 0.0, 0.0, 0.0)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.p_i, self.p_x, self.p_y, self.p_z)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())

    def compose(self, after: "PauliChannel") -> "PauliChannel":
        """
        Channel equal to applying self, then `after`.

        Pauli channels compose by convolving weights over the Pauli group
        modulo phase, so the result is again a Pauli channel.
        """
        weights = [0.0, 0.0, 0.0, 0.0]
        for a, p_a in enumerate(self.as_tuple()):
            for b, p_b in enumerate(after.as_tuple()):
                c = _FROM_SYMPLECTIC[_SYMPLECTIC[a] ^ _SYMPLECTIC[b]]
                weights[c] += p_a * p_b
        return PauliChannel(*weights)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PauliChannel":
        return cls(**data)


@dataclass(frozen=True)
class FiberParams:
    """
    Fiber segment parameters.

    Attributes:
        eta: Attenuation in dB/km
        length_km: Segment length in km
    """
    eta: float
    length_km: float

    def __post_init__(self):
        if not self.eta >= 0:
            raise InvalidConfigError(f"Attenuation eta={self.eta!r} dB/km must be >= 0")
        if not self.length_km >= 0:
            raise InvalidConfigError(f"Fiber length {self.length_km!r} km must be >= 0")


@dataclass(frozen=True)
class MemoryParams:
    """
    Quantum memory dwell parameters.

    Attributes:
        wait_time_s: Time the qubit spends in memory (seconds)
        time_constant_s: Loss-related memory time constant T (seconds)
    """
    wait_time_s: float
    time_constant_s: float

    def __post_init__(self):
        if not self.wait_time_s >= 0:
            raise InvalidConfigError(f"Wait time {self.wait_time_s!r} s must be >= 0")
        if not self.time_constant_s > 0:
            raise InvalidConfigError(f"Memory time constant {self.time_constant_s!r} s must be > 0")


def p_fiber(fp: FiberParams) -> float:
    """Error probability of a fiber segment: 1 - 10^(-eta*l/10)."""
    return -math.expm1(-fp.eta * fp.length_km / 10.0 * math.log(10.0))


def p_memory(mp: MemoryParams) -> float:
    """Error probability of a memory dwell: 1 - exp(-t_w/T)."""
    return -math.expm1(-mp.wait_time_s / mp.time_constant_s)


def fiber_channel(p: float) -> PauliChannel:
    """Depolarizing channel (1 - 0.75p, p/4, p/4, p/4)."""
    p = check_probability(p)
    return PauliChannel(1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)


def memory_channel(p: float) -> PauliChannel:
    """Bit-flip channel (1 - p, p, 0, 0)."""
    p = check_probability(p)
    return PauliChannel(1.0 - p, p, 0.0, 0.0)


def edge_channel(fp: FiberParams, mp: MemoryParams) -> PauliChannel:
    """Composite channel of one edge: fiber, then memory."""
    return fiber_channel(p_fiber(fp)).compose(memory_channel(p_memory(mp)))


def validate_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """
    Check that rho is a 2x2 Hermitian, unit-trace, PSD matrix.

    Returns:
        rho as a complex numpy array

    Raises:
        InvalidStateError: On any violated property
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidStateError(f"{name} must be 2x2, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError(f"{name} contains non-finite entries")
    if not np.allclose(rho, rho.conj().T, atol=STATE_TOLERANCE):
        raise InvalidStateError(f"{name} is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > STATE_TOLERANCE:
        raise InvalidStateError(f"{name} has trace {trace!r}, expected 1")
    eigenvalues = np.linalg.eigvalsh(rho)
    if eigenvalues.min() < -STATE_TOLERANCE:
        raise InvalidStateError(f"{name} is not positive semidefinite (eigenvalue {eigenvalues.min()!r})")
    return rho


def apply_channel(channel: PauliChannel, rho: np.ndarray) -> np.ndarray:
    """Apply a Pauli channel to a single-qubit density matrix."""
    rho = validate_density_matrix(rho)
    out = np.zeros((2, 2), dtype=complex)
    for weight, pauli in zip(channel.as_tuple(), PAULIS):
        if weight:
            out += weight * (pauli @ rho @ pauli.conj().T)
    return out


def _is_pure(rho: np.ndarray) -> bool:
    return abs(np.trace(rho @ rho).real - 1.0) <= PROBABILITY_TOLERANCE


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = np.linalg.eigh(rho)
    eigenvalues = np.where(eigenvalues > PROBABILITY_TOLERANCE, eigenvalues, 0.0)
    return (vectors * np.sqrt(eigenvalues)) @ vectors.conj().T


def _spectral_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    root = _psd_sqrt(rho)
    inner = root @ sigma @ root
    inner = 0.5 * (inner + inner.conj().T)
    eigenvalues = np.linalg.eigvalsh(inner)
    eigenvalues = np.where(eigenvalues > PROBABILITY_TOLERANCE, eigenvalues, 0.0)
    return float(np.sum(np.sqrt(eigenvalues)) ** 2)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """
    Uhlmann fidelity F = Tr[sqrt(sqrt(rho) sigma sqrt(rho))]^2.

    Computed by spectral decomposition. When either argument is pure the
    result is Tr(rho sigma), and the spectral value must agree with it.

    Raises:
        InvalidStateError: If either argument is not a density matrix
        NumericalFailureError: If the spectral and pure-state values disagree
    """
    rho = validate_density_matrix(rho, "rho")
    sigma = validate_density_matrix(sigma, "sigma")
    value = _spectral_fidelity(rho, sigma)

    if _is_pure(rho) or _is_pure(sigma):
        overlap = float(np.trace(rho @ sigma).real)
        if abs(overlap - value) > 1e-6:
            raise NumericalFailureError(
                f"Spectral fidelity {value!r} disagrees with pure-state overlap {overlap!r}"
            )
        value = overlap

    return min(max(value, 0.0), 1.0)


def edge_fidelity(state: PureState, fp: FiberParams, mp: MemoryParams) -> float:
    """Fidelity of a qubit after one edge's fiber and memory channels."""
    rho = state.density_matrix()
    after_fiber = apply_channel(fiber_channel(p_fiber(fp)), rho)
    after_memory = apply_channel(memory_channel(p_memory(mp)), after_fiber)
    return fidelity(rho, after_memory)


def edge_cost(state: PureState, fp: FiberParams, mp: MemoryParams) -> float:
    """Edge cost C_e = 1 - f for the given input state."""
    return 1.0 - edge_fidelity(state, fp, mp)
