"""
Experiment Configuration Schema

Pydantic model for experiment parameters. Config files are plain
`key = value` lines read with python-dotenv; list values are comma
separated and `#` starts a comment.

Example:
    # decoders.conf
    qubit_counts = 3, 5, 7
    memory_units = 1, 5, 9
    decoder = lut
"""

import io
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..errors import ConfigParseError, InvalidConfigError
from ..queueing.params import MHZ
from ..utils.hashing import config_fingerprint

_KEY_LINE = re.compile(r"^\s*(?:export\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*(=)?")


class DecoderKind(str, Enum):
    """Syndrome decoder"""
    MWM = "mwm"
    LUT = "lut"


class MappingKind(str, Enum):
    """Path fidelity -> flip probability mapping"""
    WERNER = "werner"
    BITFLIP = "bitflip"


class QueueBackend(str, Enum):
    """Memory queue engine"""
    MARKOV = "markov"
    ANALYTIC = "analytic"
    DES = "des"


class OutputFormat(str, Enum):
    """Table output format"""
    CSV = "csv"
    JSON = "json"


class DwellMode(str, Enum):
    """Which edges are charged the memory dwell"""
    PER_EDGE = "per_edge"
    ONCE = "once"


class ExperimentConfig(BaseModel):
    """All parameters of an experiment run, defaulted to the reference grid"""
    model_config = ConfigDict(extra="forbid", use_enum_values=True)

    light_speed: float = Field(default=2e8, gt=0, description="Speed of light in fiber (m/s)")
    path_lengths_km: List[float] = Field(default=[80.0, 120.0], min_length=1, description="Path lengths L (km)")
    eta: float = Field(default=0.2, ge=0, description="Fiber attenuation (dB/km)")
    arrival_rates_mhz: List[float] = Field(
        default=[0.05, 0.2, 0.5, 1.2],
        min_length=1,
        description="Qubit arrival rates lambda (MHz)"
    )
    serving_rates_mhz: List[float] = Field(
        default=[0.02, 0.025, 0.05, 0.1, 4.41],
        min_length=1,
        description="Memory serving rates gamma (MHz)"
    )
    sweep_arrival_mhz: float = Field(
        default=0.2,
        gt=0,
        description="Arrival rate used by fidelity-sweep, decode-error and optimize (MHz)"
    )
    sweep_serving_mhz: float = Field(
        default=0.025,
        gt=0,
        description="Serving rate used by fidelity-sweep, decode-error and optimize (MHz)"
    )
    qubit_counts: List[int] = Field(default=[3, 5, 7], min_length=1, description="Repetition code sizes K (odd)")
    edge_counts: List[int] = Field(default=[4, 8], min_length=1, description="Edges per path M")
    memory_units: List[int] = Field(
        default=list(range(1, 10)),
        min_length=1,
        description="Memory units I per repeater"
    )
    time_constant_s: float = Field(default=1e-3, gt=0, description="Memory time constant T (s)")
    decoder: DecoderKind = Field(default="lut", description="Decoder for the optimizer")
    mapping: MappingKind = Field(default="werner", description="Fidelity to flip probability mapping")
    threshold: float = Field(default=0.5, ge=0, le=1, description="Path fidelity feasibility threshold")
    seed: int = Field(default=12345, ge=0, description="Root seed for every stochastic stage")
    trials: int = Field(default=1_000_000, ge=10_000, description="Monte Carlo decoding trials")
    served_target: int = Field(default=1_000_000, ge=10_000, description="DES served qubits per run")
    replications: int = Field(default=1, ge=1, description="Independent DES replications")
    queue_backend: QueueBackend = Field(default="markov", description="Queue engine for downstream work")
    dwell: DwellMode = Field(default="per_edge", description="Memory dwell accounting")
    doubled_exponent: bool = Field(default=False, description="Use the 2^j swap-time exponent")
    literal_constraint: bool = Field(default=False, description="Feasibility as C_T > threshold")
    format: OutputFormat = Field(default="csv", description="Table output format")
    out: Optional[str] = Field(default=None, description="Output file or directory")

    @field_validator(
        "path_lengths_km", "arrival_rates_mhz", "serving_rates_mhz",
        "qubit_counts", "edge_counts", "memory_units",
        mode="before",
    )
    @classmethod
    def split_list(cls, value: Any) -> Any:
        """Accept comma separated strings for list fields"""
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        if isinstance(value, (int, float)):
            return [value]
        return value

    @field_validator("path_lengths_km", "arrival_rates_mhz", "serving_rates_mhz")
    @classmethod
    def positive_floats(cls, value: List[float]) -> List[float]:
        if any(not v > 0 for v in value):
            raise ValueError(f"all values must be > 0, got {value}")
        return value

    @field_validator("edge_counts", "memory_units")
    @classmethod
    def positive_ints(cls, value: List[int]) -> List[int]:
        if any(v < 1 for v in value):
            raise ValueError(f"all values must be >= 1, got {value}")
        return value

    @field_validator("qubit_counts")
    @classmethod
    def odd_ints(cls, value: List[int]) -> List[int]:
        if any(v < 1 or v % 2 == 0 for v in value):
            raise ValueError(f"repetition code sizes must be odd and >= 1, got {value}")
        return value

    @property
    def arrival_rates_hz(self) -> List[float]:
        return [rate * MHZ for rate in self.arrival_rates_mhz]

    @property
    def serving_rates_hz(self) -> List[float]:
        return [rate * MHZ for rate in self.serving_rates_mhz]

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """
        Parse `key = value` text.

        Raises:
            ConfigParseError: With the line number and key of the first problem
        """
        line_of: Dict[str, int] = {}
        for number, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            match = _KEY_LINE.match(line)
            if not match:
                raise ConfigParseError("expected 'key = value'", line=number)
            key = match.group(1)
            if match.group(2) is None:
                raise ConfigParseError("missing '='", line=number, key=key)
            if key in line_of:
                raise ConfigParseError(f"duplicate key (first set on line {line_of[key]})", line=number, key=key)
            if key not in cls.model_fields:
                raise ConfigParseError(
                    f"unknown key. Supported: {', '.join(cls.model_fields)}",
                    line=number,
                    key=key,
                )
            line_of[key] = number

        values = dotenv_values(stream=io.StringIO(text), interpolate=False)
        try:
            return cls.model_validate(dict(values))
        except ValidationError as e:
            error = e.errors()[0]
            key = str(error["loc"][0]) if error["loc"] else None
            raise ConfigParseError(error["msg"], line=line_of.get(key), key=key) from e

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """Read a config file."""
        path = Path(path)
        if not path.is_file():
            raise InvalidConfigError(f"Config file not found: {path}")
        return cls.from_text(path.read_text(encoding="utf-8"))

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with every non-None override applied and validated."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return type(self).model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            key = str(error["loc"][0]) if error["loc"] else None
            raise InvalidConfigError(f"Invalid value for '{key}': {error['msg']}") from e

    def to_text(self) -> str:
        """Effective config in the file format; parsing it back gives an equal model."""
        lines = ["# qcachenet experiment config"]
        for key, value in self.model_dump().items():
            if value is None:
                continue
            lines.append(f"{key} = {_render(value)}")
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        """Hash of every value that affects results; the output location is excluded."""
        return config_fingerprint(self.model_copy(update={"out": None}).to_text())


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ", ".join(_render(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)
