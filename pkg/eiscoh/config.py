"""
Run configuration for eiscoh.

Features:
- Module-level defaults for every tunable (enumeration cap, quadrature budgets, seeds)
- INI config file named by $EISCOH_CONFIG (or --config), one section per subcommand
- Precedence: built-in defaults < [defaults] section < [<subcommand>] section < CLI flags
- Frozen RunConfig / QuadratureConfig validated before any computation
- Logging setup shared by the CLI and the batch scripts
"""

import configparser
import dataclasses
import logging
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError

# =============================================================================
# CONFIGURATION
# =============================================================================

CONFIG_ENV_VAR = "EISCOH_CONFIG"
REPORT_SCHEMA = "eiscoh.report/1"

SUBCOMMANDS = ("weyl", "kostant", "constant-term", "intertwine", "field", "diagram")

# Exhaustive W_{n,inf} enumeration is refused above this many elements
ENUMERATION_CAP = 10**7

# The length census only histograms lengths, so it tolerates a larger group
CENSUS_CAP = 10**9

# Working precision (decimal digits) for embeddings and numerical cross-checks
MP_DIGITS = 30
NUMERIC_CHECK_TOLERANCE = 1e-20

QUADRATURE_METHODS = ("radial-iterated", "tensor-grid", "monte-carlo")
DEFAULT_METHOD = "radial-iterated"
DEFAULT_TOLERANCES = {
    "radial-iterated": 1e-8,
    "tensor-grid": 1e-6,
    "monte-carlo": 1e-2,
}
# Nodes per side of the double-exponential grids (total 2*nodes + 1 per axis)
DEFAULT_NODES = {
    "radial-iterated": 32,
    "tensor-grid": 20,
    "monte-carlo": 0,
}
DEFAULT_SAMPLES = 10**6
DEFAULT_SEED = 20240601
DEFAULT_THREADS = 1
MAX_QUADRATURE_POINTS = 5 * 10**7

DEFAULT_FIELD = "gauss"
OUTPUT_FORMATS = ("json", "text")

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


# =============================================================================
# LOGGING SETUP
# =============================================================================

def setup_logging(level: int = logging.INFO, log_file: Path | None = None) -> None:
    """Configure root logging; stdout stays reserved for reports."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


# =============================================================================
# CONFIG OBJECTS
# =============================================================================

@dataclass(frozen=True)
class QuadratureConfig:
    """Numerical oracle settings for intertwine_numeric."""

    method: str = DEFAULT_METHOD
    nodes: int | None = None
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    max_points: int = MAX_QUADRATURE_POINTS
    tol: float | None = None

    def __post_init__(self):
        if self.method not in QUADRATURE_METHODS:
            raise ConfigError(
                f"unknown quadrature method {self.method!r}; expected one of {', '.join(QUADRATURE_METHODS)}"
            )
        if self.nodes is not None and self.nodes < 1:
            raise ConfigError(f"nodes must be positive, got {self.nodes}")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")

    @property
    def resolved_nodes(self) -> int:
        return self.nodes if self.nodes is not None else DEFAULT_NODES[self.method]

    @property
    def resolved_tol(self) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOLERANCES[self.method]


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one CLI invocation."""

    subcommand: str
    field: str = DEFAULT_FIELD
    poly: str | None = None
    n: int | None = None
    k: int | None = None
    eta: tuple[int, ...] | None = None
    eta_hi: int | None = None
    eta_lo: int | None = None
    beta: tuple[int, ...] | None = None
    sigma: tuple[str, ...] = ()
    quad: QuadratureConfig = dataclasses.field(default_factory=QuadratureConfig)
    output_format: str = "json"
    threads: int = DEFAULT_THREADS
    enumeration_cap: int = ENUMERATION_CAP
    self_test: bool = False
    options: tuple[str, ...] = ()

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.n is not None and self.n < 2:
            raise ConfigError(f"n must be at least 2, got {self.n}")
        if self.k is not None and self.n is not None and not 1 <= self.k <= self.n:
            raise ConfigError(f"k must lie in 1..{self.n}, got {self.k}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")
        if self.enumeration_cap < 1:
            raise ConfigError("enumeration cap must be positive")

    def has_option(self, name: str) -> bool:
        return name in self.options

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)


# =============================================================================
# INI LOADING
# =============================================================================

_INT_KEYS = {"n", "k", "eta_hi", "eta_lo", "nodes", "samples", "seed", "threads", "enumeration_cap"}
_FLOAT_KEYS = {"tol"}
_QUAD_KEYS = {f.name for f in fields(QuadratureConfig)}


def parse_int_list(text: str) -> tuple[int, ...]:
    """Parse '0,2,-1,4' into a tuple of ints."""
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(",") if part)
    except ValueError as e:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from e


def config_path_from_env() -> Path | None:
    value = os.environ.get(CONFIG_ENV_VAR)
    return Path(value) if value else None


def load_config_file(path: Path | None, subcommand: str) -> dict:
    """Read [defaults] and [<subcommand>] from an INI file into typed values."""
    if path is None:
        return {}
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")

    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as e:
        raise ConfigError(f"malformed config file {path}: {e}") from e

    raw: dict[str, str] = {}
    for section in ("defaults", subcommand):
        if parser.has_section(section):
            raw.update(parser.items(section))

    values = {}
    for key, text in raw.items():
        key = key.replace("-", "_")
        try:
            if key in _INT_KEYS:
                values[key] = int(text)
            elif key in _FLOAT_KEYS:
                values[key] = float(text)
            elif key in ("eta", "beta"):
                values[key] = parse_int_list(text)
            elif key == "sigma":
                values[key] = tuple(s.strip() for s in text.split(",") if s.strip())
            elif key in ("field", "poly", "method", "format"):
                values[key] = text.strip()
            else:
                raise ConfigError(f"unknown config key {key!r} in {path}")
        except ValueError as e:
            raise ConfigError(f"bad value for {key!r} in {path}: {text!r}") from e
    return values


def build_run_config(subcommand: str, file_values: dict, cli_values: dict) -> RunConfig:
    """Merge file values and CLI values (CLI wins) into a validated RunConfig."""
    merged = dict(file_values)
    merged.update({key: value for key, value in cli_values.items() if value is not None})

    threads = merged.pop("threads", DEFAULT_THREADS)
    quad_values = {key: merged.pop(key) for key in list(merged) if key in _QUAD_KEYS and key != "threads"}
    quad = QuadratureConfig(threads=threads, **quad_values)

    if "format" in merged:
        merged["output_format"] = merged.pop("format")

    known = {f.name for f in fields(RunConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown settings: {', '.join(sorted(unknown))}")

    return RunConfig(subcommand=subcommand, quad=quad, threads=threads, **merged)
