"""Run configuration for the metaward command line."""
from __future__ import annotations

import csv
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import voluptuous as vol

from .const import (
    DEFAULT_N_MAX,
    GRID_COLUMNS,
    OUTPUT_FORMATS,
    ROUNDTRIP_SIZE,
    ROUNDTRIP_WINDOW,
    SPECTRUM_SIZE,
    SPECTRUM_WINDOW,
    SUBCOMMANDS,
    TAPER,
)
from .metawardpy.correlators import FieldPoints
from .metawardpy.errors import MetaWardError

_LOGGER = logging.getLogger(__name__)

CONF_SUBCOMMAND = "subcommand"
CONF_FAMILY = "family"
CONF_N_MAX = "nmax"
CONF_FORMAT = "format"
CONF_OUT = "out"
CONF_GRID = "grid"
CONF_TOL = "tol"
CONF_EXPRESSIONS = "expressions"

# Optional physical parameters; None means "formal symbol" for the algebra
# checks and "use the default" for the numeric ones.
PARAMETER_KEYS = ("x", "gamma", "nu1", "nu2", "mu", "c", "mass", "lam", "v", "t")

_optional_float = vol.Any(None, vol.Coerce(float))

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_SUBCOMMAND): vol.In(SUBCOMMANDS),
        vol.Optional(CONF_FAMILY, default=None): vol.Any(None, str),
        vol.Optional(CONF_N_MAX, default=DEFAULT_N_MAX): vol.All(vol.Coerce(int), vol.Range(min=-1)),
        vol.Optional(CONF_FORMAT, default="text"): vol.In(OUTPUT_FORMATS),
        vol.Optional(CONF_OUT, default=None): vol.Any(None, str),
        vol.Optional(CONF_GRID, default=None): vol.Any(None, str),
        vol.Optional(CONF_TOL, default=None): vol.Any(None, vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))),
        vol.Optional(CONF_EXPRESSIONS, default=list): [str],
        vol.Optional("size", default=None): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=16))),
        vol.Optional("window", default=None): vol.Any(None, vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))),
        vol.Optional("taper", default=TAPER): vol.All(vol.Coerce(float), vol.Range(min=0, max=1)),
        vol.Optional("literal_branches", default=False): bool,
        **{vol.Optional(key, default=None): _optional_float for key in PARAMETER_KEYS},
    },
    extra=vol.REMOVE_EXTRA,
)


@dataclass
class RunConfig:
    """Validated settings of one command-line run."""

    subcommand: str
    family: Optional[str] = None
    nmax: int = DEFAULT_N_MAX
    format: str = "text"
    out: Optional[str] = None
    grid: Optional[str] = None
    tol: Optional[float] = None
    expressions: list[str] = field(default_factory=list)
    size: Optional[int] = None
    window: Optional[float] = None
    taper: float = TAPER
    literal_branches: bool = False
    x: Optional[float] = None
    gamma: Optional[float] = None
    nu1: Optional[float] = None
    nu2: Optional[float] = None
    mu: Optional[float] = None
    c: Optional[float] = None
    mass: Optional[float] = None
    lam: Optional[float] = None
    v: Optional[float] = None
    t: Optional[float] = None

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)

    def get(self, key: str, default: Any) -> Any:
        value = getattr(self, key)
        return default if value is None else value

    def spectrum_shape(self) -> tuple[int, float]:
        if self.subcommand == "roundtrip":
            return self.size or ROUNDTRIP_SIZE, self.window or ROUNDTRIP_WINDOW
        return self.size or SPECTRUM_SIZE, self.window or SPECTRUM_WINDOW


def validate_input(data: dict[str, Any]) -> RunConfig:
    """Validate raw settings (e.g. an argparse namespace as a dict).

    Raises InvalidConfig with the schema message on bad input.
    """
    try:
        cleaned = CONFIG_SCHEMA(dict(data))
    except vol.Invalid as err:
        _LOGGER.error("Invalid configuration: %s", err)
        raise InvalidConfig(str(err)) from err

    if cleaned[CONF_SUBCOMMAND] == "commutator" and len(cleaned[CONF_EXPRESSIONS]) != 2:
        _LOGGER.error("commutator needs exactly two expressions")
        raise InvalidConfig("commutator needs exactly two expressions")

    if cleaned[CONF_TOL] is not None:
        _LOGGER.info("Tolerance overridden to %g for %s", cleaned[CONF_TOL], cleaned[CONF_SUBCOMMAND])

    if cleaned[CONF_GRID] is not None and not Path(cleaned[CONF_GRID]).is_file():
        _LOGGER.error("Grid file %s does not exist", cleaned[CONF_GRID])
        raise InvalidGridFile(f"Grid file {cleaned[CONF_GRID]} does not exist")

    return RunConfig(**cleaned)


def load_grid(path: str) -> FieldPoints:
    """Read sample points from a CSV file with header t,r,zeta1,zeta2."""
    rows = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != GRID_COLUMNS:
            raise InvalidGridFile(f"{path}: header must be {','.join(GRID_COLUMNS)}, got {reader.fieldnames}")
        for line, row in enumerate(reader, start=2):
            try:
                rows.append([float(row[column]) for column in GRID_COLUMNS])
            except (TypeError, ValueError) as err:
                raise InvalidGridFile(f"{path}:{line}: {err}") from err
    if not rows:
        raise InvalidGridFile(f"{path}: no sample points")
    values = np.array(rows)
    if not np.all(np.isfinite(values)):
        raise InvalidGridFile(f"{path}: non-finite coordinates")
    _LOGGER.debug("Loaded %d grid points from %s", len(rows), path)
    return FieldPoints(values[:, 0], values[:, 1], values[:, 2], values[:, 3])


class InvalidConfig(MetaWardError):
    """Error to indicate the run configuration is invalid."""


class InvalidGridFile(InvalidConfig):
    """Error to indicate a grid file cannot be used."""
