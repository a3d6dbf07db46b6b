"""Constants for the metaward command line."""

from typing import Final

from .metawardpy.const import (  # noqa: F401
    COLLAPSE_TOLERANCE,
    CONTRACTION_RATIO_TOLERANCE,
    CONTRACTION_TOLERANCE,
    DOMAIN_MARGIN,
    FINITE_DIFFERENCE_TOLERANCE,
    M2_TOLERANCE,
    NON_ANALYTICITY_TOLERANCE,
    ROUNDTRIP_SIZE,
    ROUNDTRIP_TOLERANCE,
    ROUNDTRIP_WINDOW,
    SPECTRAL_INCONCLUSIVE,
    SPECTRAL_TOLERANCE,
    SPECTRUM_SIZE,
    SPECTRUM_WINDOW,
    SYMMETRY_TOLERANCE,
    TAPER,
    WARD_TOLERANCE,
)
from .metawardpy.correlators import GRID_VERSION, STANDARD_R, STANDARD_T, STANDARD_ZETA

DOMAIN: Final = "metaward"
TOOL_NAME: Final = "metaward"

EXIT_OK: Final = 0
EXIT_FAILURE: Final = 1
EXIT_USAGE: Final = 2

# Standard verification grid, versioned so reports stay comparable
GRID_AXES: Final = {"t": STANDARD_T, "r": STANDARD_R, "zeta": STANDARD_ZETA}
STANDARD_GRID_VERSION: Final = GRID_VERSION
GRID_COLUMNS: Final = ("t", "r", "zeta1", "zeta2")

# Physical defaults
DEFAULT_N_MAX: Final = 3
DEFAULT_X: Final = 1.0
DEFAULT_GAMMA: Final = 1.0
DEFAULT_NU: Final = 1.0
DEFAULT_MU: Final = 1.0
DEFAULT_C: Final = 0.0
DEFAULT_MASS: Final = 1.0
DEFAULT_LAMBDA: Final = 1.0
DEFAULT_T: Final = 1.0

CSV_FORMAT: Final = "%.17g"
OUTPUT_FORMATS: Final = ("text", "json", "csv")

ENV_THREADS: Final = "METAWARD_THREADS"

ALGEBRA_FAMILIES: Final = ("meta", "meta_dual", "cga", "ortho_chiral")
CORRELATOR_FAMILIES: Final = ("ortho", "schr", "schr_ext", "meta_naive", "meta_final", "cga", "dual")

SUBCOMMANDS: Final = (
    "algebra-check",
    "n-check",
    "dynsym-check",
    "chiral-check",
    "contract",
    "ward-residual",
    "reduced-system",
    "w-collapse",
    "correlator-table",
    "properties",
    "hardy-m2",
    "hardy-spectrum",
    "roundtrip",
    "singularity-demo",
    "commutator",
)
