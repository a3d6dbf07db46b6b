"""Numerical tolerances and transform defaults shared by the checks."""

from typing import Final

# Relative residual limits
WARD_TOLERANCE: Final = 1e-10
FINITE_DIFFERENCE_TOLERANCE: Final = 1e-6
COLLAPSE_TOLERANCE: Final = 1e-10
SYMMETRY_TOLERANCE: Final = 1e-12
CONTRACTION_TOLERANCE: Final = 1e-3
NON_ANALYTICITY_TOLERANCE: Final = 1e-6
# Relative drift of each contraction gap ratio from the matching ratio of mus
CONTRACTION_RATIO_TOLERANCE: Final = 0.1

M2_TOLERANCE: Final = 1e-6
SPECTRAL_TOLERANCE: Final = 1e-6
SPECTRAL_INCONCLUSIVE: Final = 1e-3
ROUNDTRIP_TOLERANCE: Final = 1e-4

# Distance kept from domain boundaries when sampling
DOMAIN_MARGIN: Final = 1e-3

# Spectral transforms
SPECTRUM_SIZE: Final = 2 ** 16
SPECTRUM_WINDOW: Final = 200.0
ROUNDTRIP_SIZE: Final = 2 ** 18
ROUNDTRIP_WINDOW: Final = 2000.0
TAPER: Final = 0.1
