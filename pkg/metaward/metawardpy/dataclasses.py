from dataclasses import dataclass, field
from typing import Any, Optional, Union

from dataclasses_json import config, dataclass_json


def _encode_number(value: Union[float, complex]) -> Any:
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


# Algebra
@dataclass_json
@dataclass
class PairCheck:
    """One checked identity: lhs should equal rhs exactly"""

    lhs: str
    rhs: str
    residual_text: str
    zero: bool

    @classmethod
    def of(cls, lhs: str, rhs: str, residual) -> "PairCheck":
        """Build a check from its residual operator, kept as ``.residual``."""
        check = cls(lhs=lhs, rhs=rhs, residual_text=str(residual), zero=residual.is_zero)
        check.residual = residual
        return check


@dataclass_json
@dataclass
class AlgebraReport:
    """Exact verification of a family of commutator identities"""

    family: str
    pairs: list[PairCheck]
    all_zero: bool

    @classmethod
    def from_pairs(cls, family: str, pairs: list[PairCheck]) -> "AlgebraReport":
        return cls(family=family, pairs=pairs, all_zero=all(p.zero for p in pairs))

    def failures(self) -> list[PairCheck]:
        return [p for p in self.pairs if not p.zero]


# Correlators
@dataclass_json
@dataclass
class ResidualReport:
    """Ward-identity residuals of two-body generators on a correlator"""

    family: str
    generators: list[str]
    sample_points: int
    max_abs_residual: float
    max_rel_residual: float
    per_generator: dict[str, float]
    domain: str
    tolerance: float
    passed: bool


@dataclass_json
@dataclass
class WCollapseSample:
    u: float
    v: float
    w_re: float
    w_im: float
    g_re: float
    g_im: float
    normalized_re: float
    normalized_im: float
    curve_gap: float
    partner_u: Optional[float] = None
    pair_gap: Optional[float] = None


@dataclass_json
@dataclass
class WCollapseReport:
    """Dependence of the dual profile on the single variable w"""

    nu_sum: float
    mu: float
    samples: list[WCollapseSample]
    max_curve_gap: float
    max_pair_gap: float
    tolerance: float
    passed: bool


@dataclass_json
@dataclass
class SymmetryReport:
    family: str
    points: int
    max_rel_gap: float
    tolerance: float
    passed: bool


@dataclass_json
@dataclass
class CausalityReport:
    """Extended Schrödinger response against the plain one"""

    points: int
    causal_points: int
    max_rel_gap: float
    acausal_nonzero: int
    passed: bool


@dataclass_json
@dataclass
class RayScan:
    direction: str
    fixed: float
    coordinates: list[float]
    values: list[float]
    monotone_tail: bool
    decays: bool
    bounded_by_power: bool


@dataclass_json
@dataclass
class BoundednessReport:
    family: str
    rays: list[RayScan]
    passed: bool


@dataclass_json
@dataclass
class SingularityReport:
    """Values of a correlator approaching its singular locus"""

    family: str
    t: float
    locus_r: float
    distances: list[float]
    r_values: list[float]
    values: list[float]
    max_value: float
    threshold: float
    diverges: bool


@dataclass_json
@dataclass
class ContractionLimitReport:
    mus: list[float]
    gaps: list[float]
    ratios: list[float]
    final_gap: float
    monotone: bool
    linear: bool
    tolerance: float
    passed: bool


@dataclass_json
@dataclass
class NonAnalyticityReport:
    """Continuity across r=0 and the jump of the one-sided r-derivative"""

    family: str
    t: float
    left_value: float
    right_value: float
    continuity_gap: float
    left_slope: float
    right_slope: float
    jump: float
    expected_jump: float
    passed: bool


# Numerics
@dataclass_json
@dataclass
class QuadratureResult:
    """Outcome of an adaptive quadrature"""

    value: Union[float, complex] = field(metadata=config(encoder=_encode_number))
    abs_error_estimate: float
    evaluations: int
    intervals: int
    converged: bool


@dataclass_json
@dataclass
class HardyReport:
    params: dict[str, float]
    value: float
    closed_form: float
    rel_gap: float
    abs_error_estimate: float
    evaluations: int
    tolerance: float
    passed: bool


@dataclass_json
@dataclass
class SpectrumReport:
    """Spectral one-sidedness of the dual profile"""

    params: dict[str, float]
    N: int
    L: float
    window: str
    negative_fraction: float
    positive_fraction: float
    wrong_side_fraction: float
    total_energy: float
    closed_energy: float
    energy_gap: float
    tail_estimate: float
    mean_frequency: float
    inconclusive: bool
    passed: bool


@dataclass_json
@dataclass
class RoundtripReport:
    params: dict[str, float]
    N: int
    L: float
    window: str
    bulk: list[float]
    shape_gap: float
    max_deviation_at: float
    amplitude_gap: float
    reconstruction_gap: float
    bridge_value: float
    bridge_expected: float
    bridge_gap: float
    tolerance: float
    passed: bool
