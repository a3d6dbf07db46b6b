"""Qualitative properties of the two-point functions"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Iterable, Optional, Sequence

import numpy as np

from ..const import (
    CONTRACTION_RATIO_TOLERANCE,
    CONTRACTION_TOLERANCE,
    DOMAIN_MARGIN,
    NON_ANALYTICITY_TOLERANCE,
    SYMMETRY_TOLERANCE,
)
from ..dataclasses import (
    BoundednessReport,
    CausalityReport,
    ContractionLimitReport,
    NonAnalyticityReport,
    RayScan,
    SingularityReport,
    SymmetryReport,
)
from ..errors import DomainError, UnsupportedFamilyError
from .base import (
    CorrelatorFamily,
    CorrelatorSpec,
    FieldPoints,
    correlator_for,
    standard_grid,
)

logger = logging.getLogger("metawardpy.properties")

DIVERGENCE_THRESHOLD = 1e6
DECAY_FRACTION = 1e-2

SYMMETRIC_FAMILIES = frozenset({CorrelatorFamily.ORTHO, CorrelatorFamily.META_FINAL, CorrelatorFamily.CGA})
BOUNDED_FAMILIES = SYMMETRIC_FAMILIES
# Families whose value depends on the rapidity gamma
RAPIDITY_FAMILIES = frozenset({CorrelatorFamily.META_FINAL, CorrelatorFamily.CGA})

DEFAULT_RAY = tuple(10.0 ** k for k in range(9))
DEFAULT_MUS = (1e-1, 1e-2, 1e-3, 1e-4)
SINGULARITY_DISTANCES = (1e-1, 1e-2, 1e-3, 1e-4)
CONTRACTION_RATIOS = (0.25, 0.5, 1.0)


def _require(spec: CorrelatorSpec, families: Iterable[CorrelatorFamily], check: str) -> None:
    if spec.family not in families:
        raise UnsupportedFamilyError(spec.family, check)


def _rel_gap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.finfo(float).tiny)
    return np.abs(a - b) / scale


def check_symmetry(spec: CorrelatorSpec, grid: Optional[FieldPoints] = None,
                   tolerance: float = SYMMETRY_TOLERANCE) -> SymmetryReport:
    """C(t, r) = C(-t, -r) on the grid."""
    _require(spec, SYMMETRIC_FAMILIES, "check_symmetry")
    if spec.x1 != spec.x2 or spec.gamma1 != spec.gamma2:
        raise DomainError("x1 = x2 and gamma1 = gamma2", "symmetry compares a field with itself")
    correlator = correlator_for(spec)
    points = grid if grid is not None else standard_grid(with_zeta=False)
    points = points.select(correlator.inside(points, DOMAIN_MARGIN)
                           & correlator.inside(points.mirrored(), DOMAIN_MARGIN))
    gap = _rel_gap(correlator.evaluate(points), correlator.evaluate(points.mirrored()))
    max_gap = float(np.max(gap, initial=0.0))
    logger.info("Symmetry of %s: max relative gap %.3g", spec.family, max_gap)
    return SymmetryReport(family=str(spec.family), points=len(points), max_rel_gap=max_gap,
                          tolerance=tolerance, passed=max_gap <= tolerance)


def check_causality(spec: CorrelatorSpec, grid: Optional[FieldPoints] = None,
                    tolerance: float = SYMMETRY_TOLERANCE) -> CausalityReport:
    """The causal response equals the plain Schrödinger form for M t > 0 and vanishes otherwise."""
    _require(spec, (CorrelatorFamily.SCHR, CorrelatorFamily.SCHR_EXT), "check_causality")
    points = grid if grid is not None else standard_grid(with_zeta=False)
    points = points.select(points.t != 0)
    causal = spec.M1 * points.t > 0
    response = correlator_for(spec.with_family(CorrelatorFamily.SCHR_EXT)).evaluate(points)
    plain = correlator_for(spec.with_family(CorrelatorFamily.SCHR)).evaluate(points.select(causal))
    gap = _rel_gap(response[causal], plain)
    max_gap = float(np.max(gap, initial=0.0))
    acausal_nonzero = int(np.count_nonzero(response[~causal]))
    return CausalityReport(points=len(points), causal_points=int(causal.sum()), max_rel_gap=max_gap,
                           acausal_nonzero=acausal_nonzero,
                           passed=max_gap <= tolerance and acausal_nonzero == 0)


def _scan(spec: CorrelatorSpec, direction: str, fixed: float, coordinates: Sequence[float]) -> RayScan:
    coordinates = np.asarray(coordinates, dtype=float)
    if direction.endswith("r"):
        t, r = np.full_like(coordinates, fixed), coordinates
    else:
        t, r = coordinates, np.full_like(coordinates, fixed)
    values = np.abs(correlator_for(spec).evaluate(FieldPoints(t, r)))
    peak = int(np.argmax(values))
    # underflow to exact zero ends a ray
    tail = values[peak:]
    power = np.power(np.abs(t), -2 * spec.x1)
    return RayScan(
        direction=direction,
        fixed=fixed,
        coordinates=coordinates.tolist(),
        values=values.tolist(),
        monotone_tail=bool(np.all((np.diff(tail) < 0) | (tail[1:] == 0))),
        decays=bool(values[-1] <= DECAY_FRACTION * values[peak]),
        bounded_by_power=bool(np.all(values <= power * (1 + 1e-12))),
    )


def check_boundedness(spec: CorrelatorSpec, ray: Sequence[float] = DEFAULT_RAY,
                      fixed: Sequence[float] = (1.0, -1.0)) -> BoundednessReport:
    """Scan rays |r| -> inf at fixed t and |t| -> inf at fixed r.

    Past its maximum each ray must decrease strictly and fall to a small
    fraction of the peak; every value must stay below |t|^-2x.
    """
    _require(spec, BOUNDED_FAMILIES, "check_boundedness")
    if spec.x1 <= 0:
        raise DomainError("x1 > 0", f"x1={spec.x1}")
    if spec.family in RAPIDITY_FAMILIES and spec.gamma1 <= 0:
        raise DomainError("gamma1 > 0", f"{spec.family} gamma1={spec.gamma1}")
    if spec.family is CorrelatorFamily.META_FINAL and spec.mu <= 0:
        raise DomainError("mu > 0", f"mu={spec.mu}")
    ray = np.asarray(ray, dtype=float)
    rays = []
    for value in fixed:
        for sign, label in ((1, "+"), (-1, "-")):
            rays.append(_scan(spec, f"{label}r", value, sign * ray))
            rays.append(_scan(spec, f"{label}t", value, sign * ray))
    passed = all(r.monotone_tail and r.decays and r.bounded_by_power for r in rays)
    logger.info("Boundedness of %s on %d rays: %s", spec.family, len(rays), passed)
    return BoundednessReport(family=str(spec.family), rays=rays, passed=passed)


def singularity_scan(spec: CorrelatorSpec, t: float = 1.0,
                     distances: Sequence[float] = SINGULARITY_DISTANCES,
                     threshold: float = DIVERGENCE_THRESHOLD) -> SingularityReport:
    """Approach mu r = -t from inside the domain of the naive meta-conformal form."""
    _require(spec, (CorrelatorFamily.META_NAIVE,), "singularity_scan")
    if t == 0:
        raise DomainError("t != 0")
    locus = -t / spec.mu
    r = locus + np.sign(t) * np.asarray(distances, dtype=float)
    values = np.abs(correlator_for(spec).evaluate(FieldPoints(np.full_like(r, t), r)))
    max_value = float(values.max())
    logger.info("Singularity scan at t=%g: max |C| = %.3g", t, max_value)
    return SingularityReport(family=str(spec.family), t=t, locus_r=locus, distances=list(distances),
                             r_values=r.tolist(), values=values.tolist(), max_value=max_value,
                             threshold=threshold, diverges=max_value > threshold)


def contraction_grid() -> FieldPoints:
    """Points with |r/t| in CONTRACTION_RATIOS, both signs, t in the standard set."""
    ts = standard_grid(with_zeta=False).t
    ts = np.unique(ts)
    t, ratio = np.meshgrid(ts, [s * k for k in CONTRACTION_RATIOS for s in (-1, 1)], indexing="ij")
    return FieldPoints(t.ravel(), (t * ratio).ravel())


def contraction_limit_check(spec: CorrelatorSpec, mus: Sequence[float] = DEFAULT_MUS,
                            grid: Optional[FieldPoints] = None,
                            tolerance: float = CONTRACTION_TOLERANCE) -> ContractionLimitReport:
    """The bounded meta-conformal form tends to the CGA form as mu -> 0.

    The gap is first order in mu: each ratio of successive gaps must match
    the ratio of the mus within CONTRACTION_RATIO_TOLERANCE.
    """
    if spec.gamma1 <= 0:
        raise DomainError("gamma1 > 0", f"gamma1={spec.gamma1}")
    points = grid if grid is not None else contraction_grid()
    points = points.select((points.r != 0) & (points.t != 0))
    limit = correlator_for(replace(spec, family=CorrelatorFamily.CGA)).evaluate(points)
    gaps = []
    for mu in mus:
        values = correlator_for(replace(spec, family=CorrelatorFamily.META_FINAL, mu=mu)).evaluate(points)
        gaps.append(float(np.max(np.abs(values - limit) / np.abs(limit))))
    ratios = [a / b for a, b in zip(gaps, gaps[1:])]
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    steps = [a / b for a, b in zip(mus, mus[1:])]
    linear = all(abs(ratio / step - 1) <= CONTRACTION_RATIO_TOLERANCE for ratio, step in zip(ratios, steps))
    logger.info("Contraction gaps %s", ", ".join(f"{g:.3g}" for g in gaps))
    return ContractionLimitReport(mus=list(mus), gaps=gaps, ratios=ratios, final_gap=gaps[-1],
                                  monotone=monotone, linear=linear, tolerance=tolerance,
                                  passed=monotone and linear and gaps[-1] <= tolerance)


def check_non_analyticity(spec: CorrelatorSpec, t: float = 1.0, h: float = 1e-9,
                          tolerance: float = NON_ANALYTICITY_TOLERANCE) -> NonAnalyticityReport:
    """Continuity of the bounded form across r = 0 and the jump of its r-slope.

    The one-sided slopes differ by 4 gamma/|t| * |t|^-2x.
    """
    _require(spec, (CorrelatorFamily.META_FINAL,), "check_non_analyticity")
    if spec.gamma1 <= 0:
        raise DomainError("gamma1 > 0", f"gamma1={spec.gamma1}")
    correlator = correlator_for(spec)
    sides = FieldPoints([t, t], [-h, h])
    left, right = correlator.evaluate(sides).real
    centre = correlator.evaluate(FieldPoints([t], [0.0])).real[0]
    left_slope, right_slope = correlator.gradient(sides).r.real
    expected = 4 * spec.gamma1 / abs(t) * abs(t) ** (-2 * spec.x1)
    jump = float(left_slope - right_slope)
    continuity = float(max(abs(left - centre), abs(right - centre)) / abs(centre))
    passed = continuity <= tolerance and abs(jump - expected) <= tolerance * expected
    return NonAnalyticityReport(family=str(spec.family), t=t, left_value=float(left), right_value=float(right),
                                continuity_gap=continuity, left_slope=float(left_slope),
                                right_slope=float(right_slope), jump=jump, expected_jump=expected,
                                passed=passed)
