"""Ward-identity residuals, the reduced Ward system and the w collapse"""
from __future__ import annotations

import logging
import math
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from ..const import COLLAPSE_TOLERANCE, DOMAIN_MARGIN, FINITE_DIFFERENCE_TOLERANCE, WARD_TOLERANCE
from ..dataclasses import ResidualReport, WCollapseReport, WCollapseSample
from ..diffop import DiffOp
from ..errors import DomainError, EmptyGridError, MetaWardError
from ..exactalg import REDUCED
from ..executor import parallel_map
from ..parser import parse_op_expr
from .base import (
    CorrelatorFamily,
    CorrelatorSpec,
    FieldPoints,
    Partials,
    complex_power,
    correlator_for,
    finite_difference_partials,
    standard_grid,
)
from .dual import dual_profile

logger = logging.getLogger("metawardpy.ward")

# (t2, r2) of the second body; the first sits at (t2 + t, r2 + r)
BASE_OFFSETS = ((0.0, 0.0), (0.5, -0.75), (-1.25, 2.0))


class Region(NamedTuple):
    """Extra restriction of the sample grid."""

    mask: Callable[[FieldPoints], np.ndarray]
    description: str


POSITIVE_RATIO = Region(lambda p: p.ratio > DOMAIN_MARGIN, "r/t > 0")
UNRESTRICTED = Region(lambda p: np.ones(len(p), dtype=bool), "")

# Where the covariant form and the bounded form coincide
DEFAULT_REGIONS = {
    CorrelatorFamily.META_FINAL: POSITIVE_RATIO,
    CorrelatorFamily.CGA: POSITIVE_RATIO,
}

REDUCED_EQUATIONS = (
    ("scaling", "t*dt + r*dr + x1 + x2"),
    ("advection", "t*dr + mu*r*dr - i*dzeta1 - i*dzeta2"),
    ("dimension-match", "i*r*dzeta1 - i*r*dzeta2 - t*x1 + t*x2"),
    ("zeta-difference", "(t + mu*r)*dzeta1 - (t + mu*r)*dzeta2"),
    ("extension", "r*dr + (1/2*zeta1 + 1/2*zeta2 + c)*dzeta1 + (1/2*zeta1 + 1/2*zeta2 + c)*dzeta2"
                  " - mu*dmu + nu1 + nu2"),
)


def apply_at(op: DiffOp, value: Any, derivatives: Mapping[str, Any],
             assignment: Mapping[str, Any]) -> tuple[Any, Any]:
    """Numeric action of a first-order operator on a function.

    ``derivatives`` maps each differentiated variable to the function's
    partial. Returns the residual and the sum of absolute term sizes.
    """
    if op.order > 1:
        raise MetaWardError(f"Only first-order operators can be applied pointwise, got order {op.order}")
    residual: Any = 0j
    scale: Any = 0.0
    for index, coefficient in op.terms():
        factor = coefficient.evaluate(assignment)
        if any(index):
            name = op.ring.differentiable[index.index(1)].name
            if name not in derivatives:
                raise MetaWardError(f"No partial supplied for {name}")
            term = factor * derivatives[name]
        else:
            term = factor * value
        residual = residual + term
        scale = scale + np.abs(term)
    return residual, scale


def _two_body_derivatives(partials: Partials) -> dict[str, np.ndarray]:
    """F depends on t1 - t2 and r1 - r2 only."""
    return {
        "t1": partials.t, "t2": -partials.t,
        "r1": partials.r, "r2": -partials.r,
        "zeta1": partials.zeta1, "zeta2": partials.zeta2,
        "mu": partials.mu,
    }


def _reduced_derivatives(partials: Partials) -> dict[str, np.ndarray]:
    return {"t": partials.t, "r": partials.r, "zeta1": partials.zeta1,
            "zeta2": partials.zeta2, "mu": partials.mu}


def _sample(spec: CorrelatorSpec, grid: Optional[FieldPoints], region: Optional[Region]):
    correlator = correlator_for(spec)
    correlator.validate()
    points = grid if grid is not None else standard_grid(with_zeta=spec.family is CorrelatorFamily.DUAL)
    mask = correlator.inside(points, DOMAIN_MARGIN)
    domain = correlator.domain
    region = DEFAULT_REGIONS.get(spec.family, UNRESTRICTED) if region is None else region
    if region.description:
        mask &= region.mask(points)
        domain = f"{domain} and {region.description}"
    logger.debug("Grid filter for %s kept %d of %d points", spec.family, int(mask.sum()), len(points))
    points = points.select(mask)
    if not len(points):
        raise EmptyGridError(domain)
    return correlator, points, domain


def _report(spec: CorrelatorSpec, results: dict[str, tuple[float, float]], samples: int,
            domain: str, tolerance: float) -> ResidualReport:
    max_abs = max((a for a, _ in results.values()), default=0.0)
    max_rel = max((r for _, r in results.values()), default=0.0)
    report = ResidualReport(
        family=str(spec.family),
        generators=list(results),
        sample_points=samples,
        max_abs_residual=max_abs,
        max_rel_residual=max_rel,
        per_generator={name: rel for name, (_, rel) in results.items()},
        domain=domain,
        tolerance=tolerance,
        passed=max_rel <= tolerance,
    )
    logger.info("Ward residual of %s on %d points: max relative %.3g (tolerance %.3g)",
                spec.family, samples, max_rel, tolerance)
    return report


def ward_residual(generators: Mapping[str, DiffOp], spec: CorrelatorSpec,
                  grid: Optional[FieldPoints] = None, region: Optional[Region] = None,
                  tolerance: Optional[float] = None, finite_differences: bool = False,
                  threads: Optional[int] = None) -> ResidualReport:
    """Apply two-body generators to the correlator on a sample grid.

    The correlator depends on separations only; every grid point is placed
    at each of BASE_OFFSETS so the generators' explicit t2, r2 dependence is
    exercised. ``region`` defaults to the family's covariance region.
    """
    correlator, points, domain = _sample(spec, grid, region)
    if tolerance is None:
        tolerance = FINITE_DIFFERENCE_TOLERANCE if finite_differences else WARD_TOLERANCE
    value = correlator.evaluate(points)
    partials = finite_difference_partials(spec, points) if finite_differences else correlator.gradient(points)
    derivatives = _two_body_derivatives(partials)
    assignments = []
    for t2, r2 in BASE_OFFSETS:
        assignment = dict(spec.assignment())
        assignment.update(t1=t2 + points.t, t2=np.full(len(points), t2), r1=r2 + points.r,
                          r2=np.full(len(points), r2), zeta1=points.zeta1, zeta2=points.zeta2)
        assignments.append(assignment)

    def check(item: tuple[str, DiffOp]) -> tuple[float, float]:
        name, op = item
        worst_abs = worst_rel = 0.0
        for assignment in assignments:
            residual, scale = apply_at(op, value, derivatives, assignment)
            worst_abs = max(worst_abs, float(np.max(np.abs(residual))))
            worst_rel = max(worst_rel, float(np.max(np.abs(residual) / np.maximum(1.0, scale))))
        logger.debug("%s on %s: max relative residual %.3g", name, spec.family, worst_rel)
        return worst_abs, worst_rel

    items = list(generators.items())
    results = dict(zip((name for name, _ in items), parallel_map(check, items, threads)))
    return _report(spec, results, len(points) * len(BASE_OFFSETS), domain, tolerance)


def build_reduced_system() -> list[DiffOp]:
    """The five Ward operators left after separating centre-of-mass coordinates.

    They act on functions of (zeta1, zeta2, t, r, mu).
    """
    return [parse_op_expr(text, REDUCED) for _, text in REDUCED_EQUATIONS]


def reduced_residual(spec: CorrelatorSpec, grid: Optional[FieldPoints] = None,
                     tolerance: float = WARD_TOLERANCE) -> ResidualReport:
    """Residuals of the reduced system on a correlator (normally DUAL)."""
    correlator, points, domain = _sample(spec, grid, None)
    value = correlator.evaluate(points)
    derivatives = _reduced_derivatives(correlator.gradient(points))
    assignment = dict(spec.assignment())
    assignment.update(t=points.t, r=points.r, zeta1=points.zeta1, zeta2=points.zeta2)
    results = {}
    for (name, _), op in zip(REDUCED_EQUATIONS, build_reduced_system()):
        residual, scale = apply_at(op, value, derivatives, assignment)
        results[name] = (float(np.max(np.abs(residual))),
                         float(np.max(np.abs(residual) / np.maximum(1.0, scale))))
    return _report(spec, results, len(points), domain, tolerance)


# w collapse

DEFAULT_COLLAPSE_SAMPLES = ((0.0, 1.0), (0.5, 1.0), (1.0, 0.5), (2.0, 2.0),
                            (-0.5, 1.0), (-0.25, 0.3), (3.0, 1.5))


def _phase(u: float, mu: float) -> float:
    """u - ln(1 + mu u)/mu, the real part of w; minimal (zero) at u = 0."""
    return u - math.log1p(mu * u) / mu


def partner_abscissa(u: float, mu: float) -> Optional[float]:
    """The other u' with the same real part of w, or None at the minimum u = 0."""
    if u == 0:
        return None
    target = _phase(u, mu)
    if u > 0:
        # the phase blows up at the edge u' -> -1/mu
        epsilon = math.exp(-(mu * target + 2))
        left = -(1 - epsilon) / mu
        if left <= -1 / mu or _phase(left, mu) <= target:
            return None
        return brentq(lambda s: _phase(s, mu) - target, left, 0.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    right = max(1.0, target)
    while _phase(right, mu) <= target:
        right *= 2
    return brentq(lambda s: _phase(s, mu) - target, 0.0, right, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def w_collapse_check(nu_sum: float, mu: float, samples: Optional[Iterable[tuple[float, float]]] = None,
                     tolerance: float = COLLAPSE_TOLERANCE) -> WCollapseReport:
    """The dual profile depends on (u, v) only through w = u - ln(1 + mu u)/mu + i v.

    Each sample is compared with the curve w -> w^-nu_sum after dividing out
    (-i)^-nu_sum, and with its partner point of equal w.
    """
    if mu <= 0:
        raise DomainError("mu > 0", f"mu={mu}")
    samples = list(DEFAULT_COLLAPSE_SAMPLES if samples is None else samples)
    base = complex((-1j) ** -nu_sum)
    rows = []
    for u, v in samples:
        if 1 + mu * u <= 0 or v <= 0:
            raise DomainError("1 + mu*u > 0 and v > 0", f"sample ({u}, {v})")
        w = complex(_phase(u, mu), v)
        g = complex(dual_profile(u, v, nu_sum, mu))
        normalized = g / base
        curve = complex(complex_power(w, -nu_sum))
        curve_gap = abs(normalized - curve) / abs(curve)
        partner = partner_abscissa(u, mu)
        pair_gap = None
        if partner is not None:
            twin = complex(dual_profile(partner, v, nu_sum, mu))
            pair_gap = abs(twin - g) / abs(g)
        rows.append(WCollapseSample(
            u=u, v=v, w_re=w.real, w_im=w.imag, g_re=g.real, g_im=g.imag,
            normalized_re=normalized.real, normalized_im=normalized.imag,
            curve_gap=curve_gap, partner_u=partner, pair_gap=pair_gap))
    max_curve = max((row.curve_gap for row in rows), default=0.0)
    max_pair = max((row.pair_gap for row in rows if row.pair_gap is not None), default=0.0)
    report = WCollapseReport(
        nu_sum=nu_sum, mu=mu, samples=rows, max_curve_gap=max_curve, max_pair_gap=max_pair,
        tolerance=tolerance, passed=max(max_curve, max_pair) <= tolerance)
    logger.info("w collapse for nu_sum=%g mu=%g: curve gap %.3g, pair gap %.3g",
                nu_sum, mu, max_curve, max_pair)
    return report

