"""Tests for the closed-form two-point functions."""

import numpy as np
import pytest

from metaward.metawardpy.correlators import (
    CorrelatorFamily,
    CorrelatorSpec,
    FieldPoint,
    FieldPoints,
    correlator_for,
    dual_argument,
    dual_profile,
    eval_correlator,
    finite_difference_partials,
    grad_correlator,
    rapidity_shift,
    standard_grid,
)
from metaward.metawardpy.errors import DomainError, NonDifferentiablePointError

from .common import random_points


def _spec(family, **kwargs):
    return CorrelatorSpec.matched(family, **kwargs)


# ──────────────────────────────────────────────────────────────
# Point values
# ──────────────────────────────────────────────────────────────

def test_ortho_value():
    """(t^2 + r^2)^-x."""
    value = eval_correlator(_spec(CorrelatorFamily.ORTHO, x=0.5), FieldPoint(3.0, 4.0))
    assert value == pytest.approx(0.2)


def test_schrodinger_value_and_branch():
    """t^-x exp(-M r^2/2t), principal branch for t < 0."""
    spec = _spec(CorrelatorFamily.SCHR, x=0.5, M1=2.0)
    assert eval_correlator(spec, FieldPoint(1.0, 1.0)) == pytest.approx(np.exp(-1.0))
    assert eval_correlator(spec, FieldPoint(-1.0, 0.0)) == pytest.approx(-1j)


def test_causal_schrodinger_vanishes_backwards():
    """The response is zero for M t < 0 and the plain form otherwise."""
    spec = _spec(CorrelatorFamily.SCHR_EXT, x=1.5, M1=1.0)
    values = correlator_for(spec).evaluate(FieldPoints([2.0, -2.0], [0.5, 0.5]))
    plain = eval_correlator(spec.with_family(CorrelatorFamily.SCHR), FieldPoint(2.0, 0.5))
    assert values[0] == pytest.approx(plain)
    assert values[1] == 0
    with pytest.raises(DomainError):
        eval_correlator(_spec(CorrelatorFamily.SCHR_EXT, M1=0.0), FieldPoint(1.0, 0.0))


def test_naive_meta_value_and_domain():
    """t^-2x (1 + mu r/t)^(-2 gamma/mu) is only defined where 1 + mu r/t > 0."""
    spec = _spec(CorrelatorFamily.META_NAIVE, x=1.0, gamma=0.5, mu=1.0)
    assert eval_correlator(spec, FieldPoint(1.0, 1.0)) == pytest.approx(0.5)
    with pytest.raises(DomainError) as err:
        eval_correlator(spec, FieldPoint(1.0, -2.0))
    assert err.value.constraint == "1 + mu*r/t > 0"


def test_meta_final_is_bounded_form():
    """|t|^-2x (1 + mu|r/t|)^(-2 gamma/mu) on both sides of r = 0."""
    spec = _spec(CorrelatorFamily.META_FINAL, x=1.0, gamma=0.5, mu=1.0)
    values = correlator_for(spec).evaluate(FieldPoints([1.0, 1.0, -2.0], [1.0, -1.0, 2.0]))
    assert values == pytest.approx(np.array([0.5, 0.5, 0.125]))


def test_meta_final_negative_rapidity():
    """Negative gamma needs literal branches and then vanishes on one side."""
    spec = _spec(CorrelatorFamily.META_FINAL, x=1.0, gamma=-0.5, mu=1.0)
    with pytest.raises(DomainError):
        eval_correlator(spec, FieldPoint(1.0, 0.5))
    literal = _spec(CorrelatorFamily.META_FINAL, x=1.0, gamma=-0.5, mu=1.0, literal_branches=True)
    values = correlator_for(literal).evaluate(FieldPoints([1.0, 1.0], [-0.5, 0.5]))
    assert values[0] == pytest.approx(0.5)
    assert values[1] == 0


def test_cga_value():
    """|t|^-2x exp(-2|gamma r/t|)."""
    spec = _spec(CorrelatorFamily.CGA, x=0.5, gamma=1.0)
    assert eval_correlator(spec, FieldPoint(-2.0, 1.0)) == pytest.approx(0.5 * np.exp(-1.0))


def test_dual_value():
    """|t|^-2x (zeta_+ + c + i ln(1 + mu r/t)/mu)^-(nu1 + nu2)."""
    spec = _spec(CorrelatorFamily.DUAL, x=0.5, nu1=1.0, nu2=1.0, mu=1.0, c=0.5)
    point = FieldPoint(1.0, np.e - 1, zeta1=0.0, zeta2=1.0)
    assert eval_correlator(spec, point) == pytest.approx((1.0 + 1j) ** -2)


def test_dual_helpers():
    """Rapidity shift and dual argument."""
    assert rapidity_shift(np.e - 1, 1.0) == pytest.approx(1.0)
    assert dual_argument(0.5, 0.0, 2.0, c=0.25) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        dual_profile(-2.0, 1.0, 2.0, 1.0)


def test_dual_branch_cut_is_outside():
    """Arguments on (-inf, 0] are excluded from the domain."""
    spec = _spec(CorrelatorFamily.DUAL, nu1=0.5, nu2=0.75, mu=1.0)
    inside = correlator_for(spec).inside(FieldPoints([1.0, 1.0], [0.0, 0.0], [-1.0, 1.0], [-1.0, 1.0]))
    assert list(inside) == [False, True]


# ──────────────────────────────────────────────────────────────
# Gates, normalization and vector evaluation
# ──────────────────────────────────────────────────────────────

def test_kronecker_gates():
    """Unequal x, or unequal gamma where gamma labels the field, gives zero."""
    x_gated = CorrelatorSpec(CorrelatorFamily.ORTHO, x1=1.0, x2=2.0)
    assert eval_correlator(x_gated, FieldPoint(1.0, 1.0)) == 0
    gamma_gated = CorrelatorSpec(CorrelatorFamily.META_FINAL, gamma1=1.0, gamma2=0.5)
    assert eval_correlator(gamma_gated, FieldPoint(1.0, 1.0)) == 0
    not_gated = CorrelatorSpec(CorrelatorFamily.ORTHO, gamma1=1.0, gamma2=0.5)
    assert eval_correlator(not_gated, FieldPoint(1.0, 0.0)) == pytest.approx(1.0)


def test_normalization_scales_values():
    """The normalization constant multiplies every value and gradient."""
    spec = CorrelatorSpec(CorrelatorFamily.CGA, normalization=2j)
    point = FieldPoint(1.0, 0.5)
    assert eval_correlator(spec, point) == pytest.approx(2j * np.exp(-1.0))
    assert grad_correlator(spec, point).r == pytest.approx(2j * -2 * np.exp(-1.0))


def test_vector_evaluation_matches_points():
    """Evaluating a FieldPoints equals evaluating point by point."""
    spec = _spec(CorrelatorFamily.META_FINAL, x=0.7, gamma=0.3, mu=0.5)
    grid = standard_grid(with_zeta=False)
    values = eval_correlator(spec, grid)
    assert len(values) == len(grid)
    for k in (0, 7, len(grid) - 1):
        assert values[k] == pytest.approx(eval_correlator(spec, grid.point(k)))


def test_standard_grid_shape():
    """Eight t values, six r values and three zeta values per body."""
    assert len(standard_grid(with_zeta=False)) == 8 * 6
    assert len(standard_grid()) == 8 * 6 * 3 * 3


# ──────────────────────────────────────────────────────────────
# Gradients
# ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize("family, ratio_sign, kwargs", [
    (CorrelatorFamily.ORTHO, 0, {"x": 0.8}),
    (CorrelatorFamily.SCHR, 1, {"x": 0.6, "M1": 1.5}),
    (CorrelatorFamily.SCHR_EXT, 0, {"x": 0.6, "M1": -1.5}),
    (CorrelatorFamily.META_NAIVE, 1, {"x": 0.7, "gamma": 0.4, "mu": 0.8}),
    (CorrelatorFamily.META_FINAL, 0, {"x": 0.7, "gamma": 0.4, "mu": 0.8}),
    (CorrelatorFamily.CGA, 0, {"x": 0.7, "gamma": 0.4}),
    (CorrelatorFamily.DUAL, 1, {"x": 0.7, "nu1": 0.9, "nu2": 1.4, "mu": 0.8, "c": 0.2}),
])
def test_gradient_matches_finite_differences(family, ratio_sign, kwargs):
    """Analytic partials agree with central differences."""
    spec = _spec(family, **kwargs)
    points = random_points(11, 40, ratio_sign=ratio_sign, with_zeta=family is CorrelatorFamily.DUAL)
    analytic = grad_correlator(spec, points)
    numeric = finite_difference_partials(spec, points)
    scale = np.abs(eval_correlator(spec, points)) + 1e-12
    for name in ("t", "r", "zeta1", "zeta2", "mu"):
        gap = np.abs(getattr(analytic, name) - getattr(numeric, name)) / np.maximum(scale, 1.0)
        assert np.max(gap) < 1e-6, name


def test_gradient_refused_on_kink():
    """The bounded forms are not differentiable at r = 0."""
    spec = _spec(CorrelatorFamily.META_FINAL, x=1.0, gamma=0.5)
    with pytest.raises(NonDifferentiablePointError):
        grad_correlator(spec, FieldPoint(1.0, 0.0))
    flat = _spec(CorrelatorFamily.CGA, x=1.0, gamma=0.0)
    assert grad_correlator(flat, FieldPoint(2.0, 0.0)).t == pytest.approx(-0.25)


def test_point_gradient_is_scalar():
    """A single FieldPoint gives complex partials."""
    partials = grad_correlator(_spec(CorrelatorFamily.ORTHO, x=1.0), FieldPoint(1.0, 1.0))
    assert partials.t == pytest.approx(-0.5)
    assert isinstance(partials.r, complex)
