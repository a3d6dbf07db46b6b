"""Tests for the metawardpy error types."""

import pytest

from metaward.config import InvalidConfig, InvalidGridFile
from metaward.metawardpy.dataclasses import QuadratureResult
from metaward.metawardpy.errors import (
    DivergenceError,
    DomainError,
    EmptyGridError,
    ExprSyntaxError,
    MetaWardError,
    MissingAssignmentError,
    NonDifferentiablePointError,
    PoleAtContractionError,
    QuadratureError,
    RingMismatchError,
    UnknownSymbolError,
)


def test_domain_error_exposes_constraint():
    """DomainError keeps the violated condition and the detail apart."""
    err = DomainError("1 + mu*r/t > 0", "meta_naive at t=1 r=-2")
    assert err.constraint == "1 + mu*r/t > 0"
    assert err.detail == "meta_naive at t=1 r=-2"
    assert str(err) == "Domain violation: 1 + mu*r/t > 0 (meta_naive at t=1 r=-2)"
    assert str(DomainError("mu > 0")) == "Domain violation: mu > 0"


def test_domain_errors_are_value_errors():
    """Callers catching ValueError keep working."""
    with pytest.raises(ValueError):
        raise DomainError("lambda > 0")
    assert isinstance(NonDifferentiablePointError("r != 0"), DomainError)
    assert isinstance(EmptyGridError("t != 0"), ValueError)


def test_syntax_error_position():
    """ExprSyntaxError renders line and column; unknown symbols are syntax errors."""
    err = UnknownSymbolError("dq", 1, 3)
    assert (err.line, err.column, err.symbol) == (1, 3, "dq")
    assert "Unknown symbol 'dq' at line 1, column 3" in str(err)
    assert isinstance(err, ExprSyntaxError)
    assert isinstance(err, SyntaxError)


def test_missing_assignment_message():
    """KeyError subclass with a readable message."""
    err = MissingAssignmentError("mu")
    assert isinstance(err, KeyError)
    assert str(err) == "No value assigned to 'mu'"


def test_arithmetic_errors():
    """Divergence, poles and quadrature failures are ArithmeticErrors."""
    assert isinstance(DivergenceError(0.5), ArithmeticError)
    assert isinstance(PoleAtContractionError("mu", -1), ZeroDivisionError)
    result = QuadratureResult(value=1.5, abs_error_estimate=0.1, evaluations=45, intervals=2, converged=False)
    err = QuadratureError(result)
    assert err.result is result
    assert "error estimate=0.1" in str(err)


def test_ring_mismatch_is_type_error():
    """Mixing rings is a TypeError."""
    err = RingMismatchError("one-body", "two-body")
    assert isinstance(err, TypeError)
    assert "one-body" in str(err)


def test_every_error_shares_the_base():
    """One except clause catches everything the library raises."""
    for err in (DomainError("x"), EmptyGridError("x"), DivergenceError(0.0),
                UnknownSymbolError("q", 1, 1), InvalidConfig("bad"), InvalidGridFile("bad")):
        assert isinstance(err, MetaWardError)
