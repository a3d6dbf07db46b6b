"""Tests for the operator text form."""

from fractions import Fraction

import pytest

from metaward.metawardpy.diffop import DiffOp
from metaward.metawardpy.errors import ExprSyntaxError, UnknownSymbolError
from metaward.metawardpy.exactalg import ONE_BODY, REDUCED, TWO_BODY, GaussianRational
from metaward.metawardpy.parser import format_op, parse_op_expr, symbols_of, tokenize
from metaward.metawardpy.reps import INDEXED_KINDS, Family, Kind, generator, ward_generators

T = ONE_BODY.var("t")
R = ONE_BODY.var("r")
MU = ONE_BODY.var("mu")
D_T = DiffOp.partial(ONE_BODY, "t")
D_R = DiffOp.partial(ONE_BODY, "r")


def test_parse_simple_operator():
    """Coefficient products followed by a derivative token."""
    assert parse_op_expr("-t*dt - mu*r*dr") == -(D_T * T) - D_R * (MU * R)


def test_product_order_composes():
    """dt*t is the composition, not the multiplication operator."""
    assert parse_op_expr("dt*t") == DiffOp.scalar(ONE_BODY, 1) + D_T * T


def test_numbers_and_imaginary_unit():
    """Fractions, decimals and i are exact."""
    op = parse_op_expr("3/4*t + 0.5*i*dr")
    assert op == DiffOp.scalar(ONE_BODY, T.scale(Fraction(3, 4))) + D_R * ONE_BODY.const(GaussianRational(0, Fraction(1, 2)))


def test_powers_and_mu_inverse():
    """Integer powers repeat composition; mu alone may take negative powers."""
    assert parse_op_expr("t^2*dr") == D_R * T ** 2
    assert parse_op_expr("mu^-1*((t + mu*r)^2 - t^2)") == DiffOp.scalar(ONE_BODY, T * R * 2 + MU * R ** 2)
    with pytest.raises(ExprSyntaxError) as err:
        parse_op_expr("t^-1")
    assert err.value.column == 1


_KINDS = {
    Family.META: (Kind.X, Kind.Y, Kind.S),
    Family.META_DUAL: (Kind.X, Kind.Y, Kind.N, Kind.S),
    Family.CGA: (Kind.X, Kind.Y),
    Family.ORTHO_CHIRAL: (Kind.ELL, Kind.ELLBAR),
}
_GENERATORS = [(family, kind, index)
               for family, kinds in _KINDS.items()
               for kind in kinds
               for index in (range(-1, 6) if kind in INDEXED_KINDS else (0,))]


@pytest.mark.parametrize("family, kind, index", _GENERATORS)
def test_round_trip_of_generators(family, kind, index):
    """format_op output parses back to the same operator."""
    op = generator(family, kind, index)
    assert parse_op_expr(format_op(op), op.ring) == op


def test_round_trip_of_inverse_mu():
    """Chiral generators carry mu^-1 coefficients that survive printing."""
    op = generator(Family.ORTHO_CHIRAL, Kind.ELLBAR, 2)
    assert "mu^-1" in format_op(op)
    assert parse_op_expr(format_op(op), op.ring) == op


@pytest.mark.parametrize("family", [Family.META, Family.META_DUAL, Family.CGA])
def test_round_trip_of_ward_generators(family):
    """Two-body operators print with body labels and parse back in the two-body ring."""
    for label, op in ward_generators(family).items():
        assert op.ring == TWO_BODY, label
        assert parse_op_expr(format_op(op), TWO_BODY) == op, label


def test_ring_selection():
    """Body-indexed names pick the two-body ring, zeta1 with t picks the reduced ring."""
    assert parse_op_expr("t1*dt2").ring == TWO_BODY
    assert parse_op_expr("r*dzeta1").ring == REDUCED
    assert symbols_of(["t*dmu + i"]) == {"t", "mu"}


def test_syntax_error_location():
    """A doubled sign fails at the second operator."""
    with pytest.raises(ExprSyntaxError) as err:
        parse_op_expr("-t*dt + + r")
    assert (err.value.line, err.value.column) == (1, 9)
    assert "column 9" in str(err.value)


def test_syntax_error_on_second_line():
    """Line numbers count newlines."""
    with pytest.raises(ExprSyntaxError) as err:
        parse_op_expr("t*dt +\n  ) ")
    assert (err.value.line, err.value.column) == (2, 3)


def test_unexpected_end_and_unbalanced():
    """Missing operands and parentheses are reported."""
    with pytest.raises(ExprSyntaxError, match="end of input"):
        parse_op_expr("t +")
    with pytest.raises(ExprSyntaxError, match="Expected"):
        parse_op_expr("(t + r")


def test_unknown_symbol():
    """Identifiers outside every ring carry their position."""
    with pytest.raises(UnknownSymbolError) as err:
        parse_op_expr("t*dq + q")
    assert err.value.symbol == "dq"
    assert err.value.column == 3


def test_derivative_of_parameter_rejected():
    """Quantum numbers have no derivative token."""
    with pytest.raises(ExprSyntaxError, match="non-differentiable"):
        parse_op_expr("dx")


def test_tokenize_rejects_stray_characters():
    """Characters outside the grammar fail in the lexer."""
    with pytest.raises(ExprSyntaxError) as err:
        tokenize("t $ r")
    assert err.value.column == 3
