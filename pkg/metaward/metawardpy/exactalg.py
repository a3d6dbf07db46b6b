"""Exact Gaussian-rational scalars and Laurent-in-mu multivariate polynomials."""
from __future__ import annotations

import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Literal, Mapping, Union

import numpy as np

from .errors import (
    MetaWardError,
    MissingAssignmentError,
    NonDifferentiableError,
    PoleAtContractionError,
    RingMismatchError,
)

logger = logging.getLogger("metawardpy.exactalg")

# Variables that may carry a partial derivative. Everything else is a parameter.
DIFFERENTIABLE_NAMES = frozenset(
    {"t", "r", "zeta", "mu", "t1", "r1", "zeta1", "t2", "r2", "zeta2"})
PARAMETER_NAMES = frozenset(
    {"x", "gamma", "nu", "c", "x1", "x2", "gamma1", "gamma2", "nu1", "nu2", "M1"})
INVERTIBLE_NAME = "mu"

Rational = Union[int, Fraction]


class GaussianRational:
    """Complex number whose real and imaginary parts are exact fractions."""

    __slots__ = ("_re", "_im")

    def __init__(self, re: Any = 0, im: Any = 0) -> None:
        self._re = re if type(re) is Fraction else Fraction(re)
        self._im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, value: Any) -> GaussianRational:
        """Convert ints, fractions, floats, complex numbers and strings."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction, str)):
            return cls(Fraction(value))
        if isinstance(value, float):
            return cls(Fraction(value))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"Cannot convert {value!r} to GaussianRational")

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    @property
    def re_num(self) -> int:
        return self._re.numerator

    @property
    def re_den(self) -> int:
        return self._re.denominator

    @property
    def im_num(self) -> int:
        return self._im.numerator

    @property
    def im_den(self) -> int:
        return self._im.denominator

    @property
    def is_real(self) -> bool:
        return self._im == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self._re, -self._im)

    def __add__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self._re, -self._im)

    def __sub__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational(self._re - other._re, self._im - other._im)

    def __rsub__(self, other: Any) -> GaussianRational:
        return (-self).__add__(other)

    def __mul__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        if not b and not d:
            return GaussianRational(a * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> GaussianRational:
        other = GaussianRational.coerce(other)
        norm = other._re * other._re + other._im * other._im
        if not norm:
            raise ZeroDivisionError("GaussianRational division by zero")
        return self * GaussianRational(other._re / norm, -other._im / norm)

    def __pow__(self, exponent: int) -> GaussianRational:
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base = ONE / self
            exponent = -exponent
        result = ONE
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, GaussianRational):
            return self._re == other._re and self._im == other._im
        if isinstance(other, (int, Fraction)):
            return self._im == 0 and self._re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __repr__(self) -> str:
        return f"GaussianRational({self._re}, {self._im})"

    def __str__(self) -> str:
        if not self._im:
            return str(self._re)
        imag = _imaginary_text(abs(self._im))
        if not self._re:
            return f"-{imag}" if self._im < 0 else imag
        sign = "-" if self._im < 0 else "+"
        return f"({self._re}{sign}{imag})"


def _imaginary_text(magnitude: Fraction) -> str:
    return "i" if magnitude == 1 else f"{magnitude}*i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


@dataclass(frozen=True)
class VarSymbol:
    """A ring variable; only mu may be inverted."""

    name: str
    differentiable: bool = False
    invertible: bool = False

    def __str__(self) -> str:
        return self.name


class Ring:
    """Fixed, ordered variable list shared by every Poly and DiffOp over it."""

    __slots__ = ("name", "variables", "differentiable", "_index", "_dindex")

    def __init__(self, name: str, variables: Iterable[VarSymbol]) -> None:
        variables = tuple(variables)
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise MetaWardError(f"Duplicate variable names in ring {name}")
        for v in variables:
            if v.invertible and v.name != INVERTIBLE_NAME:
                raise MetaWardError(f"Only {INVERTIBLE_NAME} may be invertible, not {v.name}")
            if v.differentiable and v.name not in DIFFERENTIABLE_NAMES:
                raise NonDifferentiableError(v.name)
        self.name = name
        self.variables = variables
        self.differentiable = tuple(v for v in variables if v.differentiable)
        self._index = {v.name: i for i, v in enumerate(variables)}
        self._dindex = {v.name: i for i, v in enumerate(self.differentiable)}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def size(self) -> int:
        return len(self.variables)

    def __contains__(self, name: object) -> bool:
        return _name_of(name) in self._index

    def index(self, name: Union[str, VarSymbol]) -> int:
        try:
            return self._index[_name_of(name)]
        except KeyError:
            raise RingMismatchError(_name_of(name), self.name) from None

    def derivative_index(self, name: Union[str, VarSymbol]) -> int:
        key = _name_of(name)
        if key not in self._dindex:
            if key in self._index:
                raise NonDifferentiableError(key)
            raise RingMismatchError(key, self.name)
        return self._dindex[key]

    def symbol(self, name: str) -> VarSymbol:
        return self.variables[self.index(name)]

    def var(self, name: str) -> Poly:
        exponents = [0] * self.size
        exponents[self.index(name)] = 1
        return Poly._from_normalized(self, {tuple(exponents): ONE})

    def const(self, value: Any) -> Poly:
        return Poly(self, {(0,) * self.size: value})

    def zero(self) -> Poly:
        return Poly._from_normalized(self, {})

    def one(self) -> Poly:
        return Poly._from_normalized(self, {(0,) * self.size: ONE})

    def monomial(self, powers: Mapping[str, int], coefficient: Any = 1) -> Poly:
        exponents = [0] * self.size
        for name, power in powers.items():
            exponents[self.index(name)] = power
        return Poly(self, {tuple(exponents): coefficient})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ring):
            return NotImplemented
        return self.name == other.name and self.variables == other.variables

    def __hash__(self) -> int:
        return hash((self.name, self.variables))

    def __repr__(self) -> str:
        return f"Ring({self.name}: {', '.join(self.names)})"

    def __str__(self) -> str:
        return self.name


def _name_of(v: Union[str, VarSymbol, Any]) -> str:
    return v.name if isinstance(v, VarSymbol) else v


def _coordinate(name: str) -> VarSymbol:
    return VarSymbol(name, differentiable=True, invertible=name == INVERTIBLE_NAME)


def _parameter(name: str) -> VarSymbol:
    return VarSymbol(name)


ONE_BODY = Ring("one-body", [
    *map(_coordinate, ("t", "r", "zeta", "mu")),
    *map(_parameter, ("x", "gamma", "nu", "c")),
])
TWO_BODY = Ring("two-body", [
    *map(_coordinate, ("t1", "r1", "zeta1", "t2", "r2", "zeta2", "mu")),
    *map(_parameter, ("x1", "gamma1", "nu1", "x2", "gamma2", "nu2", "c")),
])
REDUCED = Ring("reduced", [
    *map(_coordinate, ("zeta1", "zeta2", "t", "r", "mu")),
    *map(_parameter, ("x1", "x2", "nu1", "nu2", "c")),
])
STANDARD_RINGS = (ONE_BODY, REDUCED, TWO_BODY)


def select_ring(names: Iterable[str]) -> Ring:
    """Return the first standard ring containing every name."""
    names = set(names)
    for ring in STANDARD_RINGS:
        if all(name in ring for name in names):
            return ring
    raise RingMismatchError(sorted(names), [r.name for r in STANDARD_RINGS])


class Poly:
    """Multivariate polynomial over a Ring, Laurent in mu only.

    Terms map exponent vectors (one entry per ring variable) to nonzero
    GaussianRational coefficients. Instances are immutable.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], Any] | None = None) -> None:
        normalized: dict[tuple[int, ...], GaussianRational] = {}
        for exponents, coefficient in (terms or {}).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != ring.size:
                raise MetaWardError(
                    f"Exponent vector {exponents} does not fit ring {ring.name}")
            for var, e in zip(ring.variables, exponents):
                if e < 0 and not var.invertible:
                    raise MetaWardError(f"Negative power of non-invertible {var.name}")
            coefficient = GaussianRational.coerce(coefficient)
            total = normalized.get(exponents, ZERO) + coefficient
            if total:
                normalized[exponents] = total
            else:
                normalized.pop(exponents, None)
        self.ring = ring
        self._terms = normalized

    @classmethod
    def _from_normalized(cls, ring: Ring, terms: dict) -> Poly:
        poly = object.__new__(cls)
        poly.ring = ring
        poly._terms = terms
        return poly

    # Inspection

    def terms(self) -> list[tuple[tuple[int, ...], GaussianRational]]:
        """Terms in canonical (descending exponent vector) order."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exponents: tuple[int, ...]) -> GaussianRational:
        return self._terms.get(tuple(exponents), ZERO)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant:
            raise MetaWardError(f"{self} is not constant")
        return self._terms.get((0,) * self.ring.size, ZERO)

    def variables(self) -> set[str]:
        used = set()
        for exponents in self._terms:
            used.update(v.name for v, e in zip(self.ring.variables, exponents) if e)
        return used

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return 0
        if name is None:
            return max(sum(e for e in exps if e > 0) for exps in self._terms)
        idx = self.ring.index(name)
        return max(exps[idx] for exps in self._terms)

    def min_exponent(self, name: str) -> int:
        idx = self.ring.index(name)
        return min((exps[idx] for exps in self._terms), default=0)

    # Arithmetic

    def _coerce(self, other: Any) -> Poly | None:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(self.ring, other.ring)
            return other
        try:
            return self.ring.const(other)
        except TypeError:
            return None

    def __add__(self, other: Any) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exponents, coefficient in other._terms.items():
            total = terms.get(exponents, ZERO) + coefficient
            if total:
                terms[exponents] = total
            else:
                del terms[exponents]
        return Poly._from_normalized(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._from_normalized(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Poly:
        return (-self).__add__(other)

    def __mul__(self, other: Any) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict[tuple[int, ...], GaussianRational] = {}
        add = operator.add
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponents = tuple(map(add, e1, e2))
                terms[exponents] = terms.get(exponents, ZERO) + c1 * c2
        return Poly._from_normalized(self.ring, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def scale(self, factor: Any) -> Poly:
        factor = GaussianRational.coerce(factor)
        if not factor:
            return self.ring.zero()
        return Poly._from_normalized(self.ring, {e: c * factor for e, c in self._terms.items()})

    def __pow__(self, exponent: int) -> Poly:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self._invert() ** (-exponent)
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def _invert(self) -> Poly:
        """Inverse of a single monomial in invertible variables."""
        if len(self._terms) != 1:
            raise MetaWardError(f"{self} is not an invertible monomial")
        (exponents, coefficient), = self._terms.items()
        for var, e in zip(self.ring.variables, exponents):
            if e and not var.invertible:
                raise MetaWardError(f"{var.name} is not invertible")
        return Poly._from_normalized(
            self.ring, {tuple(-e for e in exponents): ONE / coefficient})

    # Calculus and substitution

    def diff(self, v: Union[str, VarSymbol]) -> Poly:
        name = _name_of(v)
        if not self.ring.symbol(name).differentiable:
            raise NonDifferentiableError(name)
        idx = self.ring.index(name)
        terms = {}
        for exponents, coefficient in self._terms.items():
            power = exponents[idx]
            if power:
                shifted = exponents[:idx] + (power - 1,) + exponents[idx + 1:]
                terms[shifted] = coefficient * power
        return Poly._from_normalized(self.ring, terms)

    def subst(self, v: Union[str, VarSymbol], value: Any) -> Poly:
        """Substitute an exact scalar for a variable."""
        name = _name_of(v)
        idx = self.ring.index(name)
        value = GaussianRational.coerce(value)
        powers: dict[int, GaussianRational] = {}
        terms: dict[tuple[int, ...], GaussianRational] = {}
        for exponents, coefficient in self._terms.items():
            power = exponents[idx]
            if power < 0 and not value:
                raise PoleAtContractionError(name, power)
            if power not in powers:
                powers[power] = value ** power
            factor = powers[power]
            if not factor:
                continue
            reduced = exponents[:idx] + (0,) + exponents[idx + 1:]
            terms[reduced] = terms.get(reduced, ZERO) + coefficient * factor
        return Poly._from_normalized(self.ring, {e: c for e, c in terms.items() if c})

    def replace(self, v: Union[str, VarSymbol], replacement: Poly) -> Poly:
        """Substitute a polynomial for a variable (non-negative powers only)."""
        name = _name_of(v)
        idx = self.ring.index(name)
        replacement = self._coerce(replacement)
        powers: dict[int, Poly] = {0: self.ring.one()}
        result = self.ring.zero()
        for exponents, coefficient in self._terms.items():
            power = exponents[idx]
            if power < 0:
                raise PoleAtContractionError(name, power)
            if power not in powers:
                powers[power] = replacement ** power
            reduced = exponents[:idx] + (0,) + exponents[idx + 1:]
            result = result + Poly._from_normalized(self.ring, {reduced: coefficient}) * powers[power]
        return result

    def relabel(self, target: Ring, rename: Mapping[str, str]) -> Poly:
        """Move this polynomial into ``target``, renaming variables."""
        positions = [target.index(rename.get(v.name, v.name)) for v in self.ring.variables]
        terms = {}
        for exponents, coefficient in self._terms.items():
            moved = [0] * target.size
            for position, e in zip(positions, exponents):
                moved[position] += e
            terms[tuple(moved)] = coefficient
        return Poly(target, terms)

    def evaluate(self, assignment: Mapping[str, Any]) -> Any:
        """Floating evaluation; values may be complex scalars or numpy arrays."""
        values: dict[int, Any] = {}
        for name in self.variables():
            if name not in assignment:
                raise MissingAssignmentError(name)
            values[self.ring.index(name)] = assignment[name]
        for idx, value in values.items():
            if self.min_exponent(self.ring.variables[idx].name) < 0 and np.any(np.asarray(value) == 0):
                raise PoleAtContractionError(self.ring.variables[idx].name, self.min_exponent(
                    self.ring.variables[idx].name))
        total: Any = 0j
        for exponents, coefficient in self._terms.items():
            term: Any = complex(coefficient)
            for idx, e in enumerate(exponents):
                if e:
                    term = term * values[idx] ** e if e > 0 else term / values[idx] ** (-e)
            total = total + term
        return total

    # Comparison and text

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.is_constant and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return join_terms(
            (coefficient, monomial_factors(self.ring, exponents))
            for exponents, coefficient in self.terms())


def monomial_factors(ring: Ring, exponents: tuple[int, ...]) -> list[str]:
    factors = []
    for var, e in zip(ring.variables, exponents):
        if e == 1:
            factors.append(var.name)
        elif e:
            factors.append(f"{var.name}^{e}")
    return factors


def _signed_magnitude(coefficient: GaussianRational) -> tuple[bool, str]:
    """Split a coefficient into (negative, text of its magnitude)."""
    re, im = coefficient.re, coefficient.im
    if not im:
        return re < 0, str(abs(re))
    if not re:
        return im < 0, _imaginary_text(abs(im))
    return False, str(coefficient)


def join_terms(terms: Iterable[tuple[GaussianRational, list[str]]]) -> str:
    """Render (coefficient, factors) pairs as a canonical sum."""
    parts = []
    for coefficient, factors in terms:
        negative, magnitude = _signed_magnitude(coefficient)
        if factors:
            body = "*".join(factors) if magnitude == "1" else f"{magnitude}*{'*'.join(factors)}"
        else:
            body = magnitude
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts) or "0"


def poly_arith(a: Poly, b: Poly | None, op: Literal["add", "mul", "neg"]) -> Poly:
    """Exact add / mul / neg over a shared ring."""
    match op:
        case "add":
            return a + b
        case "mul":
            return a * b
        case "neg":
            return -a
    raise ValueError(f"Unknown polynomial operation {op!r}")


def poly_diff(p: Poly, v: Union[str, VarSymbol]) -> Poly:
    return p.diff(v)


def poly_subst(p: Poly, v: Union[str, VarSymbol], value: Any) -> Poly:
    return p.subst(v, value)


def poly_eval(p: Poly, assignment: Mapping[str, Any]) -> Any:
    return p.evaluate(assignment)
