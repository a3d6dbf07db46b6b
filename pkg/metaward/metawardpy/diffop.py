"""Linear differential operators with polynomial coefficients."""
from __future__ import annotations

import itertools
import logging
import operator
from math import comb, prod
from typing import Any, Literal, Mapping, Union

from .errors import AlreadyLiftedError, MetaWardError, RingMismatchError
from .exactalg import (
    ONE_BODY,
    TWO_BODY,
    GaussianRational,
    Poly,
    Ring,
    VarSymbol,
    join_terms,
    monomial_factors,
)

logger = logging.getLogger("metawardpy.diffop")

MultiIndex = tuple[int, ...]
BodyIndex = Literal[1, 2]

# Shared between bodies: the global scale and the zeta shift.
SHARED_NAMES = frozenset({"mu", "c"})


class DiffOp:
    """Finite sum of polynomial coefficients times partial derivatives.

    Terms map a derivative multi-index (one entry per differentiable variable
    of the ring) to its coefficient; the zero multi-index is the
    multiplication part. Operators act on the left and are immutable.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: Ring, terms: Mapping[MultiIndex, Any] | None = None) -> None:
        width = len(ring.differentiable)
        normalized: dict[MultiIndex, Poly] = {}
        for index, coefficient in (terms or {}).items():
            index = tuple(index)
            if len(index) != width or any(k < 0 for k in index):
                raise MetaWardError(f"Bad derivative multi-index {index} for ring {ring.name}")
            if not isinstance(coefficient, Poly):
                coefficient = ring.const(coefficient)
            elif coefficient.ring != ring:
                raise RingMismatchError(ring, coefficient.ring)
            total = normalized[index] + coefficient if index in normalized else coefficient
            if total.is_zero:
                normalized.pop(index, None)
            else:
                normalized[index] = total
        self.ring = ring
        self._terms = normalized

    @classmethod
    def _from_normalized(cls, ring: Ring, terms: dict) -> DiffOp:
        op = object.__new__(cls)
        op.ring = ring
        op._terms = terms
        return op

    @classmethod
    def zero(cls, ring: Ring) -> DiffOp:
        return cls._from_normalized(ring, {})

    @classmethod
    def scalar(cls, ring: Ring, value: Any) -> DiffOp:
        """Multiplication operator by a polynomial or constant."""
        return cls(ring, {(0,) * len(ring.differentiable): value})

    @classmethod
    def partial(cls, ring: Ring, name: Union[str, VarSymbol], order: int = 1) -> DiffOp:
        index = [0] * len(ring.differentiable)
        index[ring.derivative_index(name)] = order
        return cls(ring, {tuple(index): 1})

    # Inspection

    def terms(self) -> list[tuple[MultiIndex, Poly]]:
        return sorted(self._terms.items(), key=operator.itemgetter(0), reverse=True)

    def coefficient(self, index: MultiIndex) -> Poly:
        return self._terms.get(tuple(index), self.ring.zero())

    def coefficient_of(self, *names: str) -> Poly:
        """Coefficient of the derivative named by ``names`` (empty: scalar part)."""
        index = [0] * len(self.ring.differentiable)
        for name in names:
            index[self.ring.derivative_index(name)] += 1
        return self.coefficient(tuple(index))

    @property
    def order(self) -> int:
        return max((sum(index) for index in self._terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def differentiates(self, name: str) -> bool:
        if name not in {v.name for v in self.ring.differentiable}:
            return False
        idx = self.ring.derivative_index(name)
        return any(index[idx] for index in self._terms)

    # Linear structure

    def _check(self, other: DiffOp) -> None:
        if other.ring != self.ring:
            raise RingMismatchError(self.ring, other.ring)

    def __add__(self, other: DiffOp) -> DiffOp:
        if not isinstance(other, DiffOp):
            return NotImplemented
        self._check(other)
        terms = dict(self._terms)
        for index, coefficient in other._terms.items():
            total = terms[index] + coefficient if index in terms else coefficient
            if total.is_zero:
                terms.pop(index, None)
            else:
                terms[index] = total
        return DiffOp._from_normalized(self.ring, terms)

    def __neg__(self) -> DiffOp:
        return DiffOp._from_normalized(self.ring, {i: -c for i, c in self._terms.items()})

    def __sub__(self, other: DiffOp) -> DiffOp:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor: Any) -> DiffOp:
        """Left multiplication of every coefficient by a function or constant."""
        if isinstance(factor, DiffOp):
            return NotImplemented
        if isinstance(factor, Poly):
            if factor.ring != self.ring:
                raise RingMismatchError(self.ring, factor.ring)
            terms = {i: factor * c for i, c in self._terms.items()}
        else:
            terms = {i: c.scale(factor) for i, c in self._terms.items()}
        return DiffOp._from_normalized(self.ring, {i: c for i, c in terms.items() if not c.is_zero})

    __rmul__ = __mul__

    def __matmul__(self, other: DiffOp) -> DiffOp:
        return op_compose(self, other)

    # Actions

    def apply(self, f: Poly) -> Poly:
        """Apply the operator to a polynomial function."""
        if f.ring != self.ring:
            raise RingMismatchError(self.ring, f.ring)
        result = self.ring.zero()
        for index, coefficient in self._terms.items():
            result = result + coefficient * _derivative(f, index, self.ring)
        return result

    def substitute(self, v: Union[str, VarSymbol], value: Any) -> DiffOp:
        return op_substitute_param(self, v, value)

    def replace(self, v: Union[str, VarSymbol], replacement: Poly) -> DiffOp:
        name = v.name if isinstance(v, VarSymbol) else v
        if self.differentiates(name):
            raise MetaWardError(f"Cannot replace {name}: the operator differentiates it")
        terms = {i: c.replace(name, replacement) for i, c in self._terms.items()}
        return DiffOp(self.ring, terms)

    def relabel(self, target: Ring, rename: Mapping[str, str]) -> DiffOp:
        positions = [target.derivative_index(rename.get(v.name, v.name))
                     for v in self.ring.differentiable]
        terms: dict[MultiIndex, Poly] = {}
        for index, coefficient in self._terms.items():
            moved = [0] * len(target.differentiable)
            for position, k in zip(positions, index):
                moved[position] += k
            terms[tuple(moved)] = coefficient.relabel(target, rename)
        return DiffOp(target, terms)

    # Comparison and text

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"DiffOp({self})"

    def __str__(self) -> str:
        rendered = []
        for index, coefficient in self.terms():
            derivatives = _derivative_factors(self.ring, index)
            for exponents, value in coefficient.terms():
                rendered.append((value, monomial_factors(self.ring, exponents) + derivatives))
        return join_terms(rendered)


def _derivative_factors(ring: Ring, index: MultiIndex) -> list[str]:
    factors = []
    for var, k in zip(ring.differentiable, index):
        if k == 1:
            factors.append(f"d{var.name}")
        elif k:
            factors.append(f"d{var.name}^{k}")
    return factors


def _derivative(p: Poly, index: MultiIndex, ring: Ring) -> Poly:
    for var, k in zip(ring.differentiable, index):
        for _ in range(k):
            if p.is_zero:
                return p
            p = p.diff(var.name)
    return p


def op_compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """a∘b via the generalized Leibniz rule: b acts first."""
    a._check(b)
    ring = a.ring
    terms: dict[MultiIndex, Poly] = {}
    derivatives: dict[tuple[MultiIndex, MultiIndex], Poly] = {}
    for alpha, a_coefficient in a._terms.items():
        for gamma in itertools.product(*(range(k + 1) for k in alpha)):
            weight = prod(comb(k, g) for k, g in zip(alpha, gamma))
            rest = tuple(k - g for k, g in zip(alpha, gamma))
            for beta, b_coefficient in b._terms.items():
                key = (beta, gamma)
                if key not in derivatives:
                    derivatives[key] = _derivative(b_coefficient, gamma, ring)
                derived = derivatives[key]
                if derived.is_zero:
                    continue
                product = (a_coefficient * derived).scale(weight)
                index = tuple(map(operator.add, rest, beta))
                terms[index] = terms[index] + product if index in terms else product
    return DiffOp(ring, terms)


def op_commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    """[a, b] = a∘b − b∘a."""
    result = op_compose(a, b) - op_compose(b, a)
    if a.order <= 1 and b.order <= 1 and result.order > 1:
        raise MetaWardError(f"Second-order terms survived in [{a}, {b}]")
    return result


def body_rename(ring: Ring, body: BodyIndex) -> dict[str, str]:
    return {v.name: v.name if v.name in SHARED_NAMES else f"{v.name}{body}"
            for v in ring.variables}


def lift_two_body(a: DiffOp, body: BodyIndex) -> DiffOp:
    """Relabel a one-body operator onto body 1 or 2; mu and c stay shared."""
    if body not in (1, 2):
        raise ValueError(f"Body index must be 1 or 2, not {body}")
    if a.ring == TWO_BODY:
        raise AlreadyLiftedError(f"{a} already acts on two bodies")
    if a.ring != ONE_BODY:
        raise RingMismatchError(a.ring, ONE_BODY)
    return a.relabel(TWO_BODY, body_rename(ONE_BODY, body))


def two_body(a: DiffOp) -> DiffOp:
    """lift(a, 1) + lift(a, 2)."""
    return lift_two_body(a, 1) + lift_two_body(a, 2)


def op_substitute_param(a: DiffOp, v: Union[str, VarSymbol], value: Any) -> DiffOp:
    """Coefficient-wise exact substitution; poles propagate."""
    name = v.name if isinstance(v, VarSymbol) else v
    if a.differentiates(name):
        raise MetaWardError(f"Cannot substitute {name}: the operator differentiates it")
    value = GaussianRational.coerce(value)
    return DiffOp(a.ring, {i: c.subst(name, value) for i, c in a._terms.items()})


def op_equal(a: DiffOp, b: DiffOp) -> bool:
    return (a - b).is_zero
