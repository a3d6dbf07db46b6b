"""Generator factories and exact verifiers for the meta-conformal algebra.

All generators live over the one-body ring (t, r, zeta, mu; x, gamma, nu, c)
and are polynomial for n >= -1: the mu^-1 prefactors are expanded and cancel.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Mapping, Optional

from .dataclasses import AlgebraReport, PairCheck
from .diffop import DiffOp, op_commutator, two_body
from .errors import DomainError, UnsupportedGeneratorError, UnsupportedIndexError
from .exactalg import I, ONE_BODY, TWO_BODY, Poly
from .executor import parallel_map

logger = logging.getLogger("metawardpy.reps")


class Family(Enum):
    """Generator representations"""

    META = "meta"
    META_DUAL = "meta_dual"
    CGA = "cga"
    ORTHO_CHIRAL = "ortho_chiral"

    def __str__(self):
        return self.value


class Kind(Enum):
    """Generator kinds"""

    X = "X"
    Y = "Y"
    N = "N"
    S = "S"
    ELL = "ELL"
    ELLBAR = "ELLBAR"

    def __str__(self):
        return self.value


INDEXED_KINDS = frozenset({Kind.X, Kind.Y, Kind.ELL, Kind.ELLBAR})

_KINDS_BY_FAMILY = {
    Family.META: frozenset({Kind.X, Kind.Y, Kind.S}),
    Family.META_DUAL: frozenset({Kind.X, Kind.Y, Kind.N, Kind.S}),
    Family.CGA: frozenset({Kind.X, Kind.Y}),
    Family.ORTHO_CHIRAL: frozenset({Kind.ELL, Kind.ELLBAR}),
}

# Coordinates and parameters of the one-body ring
T = ONE_BODY.var("t")
R = ONE_BODY.var("r")
ZETA = ONE_BODY.var("zeta")
MU = ONE_BODY.var("mu")
X = ONE_BODY.var("x")
GAMMA = ONE_BODY.var("gamma")
NU = ONE_BODY.var("nu")
C = ONE_BODY.var("c")
MU_INV = ONE_BODY.monomial({"mu": -1})
ADVECTED = T + MU * R  # t + mu*r

D_T = DiffOp.partial(ONE_BODY, "t")
D_R = DiffOp.partial(ONE_BODY, "r")
D_ZETA = DiffOp.partial(ONE_BODY, "zeta")
D_MU = DiffOp.partial(ONE_BODY, "mu")


@dataclass(frozen=True)
class GeneratorSpec:
    """Names one generator; params override formal symbols with exact values."""

    family: Family
    kind: Kind
    index: int = 0
    params: Mapping[str, Any] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return generator_label(Kind(self.kind), self.index)


def generator_label(kind: Kind, index: int = 0) -> str:
    return f"{kind}_{index}" if kind in INDEXED_KINDS else str(kind)


def _scalar(p: Poly) -> DiffOp:
    return DiffOp.scalar(ONE_BODY, p)


def _meta_x(n: int) -> DiffOp:
    op = D_T * -(T ** (n + 1)) + D_R * -((ADVECTED ** (n + 1) - T ** (n + 1)) * MU_INV)
    if n >= 0:
        op = op + _scalar(
            -(GAMMA * (ADVECTED ** n - T ** n) * MU_INV).scale(n + 1) - (X * T ** n).scale(n + 1))
    return op


def _meta_y(n: int) -> DiffOp:
    op = D_R * -(ADVECTED ** (n + 1))
    if n >= 0:
        op = op + _scalar(-(GAMMA * ADVECTED ** n).scale(n + 1))
    return op


def _dual_x(n: int) -> DiffOp:
    op = D_T * -(T ** (n + 1)) + D_R * -((ADVECTED ** (n + 1) - T ** (n + 1)) * MU_INV)
    if n >= 0:
        op = op + D_ZETA * ((ADVECTED ** n - T ** n) * MU_INV).scale(I * (n + 1))
        op = op + _scalar(-(X * T ** n).scale(n + 1))
    return op


def _dual_y(n: int) -> DiffOp:
    op = D_R * -(ADVECTED ** (n + 1))
    if n >= 0:
        op = op + D_ZETA * (ADVECTED ** n).scale(I * (n + 1))
    return op


def _dual_n() -> DiffOp:
    return D_R * -R - D_ZETA * (ZETA + C) + D_MU * MU - _scalar(NU)


def _advection() -> DiffOp:
    return D_T * -MU + D_R


def _ellbar(n: int) -> DiffOp:
    return _meta_y(n) * MU_INV


def _assert_regular(op: DiffOp, label: str) -> DiffOp:
    for _, coefficient in op.terms():
        assert coefficient.min_exponent("mu") >= 0, f"{label} kept a mu^-1 term: {op}"
    return op


@lru_cache(maxsize=None)
def _formal(family: Family, kind: Kind, index: int) -> DiffOp:
    label = f"{family}:{generator_label(kind, index)}"
    match (family, kind):
        case (Family.META, Kind.X):
            return _assert_regular(_meta_x(index), label)
        case (Family.META, Kind.Y):
            return _assert_regular(_meta_y(index), label)
        case (Family.META | Family.META_DUAL, Kind.S):
            return _advection()
        case (Family.META_DUAL, Kind.X):
            return _assert_regular(_dual_x(index), label)
        case (Family.META_DUAL, Kind.Y):
            return _dual_y(index)
        case (Family.META_DUAL, Kind.N):
            return _dual_n()
        case (Family.CGA, Kind.X):
            return _meta_x(index).substitute("mu", 0)
        case (Family.CGA, Kind.Y):
            return _meta_y(index).substitute("mu", 0)
        case (Family.ORTHO_CHIRAL, Kind.ELLBAR):
            return _ellbar(index)
        case (Family.ORTHO_CHIRAL, Kind.ELL):
            return _meta_x(index) - _ellbar(index)
    raise UnsupportedGeneratorError(family, kind)


def make_generator(spec: GeneratorSpec) -> DiffOp:
    """Build the exact DiffOp named by ``spec``."""
    family, kind = Family(spec.family), Kind(spec.kind)
    if kind not in _KINDS_BY_FAMILY[family]:
        raise UnsupportedGeneratorError(family, kind)
    index = spec.index if kind in INDEXED_KINDS else 0
    if index < -1:
        raise UnsupportedIndexError(index)
    op = _formal(family, kind, index)
    for name, value in sorted(spec.params.items()):
        op = op.substitute(name, value)
    return op


def generator(family: Family, kind: Kind, index: int = 0, **params: Any) -> DiffOp:
    return make_generator(GeneratorSpec(Family(family), Kind(kind), index, params))


# Verifiers


class _Table:
    """Generators of one family, built once before any parallel work."""

    def __init__(self, build: Callable[[Kind, int], DiffOp], kinds, top: int) -> None:
        self._ops = {(kind, n): build(kind, n) for kind in kinds for n in range(-1, top + 1)}

    def __call__(self, kind: Kind, n: int) -> DiffOp:
        return self._ops[(kind, n)]


def _check_n_max(n_max: int, minimum: int = 1) -> None:
    if n_max < minimum:
        raise DomainError(f"n_max >= {minimum}", f"got {n_max}")


def _commutator_check(table: _Table, a: tuple[Kind, int], b: tuple[Kind, int],
                      expected: DiffOp, rhs: str) -> PairCheck:
    lhs = f"[{generator_label(*a)},{generator_label(*b)}]"
    residual = op_commutator(table(*a), table(*b)) - expected
    logger.debug("%s - (%s): %s", lhs, rhs, "zero" if residual.is_zero else residual)
    return PairCheck.of(lhs, rhs, residual)


def _witt_pairs(table: _Table, n_max: int, first: Kind, second: Kind,
                factor: Optional[Poly], factor_text: str) -> list[tuple]:
    """[A_n, B_m] = factor*(n-m)*B_{n+m} for -1 <= n, m <= n_max (factor None: zero)."""
    jobs = []
    for n in range(-1, n_max + 1):
        for m in range(-1, n_max + 1):
            if n == m or factor is None or factor.is_zero:
                expected, rhs = DiffOp.zero(ONE_BODY), "0"
            else:
                expected = table(second, n + m) * factor.scale(n - m)
                rhs = f"{n - m}*{factor_text}{generator_label(second, n + m)}"
            jobs.append((table, (first, n), (second, m), expected, rhs))
    return jobs


def _run(jobs, threads: Optional[int]) -> list[PairCheck]:
    return parallel_map(lambda job: _commutator_check(*job), jobs, threads)


def _structure_report(label: str, table: _Table, n_max: int, yy_factor: Poly,
                      yy_text: str, threads: Optional[int]) -> AlgebraReport:
    one = ONE_BODY.one()
    jobs = []
    for n in range(-1, n_max + 1):
        for m in range(-1, n_max + 1):
            for first, second, factor, text in ((Kind.X, Kind.X, one, ""),
                                                 (Kind.X, Kind.Y, one, ""),
                                                 (Kind.Y, Kind.Y, yy_factor, yy_text)):
                if n == m or factor.is_zero:
                    expected, rhs = DiffOp.zero(ONE_BODY), "0"
                else:
                    expected = table(second, n + m) * factor.scale(n - m)
                    rhs = f"{n - m}*{text}{generator_label(second, n + m)}"
                jobs.append((table, (first, n), (second, m), expected, rhs))
    report = AlgebraReport.from_pairs(label, _run(jobs, threads))
    logger.info("Structure constants of %s up to n=%d: %d pairs, all_zero=%s",
                label, n_max, len(report.pairs), report.all_zero)
    return report


def verify_structure_constants(family: Family, n_max: int,
                               params: Optional[Mapping[str, Any]] = None,
                               threads: Optional[int] = None) -> AlgebraReport:
    """Check [X,X], [X,Y], [Y,Y] exactly for -1 <= n, m <= n_max."""
    family = Family(family)
    _check_n_max(n_max)
    if family is Family.ORTHO_CHIRAL:
        return verify_chiral_isomorphism(n_max, threads=threads)
    params = dict(params or {})
    table = _Table(lambda kind, n: make_generator(GeneratorSpec(family, kind, n, params)),
                   (Kind.X, Kind.Y), 2 * n_max)
    if family is Family.CGA:
        yy_factor, yy_text = ONE_BODY.zero(), ""
    else:
        yy_factor = MU.subst("mu", params["mu"]) if "mu" in params else MU
        yy_text = f"{params['mu']}*" if "mu" in params else "mu*"
    return _structure_report(str(family), table, n_max, yy_factor, yy_text, threads)


def verify_N_extension(n_max: int, c_shift: Any = 0, threads: Optional[int] = None) -> AlgebraReport:
    """[X_n, N] = 0 and [Y_n, N] = -Y_n for the dual generators.

    ``c_shift`` replaces c by c + c_shift in N.
    """
    _check_n_max(n_max, minimum=-1)
    table = _Table(lambda kind, n: make_generator(GeneratorSpec(Family.META_DUAL, kind, n)),
                   (Kind.X, Kind.Y), n_max)
    n_op = make_generator(GeneratorSpec(Family.META_DUAL, Kind.N))
    if c_shift:
        n_op = n_op - D_ZETA * ONE_BODY.const(c_shift)

    def check(job):
        kind, n = job
        residual = op_commutator(table(kind, n), n_op)
        if kind is Kind.Y:
            return PairCheck.of(f"[Y_{n},N]", f"-Y_{n}", residual + table(kind, n))
        return PairCheck.of(f"[X_{n},N]", "0", residual)

    jobs = [(kind, n) for n in range(-1, n_max + 1) for kind in (Kind.X, Kind.Y)]
    report = AlgebraReport.from_pairs("meta_dual:N", parallel_map(check, jobs, threads))
    logger.info("N extension up to n=%d: all_zero=%s", n_max, report.all_zero)
    return report


def verify_dynamical_symmetry(n_max: int, threads: Optional[int] = None) -> AlgebraReport:
    """Commutators of the advection operator S with X_n, Y_n and N.

    Also records the solution property: with gamma = mu*x imposed,
    [S, X_n] + (n+1) t^n S vanishes, so X_n maps solutions of S f = 0 to
    solutions.
    """
    _check_n_max(n_max, minimum=-1)
    s_op = make_generator(GeneratorSpec(Family.META, Kind.S))
    n_op = make_generator(GeneratorSpec(Family.META_DUAL, Kind.N))

    def check(n: int) -> list[PairCheck]:
        x_n = make_generator(GeneratorSpec(Family.META, Kind.X, n))
        y_n = make_generator(GeneratorSpec(Family.META, Kind.Y, n))
        checks = [PairCheck.of(f"[S,Y_{n}]", "0", op_commutator(s_op, y_n))]
        sx = op_commutator(s_op, x_n)
        if n < 0:
            checks.append(PairCheck.of(f"[S,X_{n}]", "0", sx))
            return checks
        transport = s_op * (T ** n).scale(n + 1)
        expected = -transport
        rhs = f"-{n + 1}*t^{n}*S"
        if n >= 1:
            expected = expected + _scalar((MU * X - GAMMA).scale(n * (n + 1)) * T ** (n - 1))
            rhs += f" + {n * (n + 1)}*(mu*x-gamma)*t^{n - 1}"
        checks.append(PairCheck.of(f"[S,X_{n}]", rhs, sx - expected))
        checks.append(PairCheck.of(
            f"[S,X_{n}]+{n + 1}*t^{n}*S | gamma=mu*x", "0",
            (sx + transport).replace("gamma", MU * X)))
        return checks

    pairs = [check for group in parallel_map(check, range(-1, n_max + 1), threads) for check in group]
    pairs.append(PairCheck.of("[S,N]", "-S", op_commutator(s_op, n_op) + s_op))
    report = AlgebraReport.from_pairs("meta:S", pairs)
    logger.info("Dynamical symmetry up to n=%d: all_zero=%s", n_max, report.all_zero)
    return report


def verify_chiral_isomorphism(n_max: int, threads: Optional[int] = None) -> AlgebraReport:
    """Two commuting Witt algebras: ell_n = X_n - mu^-1 Y_n, ellbar_n = mu^-1 Y_n."""
    _check_n_max(n_max)
    table = _Table(lambda kind, n: make_generator(GeneratorSpec(Family.ORTHO_CHIRAL, kind, n)),
                   (Kind.ELL, Kind.ELLBAR), 2 * n_max)
    one = ONE_BODY.one()
    jobs = []
    jobs += _witt_pairs(table, n_max, Kind.ELL, Kind.ELL, one, "")
    jobs += _witt_pairs(table, n_max, Kind.ELLBAR, Kind.ELLBAR, one, "")
    jobs += _witt_pairs(table, n_max, Kind.ELL, Kind.ELLBAR, None, "")
    pairs = _run(jobs, threads)
    for n in range(-1, n_max + 1):
        x_n = make_generator(GeneratorSpec(Family.META, Kind.X, n))
        pairs.append(PairCheck.of(f"ELL_{n}+ELLBAR_{n}", f"X_{n}",
                                  table(Kind.ELL, n) + table(Kind.ELLBAR, n) - x_n))
    report = AlgebraReport.from_pairs(str(Family.ORTHO_CHIRAL), pairs)
    logger.info("Chiral isomorphism up to n=%d: all_zero=%s", n_max, report.all_zero)
    return report


def contract_cga(n_max: int, threads: Optional[int] = None) -> tuple[dict[str, DiffOp], AlgebraReport]:
    """Set mu := 0 in every META generator and check the CGA algebra on the result."""
    _check_n_max(n_max)

    def contract(kind: Kind, n: int) -> DiffOp:
        return make_generator(GeneratorSpec(Family.META, kind, n)).substitute("mu", 0)

    table = _Table(contract, (Kind.X, Kind.Y), 2 * n_max)
    generators = {generator_label(kind, n): table(kind, n)
                  for kind in (Kind.X, Kind.Y) for n in range(-1, n_max + 1)}
    report = _structure_report("cga:contracted", table, n_max, ONE_BODY.zero(), "", threads)
    return generators, report


def ward_generators(family: Family) -> dict[str, DiffOp]:
    """Two-body generators annihilating the covariant two-point function.

    For META_DUAL the set includes N^[2]. The two-point function lives on
    mu1 = mu2, so the dilatation of the shared scale enters once.
    """
    family = Family(family)
    if family not in (Family.META, Family.META_DUAL, Family.CGA):
        raise UnsupportedGeneratorError(family, "ward")
    ops = {}
    for kind in (Kind.X, Kind.Y):
        for n in (-1, 0, 1):
            ops[generator_label(kind, n)] = two_body(make_generator(GeneratorSpec(family, kind, n)))
    if family is Family.META_DUAL:
        shared_scale = DiffOp.partial(TWO_BODY, "mu") * TWO_BODY.var("mu")
        ops["N"] = two_body(make_generator(GeneratorSpec(family, Kind.N))) - shared_scale
    return ops
