"""Correlator specs, sample points and the evaluator base class"""
from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, ClassVar, Union

import numpy as np

from ..errors import DomainError, NonDifferentiablePointError

logger = logging.getLogger("metawardpy.correlators")

STANDARD_T = (0.5, 1.0, 2.0, 4.0)
STANDARD_R = (0.25, 1.0, 3.0)
STANDARD_ZETA = (-1.0, 0.5, 2.0)
GRID_VERSION = 1


class CorrelatorFamily(Enum):
    """Closed-form two-point functions"""

    ORTHO = "ortho"
    SCHR = "schr"
    SCHR_EXT = "schr_ext"
    META_NAIVE = "meta_naive"
    META_FINAL = "meta_final"
    CGA = "cga"
    DUAL = "dual"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CorrelatorSpec:
    """Family plus the quantum numbers of both fields.

    Delta-function constraints of the two-point functions are modelled by the
    Kronecker gates: unequal x (or gamma, where it labels the field) gives 0.
    """

    family: CorrelatorFamily
    x1: float = 1.0
    x2: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    nu1: float = 1.0
    nu2: float = 1.0
    mu: float = 1.0
    M1: float = 1.0
    c: float = 0.0
    normalization: complex = 1.0
    literal_branches: bool = False

    @classmethod
    def matched(cls, family: Union[CorrelatorFamily, str], x: float = 1.0, gamma: float = 1.0,
                **kwargs: Any) -> CorrelatorSpec:
        """Spec on the constraint surface x1 = x2, gamma1 = gamma2."""
        return cls(CorrelatorFamily(family), x1=x, x2=x, gamma1=gamma, gamma2=gamma, **kwargs)

    def with_family(self, family: CorrelatorFamily) -> CorrelatorSpec:
        return replace(self, family=CorrelatorFamily(family))

    @property
    def nu_sum(self) -> float:
        return self.nu1 + self.nu2

    def params(self) -> dict[str, Any]:
        """Flat parameter set for reports."""
        values = asdict(self)
        values["family"] = str(self.family)
        values["normalization"] = {"re": complex(self.normalization).real,
                                   "im": complex(self.normalization).imag}
        return values

    def assignment(self) -> dict[str, float]:
        """Values of the two-body ring parameters."""
        return {"x1": self.x1, "x2": self.x2, "gamma1": self.gamma1, "gamma2": self.gamma2,
                "nu1": self.nu1, "nu2": self.nu2, "c": self.c, "mu": self.mu}


@dataclass(frozen=True)
class FieldPoint:
    """Separation t = t1 - t2, r = r1 - r2 and the dual coordinates."""

    t: float
    r: float
    zeta1: float = 0.0
    zeta2: float = 0.0


@dataclass(frozen=True)
class FieldPoints:
    """Vector of sample points; all arrays share one shape."""

    t: np.ndarray
    r: np.ndarray
    zeta1: np.ndarray = field(default=None)
    zeta2: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        t = np.atleast_1d(np.asarray(self.t, dtype=float))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", np.broadcast_to(np.asarray(self.r, dtype=float), t.shape).copy())
        for name in ("zeta1", "zeta2"):
            value = getattr(self, name)
            value = np.zeros_like(t) if value is None else np.asarray(value, dtype=float)
            object.__setattr__(self, name, np.broadcast_to(value, t.shape).copy())

    @classmethod
    def of(cls, points: Union[FieldPoint, FieldPoints, list[FieldPoint]]) -> FieldPoints:
        if isinstance(points, FieldPoints):
            return points
        if isinstance(points, FieldPoint):
            points = [points]
        return cls(t=[p.t for p in points], r=[p.r for p in points],
                   zeta1=[p.zeta1 for p in points], zeta2=[p.zeta2 for p in points])

    def __len__(self) -> int:
        return self.t.size

    @property
    def ratio(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.r / self.t

    @property
    def zeta_plus(self) -> np.ndarray:
        return 0.5 * (self.zeta1 + self.zeta2)

    def select(self, mask: np.ndarray) -> FieldPoints:
        return FieldPoints(self.t[mask], self.r[mask], self.zeta1[mask], self.zeta2[mask])

    def mirrored(self) -> FieldPoints:
        """(t, r) -> (-t, -r); the dual coordinates are kept."""
        return FieldPoints(-self.t, -self.r, self.zeta1, self.zeta2)

    def point(self, k: int) -> FieldPoint:
        return FieldPoint(float(self.t[k]), float(self.r[k]), float(self.zeta1[k]), float(self.zeta2[k]))


@dataclass
class Partials:
    """First partials of a correlator in t, r, zeta1, zeta2 and mu."""

    t: np.ndarray
    r: np.ndarray
    zeta1: np.ndarray
    zeta2: np.ndarray
    mu: np.ndarray

    def scaled(self, factor: np.ndarray) -> Partials:
        return Partials(*(factor * getattr(self, name) for name in PARTIAL_NAMES))

    def squeeze(self) -> Partials:
        return Partials(*(_squeeze(getattr(self, name)) for name in PARTIAL_NAMES))


PARTIAL_NAMES = ("t", "r", "zeta1", "zeta2", "mu")


def _squeeze(values: np.ndarray) -> Any:
    return complex(values[0]) if np.ndim(values) and values.size == 1 else values


def standard_grid(with_zeta: bool = True) -> FieldPoints:
    """Tensor grid t in ±STANDARD_T, r in ±STANDARD_R (zeta1, zeta2 in STANDARD_ZETA)."""
    ts = sorted({s * t for t in STANDARD_T for s in (-1, 1)})
    rs = sorted({s * r for r in STANDARD_R for s in (-1, 1)})
    zetas = STANDARD_ZETA if with_zeta else (0.0,)
    rows = list(itertools.product(ts, rs, zetas, zetas))
    t, r, z1, z2 = (np.array(column) for column in zip(*rows))
    return FieldPoints(t, r, z1, z2)


class Correlator:
    """Evaluator of one correlator family.

    Subclasses provide the domain mask, the bare value and the logarithmic
    gradient; gating, normalization and domain errors are handled here.
    """

    family: ClassVar[CorrelatorFamily]
    domain: ClassVar[str] = "t != 0"
    gamma_gated: ClassVar[bool] = False

    def __init__(self, spec: CorrelatorSpec) -> None:
        self._spec = spec

    @property
    def spec(self) -> CorrelatorSpec:
        return self._spec

    @property
    def gated(self) -> bool:
        """True when the Kronecker constraints force the value to vanish."""
        spec = self._spec
        return spec.x1 != spec.x2 or (self.gamma_gated and spec.gamma1 != spec.gamma2)

    def validate(self) -> None:
        """Point-independent parameter checks."""

    def inside(self, p: FieldPoints, margin: float = 0.0) -> np.ndarray:
        """Mask of points inside the domain, at least ``margin`` from its boundary."""
        return np.abs(p.t) > margin

    def smooth(self, p: FieldPoints) -> np.ndarray:
        return np.ones(len(p), dtype=bool)

    def _value(self, p: FieldPoints) -> np.ndarray:
        raise NotImplementedError

    def _log_gradient(self, p: FieldPoints) -> Partials:
        raise NotImplementedError

    def _check(self, p: FieldPoints) -> None:
        self.validate()
        mask = self.inside(p)
        if not np.all(mask):
            bad = p.point(int(np.argmin(mask)))
            raise DomainError(self.domain, f"{self.family} at {bad}")

    def evaluate(self, p: FieldPoints) -> np.ndarray:
        self._check(p)
        if self.gated:
            return np.zeros(len(p), dtype=complex)
        return complex(self._spec.normalization) * self._value(p)

    def gradient(self, p: FieldPoints) -> Partials:
        self._check(p)
        smooth = self.smooth(p)
        if not np.all(smooth):
            bad = p.point(int(np.argmin(smooth)))
            raise NonDifferentiablePointError("r != 0", f"{self.family} is not smooth at {bad}")
        if self.gated:
            zero = np.zeros(len(p), dtype=complex)
            return Partials(zero, zero, zero, zero, zero)
        return self._log_gradient(p).scaled(self.evaluate(p))


_REGISTRY: dict[CorrelatorFamily, type[Correlator]] = {}


def register(cls: type[Correlator]) -> type[Correlator]:
    _REGISTRY[cls.family] = cls
    return cls


def correlator_for(spec: CorrelatorSpec) -> Correlator:
    return _REGISTRY[CorrelatorFamily(spec.family)](spec)


def eval_correlator(spec: CorrelatorSpec, p: Union[FieldPoint, FieldPoints]) -> Any:
    """Value at a point (complex) or at every point of a FieldPoints (array)."""
    values = correlator_for(spec).evaluate(FieldPoints.of(p))
    return complex(values[0]) if isinstance(p, FieldPoint) else values


def grad_correlator(spec: CorrelatorSpec, p: Union[FieldPoint, FieldPoints]) -> Partials:
    """Analytic first partials in t, r, zeta1, zeta2 and mu."""
    partials = correlator_for(spec).gradient(FieldPoints.of(p))
    return partials.squeeze() if isinstance(p, FieldPoint) else partials


def finite_difference_partials(spec: CorrelatorSpec, p: FieldPoints, step: float = 1e-6) -> Partials:
    """Central differences with step ``step * max(1, |coordinate|)``."""
    correlator = correlator_for(spec)
    p = FieldPoints.of(p)

    def shifted(name: str, sign: float) -> tuple[np.ndarray, Any]:
        if name == "mu":
            h = step * max(1.0, abs(spec.mu))
            return correlator_for(replace(spec, mu=spec.mu + sign * h)).evaluate(p), h
        coords = {n: getattr(p, n) for n in ("t", "r", "zeta1", "zeta2")}
        h = step * np.maximum(1.0, np.abs(coords[name]))
        coords[name] = coords[name] + sign * h
        return correlator.evaluate(FieldPoints(**coords)), h

    columns = []
    for name in PARTIAL_NAMES:
        plus, h = shifted(name, 1.0)
        minus, _ = shifted(name, -1.0)
        columns.append((plus - minus) / (2 * h))
    return Partials(*columns)


def complex_power(base: np.ndarray, exponent: float) -> np.ndarray:
    """Principal branch base**exponent on C minus (-inf, 0]."""
    return np.power(np.asarray(base, dtype=complex) + 0j, exponent)
