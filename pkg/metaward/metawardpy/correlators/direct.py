"""Ortho-conformal and Schrödinger two-point functions"""
import numpy as np

from ..errors import DomainError
from .base import PARTIAL_NAMES, Correlator, CorrelatorFamily, FieldPoints, Partials, complex_power, register


@register
class OrthoCorrelator(Correlator):
    """(t^2 + r^2)^-x"""

    family = CorrelatorFamily.ORTHO
    domain = "(t, r) != (0, 0)"

    def inside(self, p: FieldPoints, margin: float = 0.0) -> np.ndarray:
        return np.hypot(p.t, p.r) > margin

    def _value(self, p: FieldPoints) -> np.ndarray:
        return np.power(p.t ** 2 + p.r ** 2, -self.spec.x1) + 0j

    def _log_gradient(self, p: FieldPoints) -> Partials:
        rho = p.t ** 2 + p.r ** 2
        x = self.spec.x1
        zero = np.zeros(len(p))
        return Partials(-2 * x * p.t / rho, -2 * x * p.r / rho, zero, zero, zero)


@register
class SchrodingerCorrelator(Correlator):
    """t^-x exp(-M r^2 / 2t), principal branch of t^-x for t < 0"""

    family = CorrelatorFamily.SCHR

    def _value(self, p: FieldPoints) -> np.ndarray:
        return complex_power(p.t, -self.spec.x1) * np.exp(-self.spec.M1 * p.r ** 2 / (2 * p.t))

    def _log_gradient(self, p: FieldPoints) -> Partials:
        mass, x = self.spec.M1, self.spec.x1
        zero = np.zeros(len(p))
        return Partials(-x / p.t + mass * p.r ** 2 / (2 * p.t ** 2), -mass * p.r / p.t, zero, zero, zero)


@register
class CausalSchrodingerCorrelator(SchrodingerCorrelator):
    """Schrödinger response: the plain form on M t > 0, exactly zero on M t < 0.

    t = 0 stays outside the domain; the step function is not given a value there.
    """

    family = CorrelatorFamily.SCHR_EXT

    def validate(self) -> None:
        if self.spec.M1 == 0:
            raise DomainError("M1 != 0", "the causal response needs a mass")

    def causal(self, p: FieldPoints) -> np.ndarray:
        return self.spec.M1 * p.t > 0

    def _value(self, p: FieldPoints) -> np.ndarray:
        causal = self.causal(p)
        values = np.zeros(len(p), dtype=complex)
        values[causal] = super()._value(p.select(causal))
        return values

    def _log_gradient(self, p: FieldPoints) -> Partials:
        causal = self.causal(p)
        inner = super()._log_gradient(p.select(causal))
        columns = []
        for name in PARTIAL_NAMES:
            column = np.zeros(len(p))
            column[causal] = getattr(inner, name)
            columns.append(column)
        return Partials(*columns)
