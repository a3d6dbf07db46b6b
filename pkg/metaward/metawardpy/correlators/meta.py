"""Meta-conformal two-point functions and their mu -> 0 limit"""
import numpy as np

from ..errors import DomainError
from .base import Correlator, CorrelatorFamily, FieldPoints, Partials, complex_power, register


class _MetaBase(Correlator):
    gamma_gated = True

    def validate(self) -> None:
        if self.spec.mu <= 0:
            raise DomainError("mu > 0", f"mu={self.spec.mu}")

    def _zero(self, p: FieldPoints) -> np.ndarray:
        return np.zeros(len(p))


@register
class NaiveMetaCorrelator(_MetaBase):
    """t^-2x (1 + mu r/t)^(-2 gamma/mu), singular on mu r = -t"""

    family = CorrelatorFamily.META_NAIVE
    domain = "1 + mu*r/t > 0"

    def inside(self, p: FieldPoints, margin: float = 0.0) -> np.ndarray:
        inside = np.abs(p.t) > margin
        with np.errstate(divide="ignore", invalid="ignore"):
            inside &= 1 + self.spec.mu * p.ratio > margin
        return inside

    def _value(self, p: FieldPoints) -> np.ndarray:
        spec = self.spec
        q = 1 + spec.mu * p.r / p.t
        return complex_power(p.t, -2 * spec.x1) * np.power(q, -2 * spec.gamma1 / spec.mu)

    def _log_gradient(self, p: FieldPoints) -> Partials:
        x, gamma, mu = self.spec.x1, self.spec.gamma1, self.spec.mu
        advected = p.t + mu * p.r
        q = advected / p.t
        zero = self._zero(p)
        return Partials(
            -2 * x / p.t + 2 * gamma * p.r / (p.t * advected),
            -2 * gamma / advected,
            zero,
            zero,
            2 * gamma / mu ** 2 * np.log(q) - 2 * gamma / mu * (p.r / p.t) / q,
        )


@register
class MetaCorrelator(_MetaBase):
    """|t|^-2x (1 + mu|r/t|)^(-2 gamma/mu), bounded and symmetric under (t, r) -> (-t, -r).

    Negative rapidities need ``literal_branches``: the value is then the naive
    form on sgn(r/t) = sgn(gamma) and 0 on the other side.
    """

    family = CorrelatorFamily.META_FINAL

    def validate(self) -> None:
        super().validate()
        if self.spec.gamma1 < 0 and not self.spec.literal_branches:
            raise DomainError("gamma1 >= 0", "set literal_branches for negative rapidities")

    @property
    def _literal(self) -> bool:
        return self.spec.gamma1 < 0

    def _branch(self, p: FieldPoints) -> np.ndarray:
        return p.r / p.t <= 0

    def inside(self, p: FieldPoints, margin: float = 0.0) -> np.ndarray:
        inside = np.abs(p.t) > margin
        if self.spec.gamma1 < 0:
            with np.errstate(divide="ignore", invalid="ignore"):
                inside &= ~(p.ratio <= 0) | (1 + self.spec.mu * p.ratio > margin)
        return inside

    def smooth(self, p: FieldPoints) -> np.ndarray:
        if self.spec.gamma1 == 0:
            return super().smooth(p)
        return p.r != 0

    def _value(self, p: FieldPoints) -> np.ndarray:
        x, gamma, mu = self.spec.x1, self.spec.gamma1, self.spec.mu
        scale = np.power(np.abs(p.t), -2 * x)
        if not self._literal:
            return scale * np.power(1 + mu * np.abs(p.r / p.t), -2 * gamma / mu) + 0j
        branch = self._branch(p)
        values = np.zeros(len(p), dtype=complex)
        q = 1 + mu * p.r[branch] / p.t[branch]
        values[branch] = scale[branch] * np.power(q, -2 * gamma / mu)
        return values

    def _log_gradient(self, p: FieldPoints) -> Partials:
        x, gamma, mu = self.spec.x1, self.spec.gamma1, self.spec.mu
        zero = self._zero(p)
        if self._literal:
            branch = self._branch(p)
            t, r = np.where(branch, p.t, 1.0), np.where(branch, p.r, 0.0)
            advected = t + mu * r
            q = advected / t
            return Partials(
                np.where(branch, -2 * x / t + 2 * gamma * r / (t * advected), 0.0),
                np.where(branch, -2 * gamma / advected, 0.0),
                zero,
                zero,
                np.where(branch, 2 * gamma / mu ** 2 * np.log(q) - 2 * gamma / mu * (r / t) / q, 0.0),
            )
        ratio = np.abs(p.r / p.t)
        b = 1 + mu * ratio
        return Partials(
            -2 * x / p.t + 2 * gamma * ratio / (p.t * b),
            -2 * gamma * np.sign(p.r) / (np.abs(p.t) * b),
            zero,
            zero,
            2 * gamma / mu ** 2 * np.log(b) - 2 * gamma / mu * ratio / b,
        )


@register
class CgaCorrelator(Correlator):
    """|t|^-2x exp(-2|gamma r/t|), the mu -> 0 limit of the meta-conformal form"""

    family = CorrelatorFamily.CGA
    gamma_gated = True

    def smooth(self, p: FieldPoints) -> np.ndarray:
        if self.spec.gamma1 == 0:
            return super().smooth(p)
        return p.r != 0

    def _value(self, p: FieldPoints) -> np.ndarray:
        x, gamma = self.spec.x1, self.spec.gamma1
        return np.power(np.abs(p.t), -2 * x) * np.exp(-2 * abs(gamma) * np.abs(p.r / p.t)) + 0j

    def _log_gradient(self, p: FieldPoints) -> Partials:
        x, gamma = self.spec.x1, abs(self.spec.gamma1)
        zero = np.zeros(len(p))
        ratio = np.abs(p.r / p.t)
        return Partials(
            -2 * x / p.t + 2 * gamma * ratio / p.t,
            -2 * gamma * np.sign(p.r) / np.abs(p.t),
            zero,
            zero,
            zero,
        )
