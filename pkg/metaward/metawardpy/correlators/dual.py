"""Two-point function of the dual representation"""
from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .base import Correlator, CorrelatorFamily, FieldPoints, Partials, complex_power, register


def rapidity_shift(u: np.ndarray, mu: float) -> np.ndarray:
    """lambda = ln(1 + mu u)/mu"""
    return np.log1p(mu * np.asarray(u, dtype=float)) / mu


def dual_argument(zeta_plus: np.ndarray, u: np.ndarray, mu: float, c: float = 0.0) -> np.ndarray:
    """zeta_+ + c + i ln(1 + mu u)/mu"""
    return np.asarray(zeta_plus, dtype=float) + c + 1j * rapidity_shift(u, mu)


def dual_profile(u: np.ndarray, v: np.ndarray, nu_sum: float, mu: float) -> np.ndarray:
    """(v - i u + i ln(1 + mu u)/mu)^-nu_sum on the principal branch"""
    u = np.asarray(u, dtype=float)
    if np.any(1 + mu * u <= 0):
        raise DomainError("1 + mu*u > 0")
    return complex_power(np.asarray(v, dtype=float) - 1j * u + 1j * rapidity_shift(u, mu), -nu_sum)


@register
class DualCorrelator(Correlator):
    """|t|^-2x (zeta_+ + c + i ln(1 + mu r/t)/mu)^-(nu1 + nu2)

    Arguments on the branch cut (-inf, 0] are outside the domain.
    """

    family = CorrelatorFamily.DUAL
    domain = "1 + mu*r/t > 0 and zeta_+ + c + i*ln(1 + mu*r/t)/mu off (-inf, 0]"

    def validate(self) -> None:
        if self.spec.mu <= 0:
            raise DomainError("mu > 0", f"mu={self.spec.mu}")

    def _argument(self, p: FieldPoints) -> np.ndarray:
        return dual_argument(p.zeta_plus, p.r / p.t, self.spec.mu, self.spec.c)

    def inside(self, p: FieldPoints, margin: float = 0.0) -> np.ndarray:
        inside = np.abs(p.t) > margin
        with np.errstate(divide="ignore", invalid="ignore"):
            q = 1 + self.spec.mu * p.ratio
            inside &= q > margin
            z = p.zeta_plus + self.spec.c + 1j * np.log(np.where(q > 0, q, 1.0)) / self.spec.mu
        off_cut = (np.abs(z.imag) > margin) | (z.real > margin)
        return inside & off_cut

    def _value(self, p: FieldPoints) -> np.ndarray:
        x = self.spec.x1
        return np.power(np.abs(p.t), -2 * x) * complex_power(self._argument(p), -self.spec.nu_sum)

    def _log_gradient(self, p: FieldPoints) -> Partials:
        x, mu, nu = self.spec.x1, self.spec.mu, self.spec.nu_sum
        advected = p.t + mu * p.r
        u = p.r / p.t
        q = advected / p.t
        z = self._argument(p)
        shift = np.log(q) / mu
        return Partials(
            -2 * x / p.t - nu * (-1j * p.r / (p.t * advected)) / z,
            -nu * (1j / advected) / z,
            -nu * 0.5 / z,
            -nu * 0.5 / z,
            -nu * (1j * (u / q - shift) / mu) / z,
        )
