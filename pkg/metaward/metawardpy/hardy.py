"""Hardy-class bound, spectral one-sidedness and the dualization round trip.

The dual profile f(zeta) = (zeta + i lambda)^-s, s = nu1 + nu2, is analytic
in the upper half plane for lambda > 0. Its L2 norm along horizontal lines
is bounded (the M2 bound) and its Fourier spectrum lives on gamma > 0 with
density proportional to gamma^(s-1) exp(-lambda gamma).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.signal import windows

from .const import (
    M2_TOLERANCE,
    ROUNDTRIP_SIZE,
    ROUNDTRIP_TOLERANCE,
    ROUNDTRIP_WINDOW,
    SPECTRAL_INCONCLUSIVE,
    SPECTRAL_TOLERANCE,
    SPECTRUM_SIZE,
    SPECTRUM_WINDOW,
    TAPER,
)
from .dataclasses import HardyReport, QuadratureResult, RoundtripReport, SpectrumReport
from .errors import DivergenceError, DomainError, QuadratureError
from .quadrature import integrate

logger = logging.getLogger("metawardpy.hardy")

# Lanczos approximation, g = 7
_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class HardyParams:
    nu_sum: float
    lam: float
    v: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {"nu_sum": self.nu_sum, "lambda": self.lam, "v": self.v}


def gamma_fn(z: float) -> float:
    """Gamma function for z > 0."""
    if z <= 0:
        raise DomainError("z > 0", f"z={z}")
    shift = 1.0
    while z < 0.5:
        shift *= z
        z += 1
    z -= 1
    series = _LANCZOS[0] + sum(c / (z + k) for k, c in enumerate(_LANCZOS[1:], start=1))
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * math.exp((z + 0.5) * math.log(t) - t) * series / shift


def _check_convergent(p: HardyParams) -> float:
    if p.nu_sum <= 0.5:
        raise DivergenceError(p.nu_sum)
    if p.lam <= 0 or p.v < 0:
        raise DomainError("lambda > 0 and v >= 0", f"lambda={p.lam} v={p.v}")
    return p.v + p.lam


def m2_closed(p: HardyParams) -> float:
    """sqrt(pi) Gamma(s - 1/2)/Gamma(s) (v + lambda)^(1 - 2s).

    Decreasing in v, so v = 0 gives the supremum over v > 0.
    """
    a = _check_convergent(p)
    s = p.nu_sum
    return math.sqrt(math.pi) * gamma_fn(s - 0.5) / gamma_fn(s) * a ** (1 - 2 * s)


def m2_numeric(p: HardyParams, target_tol: float = M2_TOLERANCE) -> QuadratureResult:
    """Integral of |f(u + iv)|^2 = (u^2 + (v + lambda)^2)^-s over the real line.

    u = (v + lambda) tan(theta) maps it onto 2 a^(1-2s) cos(theta)^(2s-2)
    on [0, pi/2). For s < 1 the endpoint singularity is removed by a further
    substitution pi/2 - theta = psi^k with k = 1/(2s - 1).
    """
    a = _check_convergent(p)
    s = p.nu_sum
    prefactor = 2 * a ** (1 - 2 * s)
    if s >= 1:
        def integrand(theta: np.ndarray) -> np.ndarray:
            return prefactor * np.cos(theta) ** (2 * s - 2)

        upper = math.pi / 2
    else:
        k = 1 / (2 * s - 1)

        def integrand(psi: np.ndarray) -> np.ndarray:
            phi = psi ** k
            # sin(phi)^(2s-2) * k psi^(k-1) with the power of psi cancelled
            return prefactor * k * (np.sin(phi) / phi) ** (2 * s - 2)

        upper = (math.pi / 2) ** (1 / k)
    result = integrate(integrand, 0.0, upper, rel_tol=target_tol / 10)
    if not result.converged:
        raise QuadratureError(result)
    return result


def check_m2(p: HardyParams, tolerance: float = M2_TOLERANCE) -> HardyReport:
    """Numeric M2 against the closed form."""
    closed = m2_closed(p)
    result = m2_numeric(p, tolerance)
    gap = abs(result.value - closed) / closed
    logger.info("M2 for %s: numeric %.15g closed %.15g gap %.3g", p.as_dict(), result.value, closed, gap)
    return HardyReport(params=p.as_dict(), value=result.value, closed_form=closed, rel_gap=gap,
                       abs_error_estimate=result.abs_error_estimate, evaluations=result.evaluations,
                       tolerance=tolerance, passed=gap <= tolerance)


def dual_profile_line(nu_sum: float, lam: float, size: int, length: float) -> tuple[np.ndarray, np.ndarray]:
    """Samples of (zeta + i lambda)^-s on [-L/2, L/2) and their abscissae."""
    step = length / size
    zeta = (np.arange(size) - size // 2) * step
    argument = zeta + 1j * lam
    # principal branch: the argument stays off the cut while lambda != 0
    assert np.all(argument.imag != 0), "profile argument touches the branch cut"
    return zeta, np.power(argument, -nu_sum)


def _spectrum(values: np.ndarray, length: float, taper: float) -> tuple[np.ndarray, np.ndarray]:
    size = values.size
    step = length / size
    window = windows.tukey(size, alpha=taper, sym=False)
    transform = np.fft.fft(values * window) * step
    frequencies = 2 * np.pi * np.fft.fftfreq(size, d=step)
    return frequencies, transform


def spectral_onesidedness(nu_sum: float, lam: float, N: int = SPECTRUM_SIZE, L: float = SPECTRUM_WINDOW,
                          taper: float = TAPER, tolerance: float = SPECTRAL_TOLERANCE) -> SpectrumReport:
    """Share of spectral energy on the wrong side of gamma = 0.

    For lambda > 0 the energy must sit at gamma > 0, for lambda < 0 at
    gamma < 0. The DC bin belongs to neither side and the Nyquist bin is
    dropped. A wrong-side share between ``tolerance`` and 1e-3 is reported
    as inconclusive (under-resolved grid) rather than as a failure of the claim.
    """
    if lam == 0:
        raise DomainError("lambda != 0", "the cut touches the real axis")
    if nu_sum < 1.5:
        raise DomainError("nu_sum >= 1.5", f"nu_sum={nu_sum}")
    zeta, values = dual_profile_line(nu_sum, lam, N, L)
    frequencies, transform = _spectrum(values, L, taper)
    power = np.abs(transform) ** 2
    nyquist = np.isclose(np.abs(frequencies), np.pi * N / L)
    negative = float(power[(frequencies < 0) & ~nyquist].sum())
    positive = float(power[frequencies > 0].sum())
    total = float(power.sum())
    wrong = (negative if lam > 0 else positive) / total
    step = L / N
    energy = float(np.sum(np.abs(values) ** 2) * step)
    tail = 2 * (L / 2) ** (1 - 2 * nu_sum) / (2 * nu_sum - 1)
    closed = m2_closed(HardyParams(nu_sum, abs(lam)))
    inconclusive = tolerance < wrong <= SPECTRAL_INCONCLUSIVE
    if inconclusive:
        logger.warning("Spectral test inconclusive: wrong-side fraction %.3g for N=%d L=%g", wrong, N, L)
    return SpectrumReport(
        params={"nu_sum": nu_sum, "lambda": lam, "taper": taper},
        N=N,
        L=L,
        window="tukey",
        negative_fraction=negative / total,
        positive_fraction=positive / total,
        wrong_side_fraction=wrong,
        total_energy=energy,
        closed_energy=closed,
        energy_gap=abs(energy + tail - closed) / closed,
        tail_estimate=tail,
        mean_frequency=float(np.sum(np.abs(frequencies) * power) / total),
        inconclusive=inconclusive,
        passed=wrong <= tolerance,
    )


def spectral_density(gamma: np.ndarray, nu_sum: float, lam: float) -> np.ndarray:
    """|Fourier transform| of the profile: 2 pi gamma^(s-1) exp(-lambda gamma)/Gamma(s) on gamma > 0."""
    gamma = np.asarray(gamma, dtype=float)
    return np.where(gamma > 0, 2 * np.pi * np.power(np.abs(gamma), nu_sum - 1) * np.exp(-lam * gamma)
                    / gamma_fn(nu_sum), 0.0)


def reconstruct_profile(zeta: float, nu_sum: float, lam: float) -> complex:
    """Inverse transform of the model density at one zeta, by quadrature over gamma > 0."""
    phase = complex(1j ** -nu_sum) / (2 * np.pi)
    upper = (40 + 2 * nu_sum) / lam

    def integrand(gamma: np.ndarray) -> np.ndarray:
        return np.exp(1j * zeta * gamma) * spectral_density(gamma, nu_sum, lam)

    result = integrate(integrand, 0.0, upper, rel_tol=1e-12)
    if not result.converged:
        raise QuadratureError(result)
    return phase * complex(result.value)


def dualization_roundtrip(nu_sum: float, lam: float, N: int = ROUNDTRIP_SIZE, L: float = ROUNDTRIP_WINDOW,
                          taper: float = TAPER, mu: float = 1.0, gamma0: float = 1.0,
                          reconstruct_at: Sequence[float] = (-1.0, 0.0, 1.0),
                          tolerance: float = ROUNDTRIP_TOLERANCE) -> RoundtripReport:
    """Transform the profile, match the recovered density, and transform back.

    The bridge compares exp(-2 gamma0 lambda) with (1 + mu u)^(-2 gamma0/mu)
    where u solves lambda = ln(1 + mu u)/mu.
    """
    if lam <= 0:
        raise DomainError("lambda > 0", f"lambda={lam}")
    if nu_sum <= 0.5:
        raise DivergenceError(nu_sum)
    _, values = dual_profile_line(nu_sum, lam, N, L)
    frequencies, transform = _spectrum(values, L, taper)
    magnitude = np.abs(transform)
    model = spectral_density(frequencies, nu_sum, lam)
    bulk = (frequencies >= 20 * 2 * np.pi / L) & (model >= 1e-2 * model.max())
    gammas = frequencies[bulk]
    peak = max((nu_sum - 1) / lam, float(gammas.min()))
    ref = int(np.argmin(np.abs(gammas - peak)))
    ratio = (magnitude[bulk] / magnitude[bulk][ref]) / (model[bulk] / model[bulk][ref])
    deviation = np.abs(ratio - 1)
    worst = int(np.argmax(deviation))
    amplitude_gap = float(np.max(np.abs(magnitude[bulk] - model[bulk]) / model[bulk]))

    reconstruction_gap = 0.0
    for zeta in reconstruct_at:
        exact = complex(np.power(zeta + 1j * lam, -nu_sum))
        rebuilt = reconstruct_profile(zeta, nu_sum, lam)
        reconstruction_gap = max(reconstruction_gap, abs(rebuilt - exact) / abs(exact))

    u = math.expm1(mu * lam) / mu
    bridge = math.exp(-2 * gamma0 * lam)
    expected = (1 + mu * u) ** (-2 * gamma0 / mu)
    bridge_gap = abs(bridge - expected) / expected
    shape_gap = float(deviation[worst])
    passed = (shape_gap <= tolerance and amplitude_gap <= 10 * tolerance
              and reconstruction_gap <= tolerance and bridge_gap <= 1e-12)
    logger.info("Round trip nu_sum=%g lambda=%g: shape %.3g amplitude %.3g reconstruction %.3g",
                nu_sum, lam, shape_gap, amplitude_gap, reconstruction_gap)
    return RoundtripReport(
        params={"nu_sum": nu_sum, "lambda": lam, "mu": mu, "u": u, "gamma0": gamma0, "taper": taper},
        N=N,
        L=L,
        window="tukey",
        bulk=[float(gammas.min()), float(gammas.max())],
        shape_gap=shape_gap,
        max_deviation_at=float(gammas[worst]),
        amplitude_gap=amplitude_gap,
        reconstruction_gap=reconstruction_gap,
        bridge_value=bridge,
        bridge_expected=expected,
        bridge_gap=bridge_gap,
        tolerance=tolerance,
        passed=passed,
    )


def fraction_mirror_gap(nu_sum: float, lam: float, N: int = SPECTRUM_SIZE, L: float = SPECTRUM_WINDOW,
                        taper: float = TAPER) -> float:
    """|fraction(lambda) - mirrored fraction(-lambda)|."""
    ahead = spectral_onesidedness(nu_sum, abs(lam), N, L, taper)
    behind = spectral_onesidedness(nu_sum, -abs(lam), N, L, taper)
    return abs(ahead.negative_fraction - behind.positive_fraction)


def m2_profile(nu_sum: float, lam: float, offsets: Sequence[float],
               target_tol: Optional[float] = None) -> list[float]:
    """Numeric M2 at several offsets v; the sequence decreases strictly."""
    tol = M2_TOLERANCE if target_tol is None else target_tol
    return [m2_numeric(HardyParams(nu_sum, lam, v), tol).value for v in offsets]
