"""Closed forms for the two-photon interference of sequential photons.

A photon pair emitted at times 0 and T, split on a beamsplitter and analyzed
by two unbalanced interferometers, produces coincidence fringes

    p12 = 2 R_BS T_BS R1 T1 R2 T2 * (1 + V cos(phase)),

where the fringe visibility V depends only on the decay rate gamma_prime, the
dephasing rate gamma, and the three delays (T, d_tau1, d_tau2):

    V = exp(-gamma_prime/2 * (s1 + s2) - gamma * delta)
        * [1 + exp(-gamma_prime/2 * delta) * cosh(gamma_prime/2 * (s1 - s2))
             * (indistinguishability - 1)]

with s_i = |T - d_tau_i| and delta = |d_tau1 - d_tau2|.  At the balanced
point d_tau1 = d_tau2 = T the visibility equals the indistinguishability
T2/(2*T1) exactly.

This module also provides the derived engineering quantities: the Purcell
factor needed to cross the Bell-test visibility threshold 1/sqrt(2), the
arm-length tolerance window around the balanced point, and the first-order
sensitivity to emission-delay jitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    BELL_THRESHOLD,
    C_NM_PER_PS,
    DerivedRates,
    EmitterParams,
    OpticsConfig,
    ParameterError,
    derive_rates,
)


class UnreachableTargetError(Exception):
    """No Purcell factor in the search range reaches the requested visibility."""


class EmptyWindowError(Exception):
    """The delay tolerance window is empty: even the balanced point misses the target."""


@dataclass(frozen=True)
class VisibilityResult:
    """Fringe visibility split into its two factors.

    v : the visibility itself, v = envelope_prefactor * bracket
    envelope_prefactor : pure exponential decay in the three delays
    bracket : the dephasing correction, between indistinguishability and 1
    """

    v: float
    envelope_prefactor: float
    bracket: float


@dataclass(frozen=True)
class CoincidenceResult:
    """Joint detection probability at a fixed fringe phase.

    p12 = prefactor * (1 + v * cos(phase)) with prefactor the product of all
    splitter coefficients (times 2 for the two post-selected paths).
    """

    p12: float
    prefactor: float
    phase: float


def detection_density(rates: DerivedRates, t, t0: float = 0.0, tau: float = 0.0):
    """Single-photon detection probability density, gamma_prime * exp(-gamma_prime * x).

    x = t - tau - t0 is the time since the wavepacket front (emission time t0
    plus propagation delay tau) reached the detector; the density vanishes for
    x < 0 and starts at its peak gamma_prime at x = 0.  Integrates to 1.

    Parameters
    ----------
    rates : DerivedRates
    t : float or ndarray
        Detection time in ps.
    t0, tau : float
        Emission time and propagation delay in ps.

    Returns
    -------
    float or ndarray, probability density in 1/ps
    """
    gp = rates.gamma_prime
    x = np.asarray(t, dtype=float) - tau - t0
    # clip before exp so far-negative x cannot overflow, then mask it out
    out = np.where(x >= 0.0, gp * np.exp(-gp * np.clip(x, 0.0, None)), 0.0)
    if np.ndim(t) == 0:
        return float(out)
    return out


def visibility_at(rates: DerivedRates, emission_delay: float,
                  d_tau1: float, d_tau2: float) -> VisibilityResult:
    """Fringe visibility for explicit delays; see the module docstring formula.

    The cosh factor is expanded into its two exponentials and each is paired
    with exp(-gamma_prime/2 * delta) before evaluation.  Since
    |s1 - s2| <= delta (triangle inequality), both paired exponents are <= 0,
    so the evaluation cannot overflow for any sweep range and the bracket is
    computed as a convex combination of 1 and the indistinguishability.
    """
    gp, g = rates.gamma_prime, rates.gamma
    s1 = abs(emission_delay - d_tau1)
    s2 = abs(emission_delay - d_tau2)
    delta = abs(d_tau1 - d_tau2)
    envelope = math.exp(-0.5 * gp * (s1 + s2) - g * delta)
    w = 0.5 * (math.exp(0.5 * gp * ((s1 - s2) - delta))
               + math.exp(-0.5 * gp * ((s1 - s2) + delta)))
    bracket = (1.0 - w) + w * rates.indistinguishability
    return VisibilityResult(v=envelope * bracket, envelope_prefactor=envelope,
                            bracket=bracket)


def visibility(rates: DerivedRates, config: OpticsConfig) -> VisibilityResult:
    """Fringe visibility of the configured setup.

    Examples
    --------
    >>> from .model import EmitterParams, OpticsConfig
    >>> r = derive_rates(EmitterParams(1000.0, 1000.0))
    >>> round(visibility(r, OpticsConfig()).v, 4)
    0.3333
    """
    return visibility_at(rates, config.emission_delay,
                         config.interf1.d_tau, config.interf2.d_tau)


def max_visibility(rates: DerivedRates) -> float:
    """Visibility ceiling T2/(2*T1), reached at d_tau1 = d_tau2 = T."""
    return rates.indistinguishability


def coincidence_probability(rates: DerivedRates, config: OpticsConfig,
                            phase: float) -> CoincidenceResult:
    """Joint detection probability of the post-selected photon pair.

    Parameters
    ----------
    phase : float
        Fringe phase in rad, i.e. the carrier frequency times the
        arm-imbalance difference (or a directly supplied scan phase).
    """
    i1, i2 = config.interf1, config.interf2
    prefactor = 2.0 * config.r_bs * config.t_bs * i1.r * i1.t * i2.r * i2.t
    v = visibility(rates, config).v
    return CoincidenceResult(p12=prefactor * (1.0 + v * math.cos(phase)),
                             prefactor=prefactor, phase=phase)


def jitter_sensitivity(rates: DerivedRates, jitter: float) -> float:
    """First-order fractional visibility loss for emission-delay jitter.

    A slow drift of the emission delay by +-jitter around the balanced point
    reduces the visibility by the factor (1 - gamma_prime * jitter) to first
    order; this returns the relative drop gamma_prime * jitter.  Only valid
    while the product is small.
    """
    if not (isinstance(jitter, (int, float)) and jitter >= 0 and math.isfinite(jitter)):
        raise ParameterError(f"jitter must be a non-negative time in ps, got {jitter!r}")
    return rates.gamma_prime * jitter


def _bisect_to_value(f, lo: float, hi: float, target: float,
                     tol: float = 1e-9, max_iter: int = 200) -> float:
    """Bisection for a monotone f; stops when |f(mid) - target| <= tol.

    Bisection over Newton: the functions solved here are provably monotone
    and smooth, and robustness matters more than iteration count at this
    scale.
    """
    increasing = f(hi) >= f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm - target) <= tol:
            return mid
        if (fm < target) == increasing:
            lo = mid
        else:
            hi = mid
    raise ArithmeticError("bisection did not reach the requested tolerance")


def chsh_threshold_purcell(emitter: EmitterParams,
                           target: float = BELL_THRESHOLD) -> float:
    """Smallest Purcell factor whose maximal visibility reaches the target.

    The maximal visibility gamma_prime/(gamma_prime + 2*gamma) is strictly
    increasing in the Purcell factor, so the threshold is found by bisection
    on F in [1, 1e6] to 1e-9 in visibility.  The emitter's own
    purcell_factor is ignored; only t1_vac and t2_star enter.

    Returns 1.0 when the bare emitter already reaches the target.

    Raises
    ------
    UnreachableTargetError
        If even F = 1e6 stays below the target.
    """
    if not 0.0 < target < 1.0:
        raise ParameterError(f"target must be in (0, 1), got {target!r}")
    lo, hi = 1.0, 1e6

    def vis_of_f(f: float) -> float:
        return derive_rates(EmitterParams(emitter.t1_vac, emitter.t2_star, f,
                                          emitter.carrier)).indistinguishability

    if vis_of_f(lo) >= target:
        return lo
    if vis_of_f(hi) < target:
        raise UnreachableTargetError(
            f"max visibility at purcell_factor={hi:g} is {vis_of_f(hi):.6f}, "
            f"below the target {target:.6f}"
        )
    return _bisect_to_value(vis_of_f, lo, hi, target)


def delay_tolerance_window(rates: DerivedRates, config: OpticsConfig,
                           target: float = BELL_THRESHOLD,
                           wavelength: float = 900.0) -> tuple[float, float]:
    """Half-width of the arm-imbalance window keeping V >= target.

    With interferometer 1 balanced on the emission delay (d_tau1 = T), the
    visibility decays monotonically as d_tau2 moves off T.  Returns the
    largest |d_tau1 - d_tau2| in ps still meeting the target, and the same
    length expressed in optical wavelengths (c * delta / lambda); the window
    is symmetric in the sign of the offset.

    Raises
    ------
    EmptyWindowError
        If even the balanced point misses the target, so no window exists.
    ParameterError
        If d_tau1 is not pinned to the emission delay.
    """
    if not 0.0 < target < 1.0:
        raise ParameterError(f"target must be in (0, 1), got {target!r}")
    if not (isinstance(wavelength, (int, float)) and wavelength > 0
            and math.isfinite(wavelength)):
        raise ParameterError(f"wavelength must be a positive length in nm, got {wavelength!r}")
    t_delay = config.emission_delay
    if abs(config.interf1.d_tau - t_delay) > 1e-9 * max(1.0, t_delay):
        raise ParameterError(
            f"d_tau1 must equal emission_delay for the tolerance window, got "
            f"{config.interf1.d_tau!r} vs {t_delay!r}"
        )
    if max_visibility(rates) <= target:
        raise EmptyWindowError(
            f"max visibility {max_visibility(rates):.6f} is at or below the "
            f"target {target:.6f}; the tolerance window is empty"
        )

    def vis_of_delta(delta: float) -> float:
        return visibility_at(rates, t_delay, t_delay, t_delay - delta).v

    # expand until the target is bracketed; V decays to 0, so this terminates
    hi = 1.0 / rates.gamma_prime
    while vis_of_delta(hi) > target:
        hi *= 2.0
    delta = _bisect_to_value(vis_of_delta, 0.0, hi, target)
    return delta, C_NM_PER_PS * delta / wavelength
