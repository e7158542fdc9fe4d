"""Emitter parameters and the rate algebra for sequential-photon interference.

Two time constants fix the first-order coherence of a two-level emitter
subject to pure dephasing: the radiative lifetime T1 and the pure-dephasing
time T2*.  A cavity shortens only the radiative channel (Purcell enhancement),
so the decay rate is gamma_prime = purcell_factor / t1_vac while the dephasing
rate gamma = 1 / t2_star stays fixed.  The coherence time follows
1/T2 = 1/T2* + 1/(2*T1), and the ratio T2/(2*T1) bounds every interference
visibility computed downstream.

All quantities are picoseconds or 1/ps.  All types are immutable values and
all functions are pure, so they are safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# speed of light, used to convert arm-length tolerances to optical wavelengths
C_NM_PER_PS = 299792.458
C_MM_PER_PS = C_NM_PER_PS * 1e-6

BELL_THRESHOLD = 1.0 / math.sqrt(2.0)


class ParameterError(ValueError):
    """A physical parameter is outside its allowed range; message names the field."""


def _require(cond: bool, name: str, value, rule: str) -> None:
    if not cond:
        raise ParameterError(f"{name} must be {rule}, got {value!r}")


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class CarrierSpec:
    """Optical carrier of the emitted photons, in one of three equivalent forms.

    Exactly one field must be set:

    angular_frequency : rad/ps, the carrier frequency itself
    wavelength : nm, converted internally via omega = 2*pi*c/lambda
    direct_phase : rad, the fringe phase accumulated over the arm-imbalance
        difference, supplied directly

    The carrier sits near 1e3 rad/ps, so specifying the fringe phase through
    delays would demand sub-femtosecond delay resolution.  ``direct_phase``
    decouples the fast fringe from the slow visibility envelope; it is the
    default route for phase scans.
    """

    angular_frequency: float | None = None
    wavelength: float | None = None
    direct_phase: float | None = None

    def __post_init__(self) -> None:
        given = [
            name
            for name, val in (
                ("angular_frequency", self.angular_frequency),
                ("wavelength", self.wavelength),
                ("direct_phase", self.direct_phase),
            )
            if val is not None
        ]
        if len(given) != 1:
            raise ParameterError(
                "CarrierSpec needs exactly one of angular_frequency, wavelength, "
                f"direct_phase, got {given or 'none'}"
            )
        if self.angular_frequency is not None:
            _require(_finite(self.angular_frequency) and self.angular_frequency > 0,
                     "angular_frequency", self.angular_frequency, "a positive rate in rad/ps")
        if self.wavelength is not None:
            _require(_finite(self.wavelength) and self.wavelength > 0,
                     "wavelength", self.wavelength, "a positive length in nm")
        if self.direct_phase is not None:
            _require(_finite(self.direct_phase), "direct_phase", self.direct_phase,
                     "a finite angle in rad")

    def fringe_phase(self, delay_difference: float) -> float:
        """Phase of the coincidence fringe for an arm-imbalance difference in ps.

        For ``direct_phase`` the stored value is returned unchanged; otherwise
        the phase is omega * delay_difference with omega from the frequency or
        wavelength variant.
        """
        if self.direct_phase is not None:
            return self.direct_phase
        if self.angular_frequency is not None:
            return self.angular_frequency * delay_difference
        return (2.0 * math.pi * C_NM_PER_PS / self.wavelength) * delay_difference


@dataclass(frozen=True)
class EmitterParams:
    """Two-level emitter with pure dephasing and optional Purcell enhancement.

    t1_vac : radiative lifetime in ps with no emission enhancement
    t2_star : pure dephasing time in ps; ``math.inf`` means no dephasing
    purcell_factor : emission-rate enhancement, >= 1 (1 means no cavity)
    carrier : how the optical carrier sets the fringe phase
    """

    t1_vac: float
    t2_star: float
    purcell_factor: float = 1.0
    carrier: CarrierSpec = field(default=CarrierSpec(direct_phase=0.0))

    def __post_init__(self) -> None:
        _require(_finite(self.t1_vac) and self.t1_vac > 0,
                 "t1_vac", self.t1_vac, "a positive time in ps")
        ok_t2 = isinstance(self.t2_star, (int, float)) and self.t2_star > 0 \
            and not math.isnan(self.t2_star)
        _require(ok_t2, "t2_star", self.t2_star, "a positive time in ps (inf allowed)")
        _require(_finite(self.purcell_factor) and self.purcell_factor >= 1.0,
                 "purcell_factor", self.purcell_factor, ">= 1 (inhibition not modeled)")


@dataclass(frozen=True)
class DerivedRates:
    """Rates and times derived from EmitterParams; the input to every formula.

    gamma_prime : decay rate in 1/ps, Purcell-scaled
    gamma : pure dephasing rate in 1/ps
    t1 : lifetime 1/gamma_prime in ps
    t2 : coherence time in ps, 1/t2 = gamma + gamma_prime/2
    indistinguishability : t2/(2*t1), the ceiling of every visibility
    """

    gamma_prime: float
    gamma: float
    t1: float
    t2: float
    indistinguishability: float


def derive_rates(emitter: EmitterParams) -> DerivedRates:
    """Rate algebra: lifetimes and dephasing to coherence and its visibility bound.

    The cavity enhances only the radiative channel, so
    gamma_prime = purcell_factor / t1_vac and gamma = 1 / t2_star is untouched.

    Parameters
    ----------
    emitter : EmitterParams

    Returns
    -------
    DerivedRates

    Examples
    --------
    >>> r = derive_rates(EmitterParams(t1_vac=1000.0, t2_star=300.0))
    >>> round(r.t2, 2), round(r.indistinguishability, 4)
    (260.87, 0.1304)
    >>> derive_rates(EmitterParams(1000.0, math.inf)).indistinguishability
    1.0
    """
    gamma_prime = emitter.purcell_factor / emitter.t1_vac
    gamma = 1.0 / emitter.t2_star  # 0 when t2_star is inf
    t2 = 1.0 / (gamma + gamma_prime / 2.0)
    return DerivedRates(
        gamma_prime=gamma_prime,
        gamma=gamma,
        t1=1.0 / gamma_prime,
        t2=t2,
        indistinguishability=t2 * gamma_prime / 2.0,
    )


@dataclass(frozen=True)
class Interferometer:
    """Unbalanced two-arm analyzer: short-arm delay tau, imbalance d_tau.

    r and t are intensity reflection/transmission coefficients; r + t < 1
    models loss (flagged by validate_config, not rejected).
    """

    d_tau: float
    tau: float = 0.0
    r: float = 0.5
    t: float = 0.5

    def __post_init__(self) -> None:
        _require(_finite(self.d_tau) and self.d_tau >= 0, "d_tau", self.d_tau,
                 "a non-negative time in ps")
        _require(_finite(self.tau) and self.tau >= 0, "tau", self.tau,
                 "a non-negative time in ps")
        for name, val in (("r", self.r), ("t", self.t)):
            _require(_finite(val) and 0.0 <= val <= 1.0, name, val,
                     "an intensity coefficient in [0, 1]")
        _require(self.r + self.t <= 1.0 + 1e-12, "r + t", self.r + self.t,
                 "<= 1 (passive splitter)")


@dataclass(frozen=True)
class OpticsConfig:
    """Beamsplitter plus the two analyzers and the emission timing.

    emission_delay : separation T between the two photons in ps
    jitter : half-amplitude of slow emission-delay drift in ps
    """

    interf1: Interferometer = field(default=Interferometer(d_tau=12500.0))
    interf2: Interferometer = field(default=Interferometer(d_tau=12500.0))
    r_bs: float = 0.5
    t_bs: float = 0.5
    emission_delay: float = 12500.0
    jitter: float = 0.0

    def __post_init__(self) -> None:
        for name, val in (("r_bs", self.r_bs), ("t_bs", self.t_bs)):
            _require(_finite(val) and 0.0 <= val <= 1.0, name, val,
                     "an intensity coefficient in [0, 1]")
        _require(self.r_bs + self.t_bs <= 1.0 + 1e-12, "r_bs + t_bs",
                 self.r_bs + self.t_bs, "<= 1 (passive splitter)")
        _require(_finite(self.emission_delay) and self.emission_delay > 0,
                 "emission_delay", self.emission_delay, "a positive time in ps")
        _require(_finite(self.jitter) and self.jitter >= 0, "jitter", self.jitter,
                 "a non-negative time in ps")


def validate_config(config: OpticsConfig, rates: DerivedRates) -> list[str]:
    """Soft checks on an optics configuration; returns warnings, never raises.

    Flags three situations that leave the math valid but the model or the
    signal degraded:

    * emission_delay below 5 lifetimes (sequential-emission picture breaks),
    * lossy splitters (r + t < 1),
    * an arm imbalance more than 10 lifetimes away from the emission delay
      (the wavepackets no longer overlap and coincidences vanish).
    """
    warnings: list[str] = []
    if config.emission_delay < 5.0 * rates.t1:
        warnings.append(
            f"emission_delay {config.emission_delay:g} ps is below 5 lifetimes "
            f"({5.0 * rates.t1:g} ps); photons overlap at the source and the "
            "sequential-emission model degrades"
        )
    splitters = [("beamsplitter", config.r_bs, config.t_bs),
                 ("interferometer 1", config.interf1.r, config.interf1.t),
                 ("interferometer 2", config.interf2.r, config.interf2.t)]
    for name, r, t in splitters:
        if r + t < 1.0 - 1e-12:
            warnings.append(f"{name} is lossy: r + t = {r + t:g} < 1")
    for name, interf in (("interf1", config.interf1), ("interf2", config.interf2)):
        gap = abs(interf.d_tau - config.emission_delay)
        if gap > 10.0 * rates.t1:
            warnings.append(
                f"{name}.d_tau is {gap:g} ps away from emission_delay, beyond "
                f"10 lifetimes ({10.0 * rates.t1:g} ps); coincidence paths "
                "barely overlap"
            )
    return warnings
