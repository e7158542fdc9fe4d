"""Visibility sweeps as ordered record streams, ready for CSV output.

Four sweep kinds map the interference landscape:

* ``purcell``: maximal visibility versus Purcell factor (log-spaced axis),
  with the Bell-test threshold as a constant column.
* ``delay``: visibility versus the arm-imbalance difference d_tau1 - d_tau2,
  with interferometer 1 balanced on the emission delay.
* ``map2d``: visibility over the (T - d_tau1, T - d_tau2) plane, row-major.
* ``jitter``: first-order visibility under emission-delay jitter.

Every record is a fresh closed-form evaluation at literally reconstructible
axis values (min + k*(max - min)/(n - 1), applied in log10 space for the
purcell axis), so any row can be re-derived from the header metadata alone.
This module emits data only; figure rendering lives in ``plotting``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ._version import __version__
from .analytic import jitter_sensitivity, max_visibility, visibility_at
from .model import (
    BELL_THRESHOLD,
    EmitterParams,
    OpticsConfig,
    ParameterError,
    derive_rates,
)

KINDS = ("purcell", "delay", "map2d", "jitter")


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and over which range.

    axis / axis2 : (min, max, n_steps) tuples; axis2 only for map2d and
        defaults to axis.  The purcell axis is interpreted log-spaced.
    threshold_line : constant emitted alongside purcell/delay records for
        direct comparison against the Bell-test visibility.
    """

    kind: str
    emitter: EmitterParams
    optics: OpticsConfig
    axis: tuple[float, float, int]
    axis2: tuple[float, float, int] | None = None
    threshold_line: float = BELL_THRESHOLD

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"kind must be one of {KINDS}, got {self.kind!r}")
        for name, rng in (("axis", self.axis), ("axis2", self.axis2)):
            if rng is None:
                continue
            lo, hi, n = rng
            if not (isinstance(n, int) and n >= 2):
                raise ParameterError(f"{name} n_steps must be an int >= 2, got {n!r}")
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ParameterError(f"{name} range must satisfy min < max, got {rng!r}")


@dataclass(frozen=True)
class SweepResult:
    """Ordered records plus enough metadata to reproduce every one of them."""

    columns: tuple[str, ...]
    records: list[tuple[float, ...]]
    metadata: dict


def _axis_values(rng: tuple[float, float, int], log: bool = False) -> list[float]:
    lo, hi, n = rng
    if log:
        if lo <= 0:
            raise ParameterError(f"log axis needs min > 0, got {lo!r}")
        llo, lhi = math.log10(lo), math.log10(hi)
        return [10.0 ** (llo + k * (lhi - llo) / (n - 1)) for k in range(n)]
    return [lo + k * (hi - lo) / (n - 1) for k in range(n)]


def _metadata(spec: SweepSpec, **extra) -> dict:
    e, o = spec.emitter, spec.optics
    md = {
        "tool_version": __version__,
        "kind": spec.kind,
        "t1_vac_ps": e.t1_vac,
        "t2_star_ps": e.t2_star,
        "purcell_factor": e.purcell_factor,
        "emission_delay_ps": o.emission_delay,
        "dtau1_ps": o.interf1.d_tau,
        "dtau2_ps": o.interf2.d_tau,
        "r_bs": o.r_bs,
        "t_bs": o.t_bs,
        "r1": o.interf1.r,
        "t1": o.interf1.t,
        "r2": o.interf2.r,
        "t2": o.interf2.t,
        "jitter_ps": o.jitter,
        "threshold": spec.threshold_line,
        "axis_min": spec.axis[0],
        "axis_max": spec.axis[1],
        "axis_steps": spec.axis[2],
    }
    md.update(extra)
    return md


def _expect(spec: SweepSpec, kind: str) -> None:
    if spec.kind != kind:
        raise ParameterError(f"spec.kind is {spec.kind!r}, expected {kind!r}")


def sweep_purcell(spec: SweepSpec) -> SweepResult:
    """Maximal visibility versus Purcell factor, log-spaced, balanced delays.

    The swept variable replaces the emitter's own purcell_factor; each record
    is (purcell_factor, visibility, threshold).
    """
    _expect(spec, "purcell")
    records = []
    for f in _axis_values(spec.axis, log=True):
        rates = derive_rates(replace(spec.emitter, purcell_factor=f))
        records.append((f, max_visibility(rates), spec.threshold_line))
    return SweepResult(
        columns=("purcell_factor", "visibility", "threshold"),
        records=records,
        metadata=_metadata(spec, axis_scale="log10"),
    )


def sweep_delay(spec: SweepSpec) -> SweepResult:
    """Visibility versus delta = d_tau1 - d_tau2 with d_tau1 pinned to T.

    Records are (delta_ps, visibility, threshold); both signs of delta are
    swept (the curve is symmetric only because d_tau1 = T).
    """
    _expect(spec, "delay")
    rates = derive_rates(spec.emitter)
    t_delay = spec.optics.emission_delay
    records = []
    for delta in _axis_values(spec.axis):
        d_tau2 = t_delay - delta
        if d_tau2 < 0:
            raise ParameterError(
                f"delay axis reaches d_tau2 = {d_tau2:g} ps < 0 (delta {delta:g} "
                f"exceeds emission_delay {t_delay:g})")
        v = visibility_at(rates, t_delay, t_delay, d_tau2).v
        records.append((delta, v, spec.threshold_line))
    return SweepResult(
        columns=("delta_ps", "visibility", "threshold"),
        records=records,
        metadata=_metadata(spec, axis_scale="linear"),
    )


def sweep_map2d(spec: SweepSpec) -> SweepResult:
    """Visibility over the (T - d_tau1, T - d_tau2) plane.

    Row-major: the first axis varies slowest.  Records are
    (t_minus_dtau1_ps, t_minus_dtau2_ps, visibility).
    """
    _expect(spec, "map2d")
    rates = derive_rates(spec.emitter)
    t_delay = spec.optics.emission_delay
    axis2 = spec.axis2 if spec.axis2 is not None else spec.axis
    xs = _axis_values(spec.axis)
    ys = _axis_values(axis2)
    records = []
    for x in xs:
        d_tau1 = t_delay - x
        if d_tau1 < 0:
            raise ParameterError(f"map axis reaches d_tau1 = {d_tau1:g} ps < 0")
        for y in ys:
            d_tau2 = t_delay - y
            if d_tau2 < 0:
                raise ParameterError(f"map axis reaches d_tau2 = {d_tau2:g} ps < 0")
            v = visibility_at(rates, t_delay, d_tau1, d_tau2).v
            records.append((x, y, v))
    return SweepResult(
        columns=("t_minus_dtau1_ps", "t_minus_dtau2_ps", "visibility"),
        records=records,
        metadata=_metadata(spec, axis_scale="linear",
                           axis2_min=axis2[0], axis2_max=axis2[1],
                           axis2_steps=axis2[2]),
    )


def sweep_jitter(spec: SweepSpec) -> SweepResult:
    """First-order visibility under emission-delay jitter, balanced delays.

    Records are (jitter_ps, visibility) with
    visibility = max_visibility * (1 - gamma_prime * jitter); the linear
    model is only meaningful while the drop stays small.
    """
    _expect(spec, "jitter")
    if spec.axis[0] < 0:
        raise ParameterError(f"jitter axis must start at >= 0, got {spec.axis[0]!r}")
    rates = derive_rates(spec.emitter)
    v0 = max_visibility(rates)
    records = []
    for jit in _axis_values(spec.axis):
        records.append((jit, v0 * (1.0 - jitter_sensitivity(rates, jit))))
    return SweepResult(
        columns=("jitter_ps", "visibility"),
        records=records,
        metadata=_metadata(spec, axis_scale="linear"),
    )


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Dispatch a SweepSpec to its sweep function."""
    return {
        "purcell": sweep_purcell,
        "delay": sweep_delay,
        "map2d": sweep_map2d,
        "jitter": sweep_jitter,
    }[spec.kind](spec)
