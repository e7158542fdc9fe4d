"""Run configuration: flat key = value files merged with command-line flags.

The file format is deliberately minimal, one ``key = value`` per line with
``#`` comments:

    # canonical quantum dot
    t1_vac_ps = 1000
    t2_star_ps = 300
    purcell_factor = 30

Times are picoseconds; every ``*_ps`` key also accepts a ``*_ns`` twin that
is converted on load.  Unknown keys are rejected so typos cannot silently
fall back to defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import (
    BELL_THRESHOLD,
    CarrierSpec,
    EmitterParams,
    Interferometer,
    OpticsConfig,
)


class ConfigError(Exception):
    """A configuration document or override is malformed."""


_CARRIER_KEYS = ("phase_rad", "wavelength_nm", "omega_rad_per_ps")
_INT_KEYS = ("samples", "seed")

DEFAULTS: dict = {
    "t1_vac_ps": 1000.0,
    "t2_star_ps": 300.0,
    "purcell_factor": 1.0,
    "emission_delay_ps": 12500.0,
    "dtau1_ps": None,  # None: follow emission_delay_ps (balanced analyzers)
    "dtau2_ps": None,
    "tau1_ps": 0.0,
    "tau2_ps": 0.0,
    "r_bs": 0.5,
    "t_bs": 0.5,
    "r1": 0.5,
    "t1": 0.5,
    "r2": 0.5,
    "t2": 0.5,
    "jitter_ps": 0.0,
    "phase_rad": None,  # carrier variants; at most one may be set
    "wavelength_nm": None,
    "omega_rad_per_ps": None,
    "samples": 20000,
    "seed": 42,
    "grid_divisor": 40.0,
    "grid_span_lifetimes": 25.0,
    "target": BELL_THRESHOLD,
}


def _parse_number(key: str, text: str):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"value for {key!r} is not a number: {text!r}") from None
    if key in _INT_KEYS:
        if not (math.isfinite(value) and value == int(value)):
            raise ConfigError(f"{key!r} must be an integer, got {text!r}")
        return int(value)
    return value


def _canonical_key(key: str) -> tuple[str, float]:
    """Resolve a document key to its canonical name and unit scale."""
    if key in DEFAULTS:
        return key, 1.0
    if key.endswith("_ns") and key[:-3] + "_ps" in DEFAULTS:
        return key[:-3] + "_ps", 1000.0
    raise ConfigError(f"unknown configuration key {key!r}")


def parse_config_text(text: str) -> dict:
    """Parse a key = value document into canonical keys; values stay numeric."""
    values: dict = {}
    seen: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key_text, _, value_text = line.partition("=")
        key_text = key_text.strip().lower()
        value_text = value_text.strip()
        if not key_text or not value_text:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, scale = _canonical_key(key_text)
        if key in seen:
            raise ConfigError(
                f"line {lineno}: {key_text!r} repeats key {seen[key]!r}")
        seen[key] = key_text
        value = _parse_number(key_text, value_text)
        values[key] = value * scale if scale != 1.0 else value
    return values


def load_config_file(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text)


@dataclass
class RunConfig:
    """Merged configuration with typed accessors for the physics objects."""

    values: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        merged = dict(DEFAULTS)
        merged.update(self.values)
        self.values = merged

    def override(self, key: str, value) -> None:
        if key not in DEFAULTS:
            raise ConfigError(f"unknown configuration key {key!r}")
        self.values[key] = value

    def _get(self, key: str):
        return self.values[key]

    def carrier(self) -> CarrierSpec:
        given = [k for k in _CARRIER_KEYS if self._get(k) is not None]
        if len(given) > 1:
            raise ConfigError(
                f"at most one of {_CARRIER_KEYS} may be set, got {given}")
        if not given:
            return CarrierSpec(direct_phase=0.0)
        key = given[0]
        if key == "phase_rad":
            return CarrierSpec(direct_phase=float(self._get(key)))
        if key == "wavelength_nm":
            return CarrierSpec(wavelength=float(self._get(key)))
        return CarrierSpec(angular_frequency=float(self._get(key)))

    def emitter(self) -> EmitterParams:
        return EmitterParams(
            t1_vac=float(self._get("t1_vac_ps")),
            t2_star=float(self._get("t2_star_ps")),
            purcell_factor=float(self._get("purcell_factor")),
            carrier=self.carrier(),
        )

    def optics(self) -> OpticsConfig:
        t_delay = float(self._get("emission_delay_ps"))
        d1 = self._get("dtau1_ps")
        d2 = self._get("dtau2_ps")
        return OpticsConfig(
            interf1=Interferometer(
                d_tau=t_delay if d1 is None else float(d1),
                tau=float(self._get("tau1_ps")),
                r=float(self._get("r1")), t=float(self._get("t1"))),
            interf2=Interferometer(
                d_tau=t_delay if d2 is None else float(d2),
                tau=float(self._get("tau2_ps")),
                r=float(self._get("r2")), t=float(self._get("t2"))),
            r_bs=float(self._get("r_bs")),
            t_bs=float(self._get("t_bs")),
            emission_delay=t_delay,
            jitter=float(self._get("jitter_ps")),
        )

    def fringe_phase(self) -> float:
        """Default fringe phase: the carrier evaluated on the configured delays."""
        optics = self.optics()
        return self.emitter().carrier.fringe_phase(
            optics.interf1.d_tau - optics.interf2.d_tau)

    @property
    def samples(self) -> int:
        n = self._get("samples")
        if not (isinstance(n, int) and n >= 2):
            raise ConfigError(f"samples must be an integer >= 2, got {n!r}")
        return n

    @property
    def seed(self) -> int:
        s = self._get("seed")
        if not (isinstance(s, int) and 0 <= s < 2 ** 64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {s!r}")
        return s

    @property
    def target(self) -> float:
        t = float(self._get("target"))
        if not 0.0 < t < 1.0:
            raise ConfigError(f"target must be in (0, 1), got {t!r}")
        return t

    @property
    def grid_divisor(self) -> float:
        return float(self._get("grid_divisor"))

    @property
    def grid_span_lifetimes(self) -> float:
        return float(self._get("grid_span_lifetimes"))

    @property
    def wavelength_nm(self):
        w = self._get("wavelength_nm")
        return None if w is None else float(w)
