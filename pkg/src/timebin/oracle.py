"""Independent numerical checks of the closed-form coincidence fringes.

Two routes verify the analytic module without sharing any algebra with it:

* ``mc_coincidence`` samples the dephasing phase as a Wiener process (one
  independent trajectory per photon), builds the two post-selected detection
  amplitudes, and integrates the squared joint amplitude over both detection
  times.  Averaging over trajectories must reproduce the closed-form p12.
* ``quadrature_coincidence`` integrates the phase-averaged correlator
  integrand directly (the average over trajectories is done analytically,
  leaving exp(-gamma*|dt|) factors) on a deterministic 2-D grid.

Both integrate with the trapezoid rule at the grid's step, but each additive
term is integrated on an axis starting exactly at that term's wavepacket
onset.  A trapezoid panel straddling the exponential turn-on would degrade
the rule to first order in the step; aligning the axes keeps the error at
the usual second order.

Randomness is counter-based (Philox): sample j draws only from streams keyed
by (seed, 2j) and (seed, 2j+1), so every sample's trajectories are
independent of batching and execution order, and repeated runs with the same
seed are bit-for-bit reproducible.  (Regrouping batches can still move the
final few bits through shape-dependent BLAS kernel selection.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import coincidence_probability
from .model import DerivedRates, OpticsConfig, ParameterError

_BATCH = 256


class GridTooCoarseError(ValueError):
    """The integration grid violates a resolution or coverage requirement."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform detection-time grid on [t_min, t_max] with n_points nodes."""

    t_min: float
    t_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n_points, int) and self.n_points >= 2):
            raise ParameterError(f"n_points must be an int >= 2, got {self.n_points!r}")
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)
                and self.t_max > self.t_min):
            raise ParameterError(
                f"need finite t_max > t_min, got [{self.t_min!r}, {self.t_max!r}]")

    @property
    def step(self) -> float:
        return (self.t_max - self.t_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_points)


def default_grid(rates: DerivedRates, config: OpticsConfig,
                 divisor: float = 40.0, span_lifetimes: float = 25.0) -> TimeGrid:
    """Grid resolving both decay and dephasing and covering all wavepackets.

    Step is min(T1, T2*)/divisor; the grid runs from 0 to span_lifetimes
    lifetimes past the last wavepacket onset, so the truncated exponential
    tail is below e^-25 at the defaults.
    """
    t1 = rates.t1
    scale = t1 if rates.gamma == 0.0 else min(t1, 1.0 / rates.gamma)
    step = scale / divisor
    t_max = max(config.emission_delay, config.interf1.d_tau,
                config.interf2.d_tau) + span_lifetimes * t1
    n_points = int(math.ceil(t_max / step)) + 1
    return TimeGrid(0.0, t_max, n_points)


def check_grid(grid: TimeGrid, rates: DerivedRates, config: OpticsConfig) -> None:
    """Raise GridTooCoarseError unless the grid resolves and covers the problem.

    Requirements: step at most min(T1, T2*)/20, t_min at or below the first
    emission, and t_max at least 20 lifetimes past the last wavepacket onset.
    """
    scale = rates.t1 if rates.gamma == 0.0 else min(rates.t1, 1.0 / rates.gamma)
    limit = scale / 20.0
    if grid.step > limit * (1.0 + 1e-9):
        raise GridTooCoarseError(
            f"grid step {grid.step:g} ps exceeds min(T1, T2*)/20 = {limit:g} ps")
    if grid.t_min > 0.0:
        raise GridTooCoarseError(
            f"grid starts at {grid.t_min:g} ps, after the first emission at 0")
    last_onset = max(config.emission_delay, config.interf1.d_tau,
                     config.interf2.d_tau)
    needed = last_onset + 20.0 * rates.t1
    if grid.t_max < needed:
        raise GridTooCoarseError(
            f"grid ends at {grid.t_max:g} ps, before the last wavepacket has "
            f"decayed (need >= {needed:g} ps)")


@dataclass(frozen=True)
class PhaseTrajectory:
    """One realization of the dephasing phase on a grid; phi[0] = 0."""

    grid: TimeGrid
    phi: np.ndarray
    seed: int


@dataclass(frozen=True)
class OracleReport:
    """Monte Carlo estimate against a closed form.

    z_score is (estimate - closed_form)/std_error; when std_error is zero it
    is 0 for exact agreement and signed infinity otherwise.
    """

    estimate: float
    std_error: float
    closed_form: float
    z_score: float
    n_samples: int


def _check_u64(name: str, value) -> int:
    if not (isinstance(value, (int, np.integer)) and 0 <= int(value) < 2 ** 64):
        raise ParameterError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
    return int(value)


def _stream(seed: int, stream: int) -> np.random.Generator:
    # counter-based: every (seed, stream) pair is an independent, jumpable
    # random stream regardless of how many draws other streams made
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _z_score(estimate: float, std_error: float, closed_form: float) -> float:
    if std_error > 0.0:
        return (estimate - closed_form) / std_error
    if estimate == closed_form:
        return 0.0
    return math.copysign(math.inf, estimate - closed_form)


def _report(samples: np.ndarray, closed_form: float) -> OracleReport:
    n = samples.size
    estimate = float(np.mean(samples))
    std_error = float(np.std(samples, ddof=1) / math.sqrt(n))
    return OracleReport(estimate=estimate, std_error=std_error,
                        closed_form=closed_form,
                        z_score=_z_score(estimate, std_error, closed_form),
                        n_samples=n)


def sample_phase_trajectory(gamma: float, grid: TimeGrid, seed: int,
                            stream: int = 0) -> PhaseTrajectory:
    """Wiener phase path: independent Gaussian increments, variance 2*gamma*step.

    That increment variance makes exp(i(phi(t) - phi(t'))) average to
    exp(-gamma*|t - t'|), the dephasing correlator all closed forms rest on.
    The path starts at phi = 0 at the first grid point and is fully
    determined by (gamma, grid, seed, stream).
    """
    if not (isinstance(gamma, (int, float)) and gamma >= 0 and math.isfinite(gamma)):
        raise ParameterError(f"gamma must be a non-negative rate in 1/ps, got {gamma!r}")
    seed = _check_u64("seed", seed)
    stream = _check_u64("stream", stream)
    z = _stream(seed, stream).standard_normal(grid.n_points - 1)
    phi = np.empty(grid.n_points)
    phi[0] = 0.0
    np.cumsum(z * math.sqrt(2.0 * gamma * grid.step), out=phi[1:])
    return PhaseTrajectory(grid=grid, phi=phi, seed=seed)


def correlator_check(gamma: float, lags, n_samples: int, seed: int) -> list[OracleReport]:
    """Sampled dephasing correlator versus exp(-gamma*lag), one report per lag.

    Estimates Re<exp(i(phi(lag) - phi(0)))> over n_samples independent
    trajectories.  Lags are snapped to the internal grid and the closed form
    is evaluated at the snapped lag, so the comparison is exact at lag 0
    (estimate 1, std_error 0).
    """
    if not (isinstance(n_samples, (int, np.integer)) and n_samples >= 1000):
        raise ParameterError(f"n_samples must be >= 1000, got {n_samples!r}")
    if not (isinstance(gamma, (int, float)) and gamma >= 0 and math.isfinite(gamma)):
        raise ParameterError(f"gamma must be a non-negative rate in 1/ps, got {gamma!r}")
    seed = _check_u64("seed", seed)
    lags = [float(l) for l in lags]
    if not lags or any(l < 0 or not math.isfinite(l) for l in lags):
        raise ParameterError(f"lags must be non-negative finite times in ps, got {lags!r}")
    max_lag = max(lags)
    step_target = (1.0 / gamma) / 40.0 if gamma > 0 else max(max_lag, 1.0) / 100.0
    t_max = max(max_lag, step_target)
    grid = TimeGrid(0.0, t_max, int(math.ceil(t_max / step_target)) + 1)
    idx = np.array([round(l / grid.step) for l in lags], dtype=int)
    realized = idx * grid.step

    cos_vals = np.empty((int(n_samples), len(lags)))
    for j in range(int(n_samples)):
        traj = sample_phase_trajectory(gamma, grid, seed, stream=j)
        cos_vals[j] = np.cos(traj.phi[idx])
    return [_report(cos_vals[:, k], math.exp(-gamma * realized[k]))
            for k in range(len(lags))]


def default_correlator_lags(gamma: float) -> list[float]:
    """Lag ladder 0 to 3 dephasing times, where the correlator is resolvable."""
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive to scale lags, got {gamma!r}")
    return [m / gamma for m in (0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0)]


def fitted_decay_rate(lags, estimates, std_errors=None) -> float:
    """Decay rate from a log-linear fit of correlator estimates over lags.

    Weighted least squares on ln(estimate); points with non-positive
    estimates, or with zero standard error (exact points carry no noise
    scale), are excluded.  Returns the fitted rate in 1/ps.
    """
    lags = np.asarray(lags, dtype=float)
    est = np.asarray(estimates, dtype=float)
    if std_errors is None:
        se = np.ones_like(est)
    else:
        se = np.asarray(std_errors, dtype=float)
    keep = (est > 0) & (se > 0)
    if np.count_nonzero(keep) < 2:
        raise ParameterError("need at least two usable (positive, noisy) points to fit")
    # sigma of ln(est) is se/est; polyfit weights multiply residuals
    slope = np.polyfit(lags[keep], np.log(est[keep]), 1, w=est[keep] / se[keep])[0]
    return float(-slope)


# ---------------------------------------------------------------------------
# coincidence oracles

def _trap_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = 0.5 * h
    w[-1] = 0.5 * h
    return w


def _axis_len(t_max: float, onset: float, h: float) -> int:
    return int(math.floor((t_max - onset) / h + 1e-9)) + 1


def _decay_integral(gp: float, h: float, n: int) -> float:
    x = np.arange(n) * h
    return float(_trap_weights(n, h) @ (gp * np.exp(-gp * x)))


@dataclass(frozen=True)
class _Geometry:
    """Axis layout shared by both oracles; see the module docstring.

    The interference term integrates over detection times u1 >= o1 and
    u2 >= o2 with o_i the later of the two wavepacket onsets on that
    detector; (a1, b1) and (a2, b2) are the wavepacket ages at those starts.
    """

    h: float
    pref: float
    n_dtau1: int
    n_dtau2: int
    n_delay: int
    n1: int
    n2: int
    a1: float
    b1: float
    a2: float
    b2: float


def _geometry(config: OpticsConfig, grid: TimeGrid) -> _Geometry:
    h = grid.step
    d1, d2, t_delay = config.interf1.d_tau, config.interf2.d_tau, config.emission_delay
    o1, o2 = max(d1, t_delay), max(d2, t_delay)
    i1, i2 = config.interf1, config.interf2
    return _Geometry(
        h=h,
        pref=config.r_bs * config.t_bs * i1.r * i1.t * i2.r * i2.t,
        n_dtau1=_axis_len(grid.t_max, d1, h),
        n_dtau2=_axis_len(grid.t_max, d2, h),
        n_delay=_axis_len(grid.t_max, t_delay, h),
        n1=_axis_len(grid.t_max, o1, h),
        n2=_axis_len(grid.t_max, o2, h),
        a1=o1 - d1, b1=o1 - t_delay,
        a2=o2 - d2, b2=o2 - t_delay,
    )


def quadrature_coincidence(rates: DerivedRates, config: OpticsConfig,
                           phase: float, grid: TimeGrid) -> float:
    """Coincidence probability by deterministic 2-D trapezoid quadrature.

    The trajectory average of the squared two-path amplitude leaves two
    direct terms (products of single-photon densities) and an interference
    term carrying exp(-gamma*|..|) dephasing factors and the fringe phase;
    all three are integrated over both detection times.  Converges to the
    closed-form p12 as the grid is refined.
    """
    check_grid(grid, rates, config)
    geo = _geometry(config, grid)
    gp, g, h = rates.gamma_prime, rates.gamma, geo.h

    direct = (_decay_integral(gp, h, geo.n_dtau1) * _decay_integral(gp, h, geo.n_delay)
              + _decay_integral(gp, h, geo.n_dtau2) * _decay_integral(gp, h, geo.n_delay))

    # interference kernel over wavepacket ages x, y measured from the axis
    # starts; the four age offsets collapse to two differences
    dab = geo.a1 - geo.a2
    dcd = geo.b2 - geo.b1
    x = np.arange(geo.n1) * h
    y = np.arange(geo.n2) * h
    fx = _trap_weights(geo.n1, h) * np.exp(-gp * x)
    fy = _trap_weights(geo.n2, h) * np.exp(-gp * y)
    total = 0.0
    block = max(1, int(4e6) // geo.n2)
    for i0 in range(0, geo.n1, block):
        xs = x[i0:i0 + block, None]
        kernel = np.exp(-g * (np.abs(xs - y[None, :] + dab)
                              + np.abs(y[None, :] - xs + dcd)))
        total += float(fx[i0:i0 + block] @ kernel @ fy)
    s1 = geo.a1 + geo.b1
    s2 = geo.a2 + geo.b2
    interference = 2.0 * math.cos(phase) * gp * gp \
        * math.exp(-0.5 * gp * (s1 + s2)) * total

    return geo.pref * (direct + interference)


def mc_coincidence(rates: DerivedRates, config: OpticsConfig, phase: float,
                   grid: TimeGrid, n_samples: int, seed: int) -> OracleReport:
    """Coincidence probability by Monte Carlo over dephasing trajectories.

    Each sample draws one phase trajectory per photon (independent streams
    2j and 2j+1 of the counter-based generator), forms the two post-selected
    joint detection amplitudes, and integrates the squared sum over both
    detection times.  The direct terms carry no phase and reduce to
    deterministic single-axis integrals; only the interference term is
    stochastic.  The per-sample values are averaged and compared to the
    closed-form p12.
    """
    check_grid(grid, rates, config)
    if not (isinstance(n_samples, (int, np.integer)) and n_samples >= 2):
        raise ParameterError(f"n_samples must be an int >= 2, got {n_samples!r}")
    n_samples = int(n_samples)
    seed = _check_u64("seed", seed)
    geo = _geometry(config, grid)
    gp, g, h = rates.gamma_prime, rates.gamma, geo.h

    direct = (_decay_integral(gp, h, geo.n_dtau1) * _decay_integral(gp, h, geo.n_delay)
              + _decay_integral(gp, h, geo.n_dtau2) * _decay_integral(gp, h, geo.n_delay))

    # wavepacket ages sampled on the u1 axis (length n1) and u2 axis (n2):
    # photon 1 (emitted first, long-arm route) and photon 2 (short-arm route)
    ages_1 = [geo.a1 + np.arange(geo.n1) * h, geo.a2 + np.arange(geo.n2) * h]
    ages_2 = [geo.b1 + np.arange(geo.n1) * h, geo.b2 + np.arange(geo.n2) * h]

    def union(parts):
        pts, inverse = np.unique(np.concatenate(parts), return_inverse=True)
        split = np.split(inverse, [len(parts[0])])
        sig = np.sqrt(2.0 * g * np.diff(pts, prepend=0.0))
        return pts.size, sig, split[0], split[1]

    len1, sig1, i1u, i1v = union(ages_1)
    len2, sig2, i2u, i2v = union(ages_2)

    # deterministic magnitude of each integrand node, weights included
    cu = _trap_weights(geo.n1, h) * gp * np.exp(-0.5 * gp * (ages_1[0] + ages_2[0]))
    cv = _trap_weights(geo.n2, h) * gp * np.exp(-0.5 * gp * (ages_1[1] + ages_2[1]))
    carrier = complex(math.cos(phase), -math.sin(phase))

    cross = np.empty(n_samples)
    for start in range(0, n_samples, _BATCH):
        stop = min(start + _BATCH, n_samples)
        rows = stop - start
        z1 = np.empty((rows, len1))
        z2 = np.empty((rows, len2))
        for i in range(rows):
            z1[i] = _stream(seed, 2 * (start + i)).standard_normal(len1)
            z2[i] = _stream(seed, 2 * (start + i) + 1).standard_normal(len2)
        phi1 = np.cumsum(z1 * sig1, axis=1)
        phi2 = np.cumsum(z2 * sig2, axis=1)
        f = np.exp(1j * (phi1[:, i1u] - phi2[:, i2u])) @ cu
        gsum = np.exp(-1j * (phi1[:, i1v] - phi2[:, i2v])) @ cv
        cross[start:stop] = 2.0 * np.real(carrier * f * gsum)

    per_sample = geo.pref * (direct + cross)
    closed = coincidence_probability(rates, config, phase).p12
    return _report(per_sample, closed)


def extract_visibility_from_fringe(p_at_phase) -> float:
    """Visibility from the fringe extrema: (p(0) - p(pi)) / (p(0) + p(pi)).

    Parameters
    ----------
    p_at_phase : mapping of phase [rad] to coincidence probability; must
        contain phases 0 and pi (matched within 1e-9).

    Raises
    ------
    ZeroDivisionError
        When both extrema vanish and the visibility is undefined.
    """
    p_zero = p_pi = None
    for ph, p in p_at_phase.items():
        if abs(ph) <= 1e-9:
            p_zero = p
        elif abs(ph - math.pi) <= 1e-9:
            p_pi = p
    if p_zero is None or p_pi is None:
        raise ParameterError("p_at_phase must contain phases 0 and pi")
    denominator = p_zero + p_pi
    if denominator == 0.0:
        raise ZeroDivisionError("both fringe extrema vanish; visibility undefined")
    return (p_zero - p_pi) / denominator
