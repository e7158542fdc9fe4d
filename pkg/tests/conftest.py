"""Shared fixtures for the timebin test suite."""

import pytest

import timebin as tb


def make_rates(t1_vac=1000.0, t2_star=300.0, purcell=1.0):
    return tb.derive_rates(tb.EmitterParams(
        t1_vac=t1_vac, t2_star=t2_star, purcell_factor=purcell))


def balanced_optics(delay=12500.0, **kwargs):
    """Both analyzers matched to the emission delay."""
    return tb.OpticsConfig(
        interf1=tb.Interferometer(d_tau=delay),
        interf2=tb.Interferometer(d_tau=delay),
        emission_delay=delay,
        **kwargs,
    )


def offset_optics(delay, d_tau1, d_tau2, **kwargs):
    return tb.OpticsConfig(
        interf1=tb.Interferometer(d_tau=d_tau1),
        interf2=tb.Interferometer(d_tau=d_tau2),
        emission_delay=delay,
        **kwargs,
    )


@pytest.fixture
def rates_default():
    """Bare emitter: 1 ns radiative lifetime, 300 ps pure dephasing."""
    return make_rates()


@pytest.fixture
def rates_enhanced():
    """Same emitter with a thirtyfold emission-rate enhancement."""
    return make_rates(purcell=30.0)


@pytest.fixture
def optics_default():
    return tb.OpticsConfig()
