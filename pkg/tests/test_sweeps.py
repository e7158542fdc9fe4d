"""Parameter sweeps: axis generation, record layout, and curve shapes."""

import math

import pytest

import timebin as tb
from conftest import balanced_optics, make_rates

EMITTER = tb.EmitterParams(t1_vac=1000.0, t2_star=300.0, purcell_factor=1.0)


def spec(kind, axis, optics=None, **kwargs):
    return tb.SweepSpec(kind=kind, emitter=EMITTER,
                        optics=optics or balanced_optics(),
                        axis=axis, **kwargs)


class TestSweepSpec:
    def test_unknown_kind_rejected(self):
        with pytest.raises(tb.ParameterError, match="kind"):
            spec("wavelength", (1.0, 2.0, 10))

    def test_degenerate_axis_rejected(self):
        with pytest.raises(tb.ParameterError):
            spec("purcell", (5.0, 5.0, 10))
        with pytest.raises(tb.ParameterError):
            spec("purcell", (5.0, 1.0, 10))

    def test_single_step_axis_rejected(self):
        with pytest.raises(tb.ParameterError):
            spec("purcell", (1.0, 5.0, 1))


class TestPurcellSweep:
    def test_axis_is_log_spaced_by_formula(self):
        result = tb.sweep_purcell(spec("purcell", (1.0, 200.0, 5)))
        llo, lhi = math.log10(1.0), math.log10(200.0)
        for k, record in enumerate(result.records):
            assert record[0] == 10.0 ** (llo + k * (lhi - llo) / 4)

    def test_visibility_monotone_in_enhancement(self):
        result = tb.sweep_purcell(spec("purcell", (1.0, 200.0, 50)))
        values = [r[1] for r in result.records]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_records_match_direct_evaluation(self):
        result = tb.sweep_purcell(spec("purcell", (1.0, 200.0, 9)))
        for factor, v, threshold in result.records:
            rates = make_rates(purcell=factor)
            assert v == tb.max_visibility(rates)
            assert threshold == tb.BELL_THRESHOLD

    def test_bell_crossing_is_bracketed(self):
        result = tb.sweep_purcell(spec("purcell", (1.0, 200.0, 200)))
        signs = [v > threshold for _, v, threshold in result.records]
        flips = [i for i, (a, b) in enumerate(zip(signs, signs[1:])) if a != b]
        assert len(flips) == 1
        below = result.records[flips[0]][0]
        above = result.records[flips[0] + 1][0]
        assert below < 16.0947570824873 < above

    def test_columns_and_metadata(self):
        result = tb.sweep_purcell(spec("purcell", (1.0, 200.0, 5)))
        assert result.columns == ("purcell_factor", "visibility", "threshold")
        md = result.metadata
        assert md["kind"] == "purcell"
        assert md["tool_version"] == tb.__version__
        assert (md["axis_min"], md["axis_max"], md["axis_steps"]) == (1.0, 200.0, 5)
        assert md["axis_scale"] == "log10"
        assert md["t2_star_ps"] == 300.0


class TestDelaySweep:
    def test_axis_is_linear_by_formula(self):
        result = tb.sweep_delay(spec("delay", (-30.0, 30.0, 7)))
        for k, record in enumerate(result.records):
            assert record[0] == -30.0 + k * 60.0 / 6

    def test_symmetric_and_peaked_at_zero(self):
        result = tb.sweep_delay(spec("delay", (-30.0, 30.0, 61)))
        values = [r[1] for r in result.records]
        mid = len(values) // 2
        assert values[mid] == tb.max_visibility(tb.derive_rates(EMITTER))
        for left, right in zip(values[:mid], values[:mid:-1]):
            assert left == pytest.approx(right, rel=1e-12)
        assert max(values) == values[mid]

    def test_records_match_direct_evaluation(self):
        rates = tb.derive_rates(EMITTER)
        result = tb.sweep_delay(spec("delay", (-20.0, 20.0, 5)))
        for delta, v, _ in result.records:
            expected = tb.visibility_at(rates, 12500.0, 12500.0,
                                        12500.0 - delta).v
            assert v == expected

    def test_axis_beyond_hardware_rejected(self):
        with pytest.raises(tb.ParameterError, match="delay"):
            tb.sweep_delay(spec("delay", (-30.0, 13000.0, 3)))


class TestMap2dSweep:
    def test_row_major_order_and_default_second_axis(self):
        result = tb.sweep_map2d(spec("map2d", (-10.0, 10.0, 3)))
        xs = [r[0] for r in result.records]
        ys = [r[1] for r in result.records]
        assert xs == [-10.0, -10.0, -10.0, 0.0, 0.0, 0.0, 10.0, 10.0, 10.0]
        assert ys == [-10.0, 0.0, 10.0] * 3
        assert result.metadata["axis2_steps"] == 3

    def test_separate_second_axis(self):
        result = tb.sweep_map2d(spec("map2d", (-10.0, 10.0, 3),
                                     axis2=(-5.0, 5.0, 2)))
        assert len(result.records) == 6
        assert result.metadata["axis2_min"] == -5.0

    def test_symmetric_under_axis_exchange(self):
        result = tb.sweep_map2d(spec("map2d", (-15.0, 15.0, 5)))
        grid = {(x, y): v for x, y, v in result.records}
        for (x, y), v in grid.items():
            assert v == pytest.approx(grid[(y, x)], rel=1e-12)

    def test_diagonal_follows_envelope_decay(self):
        rates = tb.derive_rates(EMITTER)
        result = tb.sweep_map2d(spec("map2d", (-15.0, 15.0, 5)))
        for x, y, v in result.records:
            if x == y:
                expected = math.exp(-rates.gamma_prime * abs(x)) * \
                    rates.indistinguishability
                assert v == pytest.approx(expected, rel=1e-12)

    def test_center_is_ceiling(self):
        result = tb.sweep_map2d(spec("map2d", (-10.0, 10.0, 3)))
        center = {(x, y): v for x, y, v in result.records}[(0.0, 0.0)]
        assert center == tb.max_visibility(tb.derive_rates(EMITTER))


class TestJitterSweep:
    def test_linear_first_order_model(self):
        rates = tb.derive_rates(EMITTER)
        result = tb.sweep_jitter(spec("jitter", (0.0, 2.0, 5)))
        v0 = tb.max_visibility(rates)
        for jit, v in result.records:
            assert v == pytest.approx(
                v0 * (1.0 - rates.gamma_prime * jit), rel=1e-12)
        assert result.records[0][1] == v0

    def test_columns(self):
        result = tb.sweep_jitter(spec("jitter", (0.0, 2.0, 3)))
        assert result.columns == ("jitter_ps", "visibility")

    def test_negative_axis_rejected(self):
        with pytest.raises(tb.ParameterError, match="jitter"):
            tb.sweep_jitter(spec("jitter", (-1.0, 1.0, 5)))


class TestRunSweep:
    @pytest.mark.parametrize("kind,axis", [
        ("purcell", (1.0, 200.0, 7)),
        ("delay", (-30.0, 30.0, 7)),
        ("map2d", (-10.0, 10.0, 3)),
        ("jitter", (0.0, 2.0, 7)),
    ])
    def test_dispatch_matches_direct_call(self, kind, axis):
        direct = {
            "purcell": tb.sweep_purcell,
            "delay": tb.sweep_delay,
            "map2d": tb.sweep_map2d,
            "jitter": tb.sweep_jitter,
        }[kind](spec(kind, axis))
        routed = tb.run_sweep(spec(kind, axis))
        assert routed == direct

    def test_kind_mismatch_rejected(self):
        with pytest.raises(tb.ParameterError):
            tb.sweep_purcell(spec("delay", (-1.0, 1.0, 3)))
