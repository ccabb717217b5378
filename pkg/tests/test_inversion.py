import numpy as np
import pytest

from nmcascade import (
    ConfigError,
    InversionConfig,
    InversionError,
    InversionMethod,
    TwoReservoirClosedForm,
    invert,
    validate_method,
)
from conftest import local_maxima


class TestKnownPairs:
    def test_exponential(self):
        cfg = InversionConfig(t_max=1.0, n_time=2)
        _, vals = invert(lambda s: 1.0 / (s + 1.0), cfg)
        assert vals[-1].real == pytest.approx(np.exp(-1.0), abs=1e-6)

    def test_sine_at_quarter_period(self):
        cfg = InversionConfig(t_max=np.pi / 2.0, n_time=2)
        _, vals = invert(lambda s: 1.0 / (s * s + 1.0), cfg)
        assert vals[-1].real == pytest.approx(1.0, abs=1e-5)

    def test_step_flat(self):
        cfg = InversionConfig(t_max=10.0, n_time=100)
        t, vals = invert(lambda s: 1.0 / s, cfg)
        keep = t >= 0.1
        assert np.abs(vals[keep].real - 1.0).max() <= 1e-8

    def test_two_res_transform_value(self):
        exact = TwoReservoirClosedForm(1.0, 1.0)
        t_star = np.pi / np.sqrt(exact.beta2)
        cfg = InversionConfig(t_max=float(t_star), n_time=2)
        _, vals = invert(lambda s: exact.b2bar(s), cfg)
        # e^{-t/2} (2/beta^2 - 1) with beta^2 = 1.75
        expected = np.exp(-t_star / 2.0) * (2.0 / 1.75 - 1.0)
        assert expected == pytest.approx(0.043573, abs=2e-6)
        assert vals[-1].real == pytest.approx(expected, abs=1e-4)

    def test_complex_valued_signal(self):
        # f(t) = exp((-0.4 + 3i) t) exercises the two-sided ladder
        pole = -0.4 + 3.0j
        cfg = InversionConfig(t_max=6.0, n_time=25)
        t, vals = invert(lambda s: 1.0 / (s - pole), cfg)
        np.testing.assert_allclose(vals, np.exp(pole * t), atol=1e-7)


class TestBattery:
    def test_default_method_all_pairs_tight(self):
        report = validate_method(InversionConfig())
        assert report.passed()
        for r in report.results:
            assert r.max_error <= 1e-6, r.name

    def test_stehfest_oscillatory_failure_recorded(self):
        report = validate_method(InversionConfig(method=InversionMethod.GAVER_STEHFEST, terms=16))
        by_name = {r.name: r for r in report.results}
        assert by_name["sine"].max_error > 1e-2          # documented limitation
        assert not by_name["sine"].passed
        assert by_name["sine"].oscillatory
        assert by_name["exp-decay"].passed               # smooth pairs stay in tolerance
        assert by_name["step"].passed
        assert report.passed()                           # gate skips oscillatory pairs

    def test_linearity(self):
        cfg = InversionConfig(t_max=8.0, n_time=40)
        fa = lambda s: 1.0 / (s + 1.0)
        fb = lambda s: 1.0 / (s * s + 1.0)
        _, combined = invert(lambda s: 0.7 * fa(s) - 1.3 * fb(s), cfg)
        _, va = invert(fa, cfg)
        _, vb = invert(fb, cfg)
        np.testing.assert_allclose(combined, 0.7 * va - 1.3 * vb, atol=1e-9)

    def test_method_consistency_on_smooth_pair(self):
        euler = InversionConfig(t_max=10.0, n_time=60)
        gs = InversionConfig(method=InversionMethod.GAVER_STEHFEST, terms=16,
                             t_max=10.0, n_time=60)
        _, ve = invert(lambda s: 1.0 / (s + 1.0) ** 2, euler)
        _, vg = invert(lambda s: 1.0 / (s + 1.0) ** 2, gs)
        assert np.abs(ve - vg).max() <= 1e-4


class TestOscillationFidelity:
    def test_peak_spacing_matches_beta(self):
        exact = TwoReservoirClosedForm(1.0, 5.0)
        beta = np.sqrt(exact.beta2)
        cfg = InversionConfig(t_max=5.0, n_time=501)
        t, vals = invert(lambda s: exact.b2bar(s), cfg)
        p2 = vals.real**2
        _, peaks = local_maxima(t, p2, floor=1e-3)
        spacing = np.diff(peaks)
        assert len(spacing) >= 3
        np.testing.assert_allclose(spacing, 2.0 * np.pi / beta, rtol=0.02)


class TestErrors:
    def test_non_finite_sampler_value(self):
        cfg = InversionConfig(t_max=1.0, n_time=3)
        with pytest.raises(InversionError):
            invert(lambda s: np.full(len(s), np.nan, dtype=complex), cfg)

    def test_acceleration_stall_reported(self):
        # delayed step e^{-5s}/s: the series cannot settle near the jump
        cfg = InversionConfig(t_max=5.05, n_time=2)
        with pytest.raises(InversionError) as err:
            invert(lambda s: np.exp(-5.0 * s) / s, cfg)
        assert err.value.residual is not None

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            InversionConfig(terms=4)
        with pytest.raises(ConfigError):
            InversionConfig(t_max=-1.0)
        with pytest.raises(ConfigError):
            InversionConfig(sigma=1e-6)
        with pytest.raises(ConfigError):
            InversionConfig(n_time=1)


class TestStehfestDetails:
    def test_order_capped_and_even(self):
        from nmcascade.inversion import stehfest_order

        assert stehfest_order(24) == 16
        assert stehfest_order(13) == 12

    def test_smooth_decay(self):
        cfg = InversionConfig(method=InversionMethod.GAVER_STEHFEST, terms=16,
                              t_max=3.0, n_time=30)
        t, vals = invert(lambda s: 1.0 / (s + 1.0), cfg)
        assert np.abs(vals.real - np.exp(-t)).max() <= 1e-4
