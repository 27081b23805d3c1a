import math

import numpy as np
import pytest

from spikewing.expert.angles import wrap_angle
from spikewing.expert.cpg import (CPGParams, angle_to_pwm, cpg_step,
                                  offsets_to_wing_commands)
from spikewing.expert.pid import PIDGains, PidState, pid_step


class TestCpg:
    def test_zero_crossing_at_origin(self):
        p = CPGParams(amplitude_deg=20.0, frequency_hz=3.25, phase_rad=0.0)
        assert cpg_step(p, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_peak_at_quarter_period(self):
        p = CPGParams(amplitude_deg=20.0, frequency_hz=3.25, phase_rad=0.0)
        assert cpg_step(p, 1.0 / (4 * 3.25), 0.0) == pytest.approx(20.0)

    def test_offset_shifts_mean_preserves_amplitude(self):
        p = CPGParams(amplitude_deg=20.0, frequency_hz=2.0, phase_rad=0.3)
        t = np.linspace(0.0, 0.5, 10000, endpoint=False)
        vals = np.array([cpg_step(p, tk, 5.0) for tk in t])
        assert vals.mean() == pytest.approx(5.0, abs=1e-3)
        assert vals.max() - vals.min() == pytest.approx(40.0, abs=1e-3)

    def test_periodicity(self):
        p = CPGParams(amplitude_deg=11.0, frequency_hz=3.25, phase_rad=1.1)
        for t in np.linspace(0, 2, 17):
            assert cpg_step(p, t + 1 / 3.25, 2.0) == pytest.approx(
                cpg_step(p, t, 2.0), abs=1e-9)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            CPGParams(amplitude_deg=-1.0)
        with pytest.raises(ValueError):
            CPGParams(frequency_hz=0.0)


class TestWingMixing:
    def test_pitch_instance(self):
        assert offsets_to_wing_commands(3.0, 0.0) == (3.0, 3.0)

    def test_yaw_instance(self):
        assert offsets_to_wing_commands(0.0, 2.0) == (2.0, -2.0)

    def test_zero(self):
        assert offsets_to_wing_commands(0.0, 0.0) == (0.0, 0.0)

    def test_superposition_identities(self, rng):
        for _ in range(50):
            o_p, o_y = rng.uniform(-20, 20, 2)
            left, right = offsets_to_wing_commands(o_p, o_y)
            assert left + right == pytest.approx(2 * o_p)
            assert left - right == pytest.approx(2 * o_y)


class TestAngleToPwm:
    def test_center(self):
        assert angle_to_pwm(0.0) == 1500.0

    def test_full_travel(self):
        assert angle_to_pwm(60.0) == 2000.0

    def test_clamps(self):
        assert angle_to_pwm(120.0) == 2000.0
        assert angle_to_pwm(-120.0) == 1000.0


class TestWrapAngle:
    def test_examples(self):
        assert wrap_angle(190.0) == pytest.approx(-170.0)
        assert wrap_angle(-180.0) == -180.0
        assert wrap_angle(180.0) == -180.0

    def test_idempotent_and_in_range(self, rng):
        for x in rng.uniform(-1000, 1000, 200):
            w = wrap_angle(x)
            assert -180.0 <= w < 180.0
            assert wrap_angle(w) == w
            assert (x - w) % 360.0 == pytest.approx(0.0, abs=1e-9) \
                or (x - w) % 360.0 == pytest.approx(360.0, abs=1e-9)


class TestPid:
    def test_pure_proportional(self):
        state = PidState()
        u = pid_step(PIDGains(1.0, 0.0, 0.0), state, 2.0, 0.01)
        assert u == pytest.approx(2.0)

    def test_integral_of_constant(self):
        state = PidState()
        gains = PIDGains(0.0, 1.0, 0.0)
        for _ in range(100):
            u = pid_step(gains, state, 1.0, 0.01)
        assert u == pytest.approx(1.0, abs=1e-9)

    def test_matches_reference_pid(self, rng):
        """Independently coded reference with the same discretization."""
        gains = PIDGains(0.6, 0.55, 0.05)
        errors = np.cumsum(rng.normal(0, 0.4, 500))
        dt = 0.01
        state = PidState()
        got = [pid_step(gains, state, e, dt, out_limit=15.0) for e in errors]

        integ = 0.0
        prev = errors[0]
        expect = []
        for e in errors:
            integ += 0.5 * dt * (prev + e)
            integ = min(max(integ, -15.0 / 0.55), 15.0 / 0.55)
            deriv = (e - prev) / dt
            prev = e
            u = 0.6 * e + 0.55 * integ + 0.05 * deriv
            expect.append(min(max(u, -15.0), 15.0))
        assert np.allclose(got, expect, atol=1e-9)

    def test_linearity_unclamped(self, rng):
        gains = PIDGains(0.6, 0.55, 0.05)
        errors = rng.normal(0, 1.0, 200)
        s1, s2 = PidState(), PidState()
        u1 = [pid_step(gains, s1, e, 0.01, out_limit=math.inf)
              for e in errors]
        u2 = [pid_step(gains, s2, 2 * e, 0.01, out_limit=math.inf)
              for e in errors]
        assert np.allclose(np.array(u2), 2 * np.array(u1), rtol=1e-12)

    def test_output_clamped(self):
        state = PidState()
        u = pid_step(PIDGains(1.0, 0.0, 0.0), state, 100.0, 0.01)
        assert u == 15.0
