import numpy as np

from spikewing.expert.madgwick import AttitudeFilter
from spikewing.expert.synth import (GRAVITY, SynthConfig, synth_imu,
                                    synth_trajectory)


class TestTrajectory:
    def test_no_undulation_no_refs_constant_attitude(self):
        cfg = SynthConfig(und_pitch_deg=0.0, und_roll_deg=0.0,
                          und_yaw_deg=0.0, roll_wander_deg=0.0,
                          pitch_ref_max_deg=0.0, yaw_sweep_max_dps=0.0,
                          yaw_step_max_deg=0.0)
        traj = synth_trajectory(cfg, 10.0, seed=1)
        assert np.allclose(traj["pitch"], traj["pitch"][0], atol=1e-9)
        assert np.allclose(traj["yaw"], traj["yaw"][0], atol=1e-9)
        assert np.allclose(traj["roll"], 0.0, atol=1e-9)

    def test_same_seed_identical(self):
        cfg = SynthConfig()
        a = synth_trajectory(cfg, 20.0, seed=9)
        b = synth_trajectory(cfg, 20.0, seed=9)
        for key in ("pitch", "roll", "yaw", "theta_ref", "psi_ref"):
            assert np.array_equal(a[key], b[key])

    def test_spectral_peak_at_flap_frequency(self):
        cfg = SynthConfig()
        traj = synth_trajectory(cfg, 60.0, seed=2)
        pitch = traj["pitch"] - traj["pitch"].mean()
        spec = np.abs(np.fft.rfft(pitch))
        freqs = np.fft.rfftfreq(pitch.size, cfg.dt)
        band = freqs >= 1.0
        peak = freqs[band][np.argmax(spec[band])]
        assert abs(peak - 3.25) <= 0.1


class TestSynthImu:
    def test_constant_attitude_static_imu(self):
        n = 200
        roll = np.full(n, 10.0)
        pitch = np.full(n, -15.0)
        yaw = np.full(n, 30.0)
        gyro, accel = synth_imu(roll, pitch, yaw, 0.01)
        assert np.allclose(gyro, 0.0, atol=1e-12)
        norms = np.linalg.norm(accel, axis=1)
        assert np.allclose(norms, GRAVITY, atol=1e-12)

    def test_level_gravity_along_z(self):
        n = 50
        zeros = np.zeros(n)
        _, accel = synth_imu(zeros, zeros, zeros, 0.01)
        assert np.allclose(accel[:, 2], GRAVITY)
        assert np.allclose(accel[:, :2], 0.0)

    def test_pure_yaw_ramp_level(self):
        n = 300
        zeros = np.zeros(n)
        yaw = np.arange(n) * 0.2  # 20 deg/s at 100 Hz
        gyro, _ = synth_imu(zeros, zeros, yaw, 0.01)
        inner = slice(5, -5)
        assert np.allclose(gyro[inner, 0], 0.0, atol=1e-9)
        assert np.allclose(gyro[inner, 1], 0.0, atol=1e-9)
        assert np.allclose(gyro[inner, 2], np.radians(20.0), atol=1e-6)

    def test_round_trip_attitude_recovery(self):
        """Noise-free IMU replayed through the filter recovers roll/pitch."""
        cfg = SynthConfig(gyro_noise_rads=0.0, accel_noise_ms2=0.0)
        traj = synth_trajectory(cfg, 30.0, seed=4)
        gyro, accel = synth_imu(traj["roll"], traj["pitch"], traj["yaw"],
                                cfg.dt)
        filt = AttitudeFilter(gain=0.1)
        rolls = np.empty(gyro.shape[0])
        pitches = np.empty(gyro.shape[0])
        for i in range(gyro.shape[0]):
            rolls[i], pitches[i], _ = filt.update(gyro[i], accel[i], cfg.dt)
        skip = 500  # initial convergence
        roll_rms = np.sqrt(np.mean((rolls[skip:] - traj["roll"][skip:]) ** 2))
        pitch_rms = np.sqrt(np.mean(
            (pitches[skip:] - traj["pitch"][skip:]) ** 2))
        assert roll_rms < 1.0 and pitch_rms < 1.0
