"""Expert demonstration generation and replay.

The expert is the classical pipeline demonstrated to the networks:
gyro-bias subtraction, quaternion attitude filtering, causal pitch
smoothing, per-channel PID on the tracking errors, symmetric/antisymmetric
wing mixing, stroke oscillation, and the servo pulse map. It is a pure
function of the inertial samples, references, and configuration, so
replaying a stored log reproduces its labels exactly.
"""

from dataclasses import dataclass, field

import numpy as np

from .angles import integrate_yaw, wrap_angle, yaw_rate_target
from .cpg import CPGParams, angle_to_pwm, cpg_step, offsets_to_wing_commands
from .madgwick import AttitudeFilter
from .pid import (OFFSET_LIMIT_DEG, PIDGains, PidState, PITCH_GAINS,
                  YAW_GAINS, pid_step)
from .rls import RlsConstantFit
from .synth import synth_imu, synth_trajectory


@dataclass
class ExpertConfig:
    dt: float = 0.01
    madgwick_gain: float = 0.1
    rls_forgetting: float = 0.95
    pitch_gains: PIDGains = field(default_factory=lambda: PITCH_GAINS)
    yaw_gains: PIDGains = field(default_factory=lambda: YAW_GAINS)
    offset_limit_deg: float = OFFSET_LIMIT_DEG
    cpg: CPGParams = field(default_factory=CPGParams)
    gyro_bias: tuple = (0.0, 0.0, 0.0)


@dataclass
class FlightLog:
    """Column-oriented flight log; one row per 10 ms tick."""

    timestamp: np.ndarray
    gyro: np.ndarray
    accel: np.ndarray
    theta_ref: np.ndarray
    psi_ref: np.ndarray
    roll: np.ndarray
    pitch: np.ndarray
    pitch_filtered: np.ndarray
    yaw: np.ndarray
    yaw_rate: np.ndarray
    offset_pitch: np.ndarray
    offset_yaw: np.ndarray
    pwm_left: np.ndarray
    pwm_right: np.ndarray

    @property
    def n(self):
        return self.timestamp.shape[0]


def generate_expert_labels(gyro, accel, theta_ref, psi_ref, cfg,
                           timestamps=None):
    """Run the full expert pipeline over aligned input sequences.

    yaw_rate is stored in degrees/second; the backward-difference target in
    degrees/ms is recovered exactly as yaw_rate / 1000.
    """
    gyro = np.asarray(gyro, dtype=np.float64)
    accel = np.asarray(accel, dtype=np.float64)
    theta_ref = np.asarray(theta_ref, dtype=np.float64)
    psi_ref = wrap_angle(np.asarray(psi_ref, dtype=np.float64))
    n = gyro.shape[0]
    dt = cfg.dt
    t = np.arange(n) * dt if timestamps is None \
        else np.asarray(timestamps, dtype=np.float64)

    bias = np.asarray(cfg.gyro_bias, dtype=np.float64)
    gyro_corr = gyro - bias

    est = AttitudeFilter(gain=cfg.madgwick_gain)
    rls = RlsConstantFit(forgetting=cfg.rls_forgetting)
    roll = np.empty(n)
    pitch = np.empty(n)
    yaw_mad = np.empty(n)
    pitch_f = np.empty(n)
    for i in range(n):
        roll[i], pitch[i], yaw_mad[i] = est.update(gyro_corr[i], accel[i], dt)
        pitch_f[i] = rls.update(pitch[i])

    rate_dpms = yaw_rate_target(yaw_mad, dt_ms=dt * 1000.0)
    yaw_rate = rate_dpms * 1000.0
    yaw = np.empty(n)
    yaw[0] = wrap_angle(yaw_mad[0])
    for i in range(1, n):
        yaw[i] = integrate_yaw(yaw[i - 1], yaw_rate[i - 1], yaw_rate[i], dt)

    pid_pitch = PidState()
    pid_yaw = PidState()
    o_pitch = np.empty(n)
    o_yaw = np.empty(n)
    pwm_l = np.empty(n)
    pwm_r = np.empty(n)
    for i in range(n):
        e_th = theta_ref[i] - pitch_f[i]
        e_ps = wrap_angle(psi_ref[i] - yaw[i])
        o_pitch[i] = pid_step(cfg.pitch_gains, pid_pitch, e_th, dt,
                              cfg.offset_limit_deg)
        o_yaw[i] = pid_step(cfg.yaw_gains, pid_yaw, e_ps, dt,
                            cfg.offset_limit_deg)
        o_l, o_r = offsets_to_wing_commands(o_pitch[i], o_yaw[i])
        pwm_l[i] = angle_to_pwm(cpg_step(cfg.cpg, t[i], o_l))
        pwm_r[i] = angle_to_pwm(cpg_step(cfg.cpg, t[i], o_r))

    return FlightLog(timestamp=t, gyro=gyro, accel=accel,
                     theta_ref=theta_ref, psi_ref=psi_ref, roll=roll,
                     pitch=pitch, pitch_filtered=pitch_f, yaw=yaw,
                     yaw_rate=yaw_rate, offset_pitch=o_pitch,
                     offset_yaw=o_yaw, pwm_left=pwm_l, pwm_right=pwm_r)


def make_flight_log(synth_cfg, expert_cfg, duration_s, seed):
    """Synthesize one complete demonstration log.

    The stroke oscillator phase is taken from the trajectory generator so
    the body undulation stays phase-locked to the wing stroke. Returns the
    log together with the exact ExpertConfig used (the per-log oscillator
    phase is required to replay the log bit-exactly).
    """
    traj = synth_trajectory(synth_cfg, duration_s, seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x1A0]))
    gyro, accel = synth_imu(traj["roll"], traj["pitch"], traj["yaw"],
                            synth_cfg.dt, rng=rng,
                            gyro_noise_rads=synth_cfg.gyro_noise_rads,
                            accel_noise_ms2=synth_cfg.accel_noise_ms2)
    cpg = CPGParams(amplitude_deg=expert_cfg.cpg.amplitude_deg,
                    frequency_hz=synth_cfg.flap_hz,
                    phase_rad=traj["cpg_phase"])
    cfg = ExpertConfig(dt=expert_cfg.dt,
                       madgwick_gain=expert_cfg.madgwick_gain,
                       rls_forgetting=expert_cfg.rls_forgetting,
                       pitch_gains=expert_cfg.pitch_gains,
                       yaw_gains=expert_cfg.yaw_gains,
                       offset_limit_deg=expert_cfg.offset_limit_deg,
                       cpg=cpg, gyro_bias=expert_cfg.gyro_bias)
    log = generate_expert_labels(gyro, accel, traj["theta_ref"],
                                 traj["psi_ref"], cfg)
    return log, cfg
