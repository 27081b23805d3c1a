"""Synthetic attitude trajectories and inertial measurements.

Reference profiles mix holds, slow sweeps, and steps (large steps drive the
tracked attitude into its slew limit, producing saturation episodes). The
true attitude follows the reference through a second-order lag whose time
constant varies per segment (tracking delays), with a flapping-frequency
undulation superimposed on all three axes, phase-locked to the stroke
oscillator. The accelerometer model sees gravity plus white noise only; no
translational acceleration.
"""

import math
from dataclasses import dataclass

import numpy as np

GRAVITY = 9.81

# Fixed body-response phase lags of the undulation relative to the stroke.
UND_LAG_PITCH = 0.6
UND_LAG_ROLL = 2.1
UND_LAG_YAW = 1.3


@dataclass
class SynthConfig:
    dt: float = 0.01
    flap_hz: float = 3.25
    pitch_ref_max_deg: float = 22.0
    yaw_sweep_max_dps: float = 25.0
    yaw_step_max_deg: float = 35.0
    segment_s: tuple = (2.0, 6.0)
    lag_tau_s: float = 0.35
    lag_tau_spread: float = 2.0
    slew_max_dps: float = 80.0
    roll_wander_deg: float = 5.0
    und_pitch_deg: float = 2.5
    und_roll_deg: float = 1.5
    und_yaw_deg: float = 0.6
    gyro_noise_rads: float = 0.002
    accel_noise_ms2: float = 0.05


def _segments(rng, n, dt, lo, hi):
    """Yield (start, length) covering n samples with random durations."""
    spans = []
    i = 0
    while i < n:
        length = max(1, int(round(rng.uniform(lo, hi) / dt)))
        spans.append((i, min(length, n - i)))
        i += length
    return spans


def _pitch_reference(rng, n, dt, cfg):
    ref = np.zeros(n)
    level = 0.0
    for start, length in _segments(rng, n, dt, *cfg.segment_s):
        kind = rng.choice(("hold", "ramp", "step"))
        target = rng.uniform(-cfg.pitch_ref_max_deg, cfg.pitch_ref_max_deg)
        if kind == "hold":
            ref[start:start + length] = level
        elif kind == "ramp":
            ref[start:start + length] = np.linspace(level, target, length)
            level = target
        else:
            ref[start:start + length] = target
            level = target
    return ref


def _yaw_reference(rng, n, dt, cfg):
    ref = np.zeros(n)
    level = 0.0
    for start, length in _segments(rng, n, dt, *cfg.segment_s):
        kind = rng.choice(("hold", "sweep", "step"))
        if kind == "hold":
            ref[start:start + length] = level
        elif kind == "sweep":
            rate = rng.uniform(-cfg.yaw_sweep_max_dps, cfg.yaw_sweep_max_dps)
            ref[start:start + length] = level + rate * dt * np.arange(length)
            level = ref[start + length - 1]
        else:
            level = level + rng.uniform(-cfg.yaw_step_max_deg,
                                        cfg.yaw_step_max_deg)
            ref[start:start + length] = level
    return ref


def _lagged_track(ref, rng, n, dt, cfg):
    """Second-order lag with per-segment time constant and a slew limit."""
    tau = np.empty(n)
    for start, length in _segments(rng, n, dt, *cfg.segment_s):
        tau[start:start + length] = cfg.lag_tau_s * rng.uniform(
            1.0, cfg.lag_tau_spread)
    out = np.empty(n)
    y1 = ref[0]
    y2 = ref[0]
    max_step = cfg.slew_max_dps * dt
    for i in range(n):
        a = dt / (tau[i] + dt)
        y1 += a * (ref[i] - y1)
        target = y2 + a * (y1 - y2)
        y2 += min(max(target - y2, -max_step), max_step)
        out[i] = y2
    return out


def _smooth_wander(rng, n, dt, amplitude, tau=1.5):
    white = rng.standard_normal(n)
    a = dt / (tau + dt)
    y1 = 0.0
    y2 = 0.0
    out = np.empty(n)
    for i in range(n):
        y1 += a * (white[i] - y1)
        y2 += a * (y1 - y2)
        out[i] = y2
    peak = np.abs(out).max()
    if peak > 0.0:
        out *= amplitude / peak
    return out


def synth_trajectory(cfg, duration_s, seed):
    """Generate references and true attitude; deterministic per seed.

    Returns a dict of arrays: t, theta_ref, psi_ref (unwrapped), roll,
    pitch, yaw (true attitude, unwrapped degrees), plus the stroke
    oscillator phase offset used for phase-locking.
    """
    rng = np.random.default_rng(seed)
    n = int(round(duration_s / cfg.dt))
    t = np.arange(n) * cfg.dt
    cpg_phase = rng.uniform(0.0, 2.0 * math.pi)

    theta_ref = _pitch_reference(rng, n, cfg.dt, cfg)
    psi_ref = _yaw_reference(rng, n, cfg.dt, cfg)

    pitch = _lagged_track(theta_ref, rng, n, cfg.dt, cfg)
    yaw = _lagged_track(psi_ref, rng, n, cfg.dt, cfg)
    roll = _smooth_wander(rng, n, cfg.dt, cfg.roll_wander_deg)

    phase = 2.0 * math.pi * cfg.flap_hz * t + cpg_phase
    pitch = pitch + cfg.und_pitch_deg * np.sin(phase + UND_LAG_PITCH)
    roll = roll + cfg.und_roll_deg * np.sin(phase + UND_LAG_ROLL)
    yaw = yaw + cfg.und_yaw_deg * np.sin(phase + UND_LAG_YAW)

    return {"t": t, "theta_ref": theta_ref, "psi_ref": psi_ref,
            "roll": roll, "pitch": pitch, "yaw": yaw,
            "cpg_phase": cpg_phase}


def synth_imu(roll_deg, pitch_deg, yaw_deg, dt, rng=None,
              gyro_noise_rads=0.0, accel_noise_ms2=0.0):
    """Derive body-frame IMU samples from a smooth attitude sequence.

    Gyro: Euler-angle rates (central differences) mapped through the
    ZYX kinematic relation into body rates, rad/s. Accelerometer: gravity
    reaction in the body frame plus optional white noise, m/s^2.
    """
    roll = np.radians(np.asarray(roll_deg, dtype=np.float64))
    pitch = np.radians(np.asarray(pitch_deg, dtype=np.float64))
    yaw = np.radians(np.asarray(yaw_deg, dtype=np.float64))
    droll = np.gradient(roll, dt)
    dpitch = np.gradient(pitch, dt)
    dyaw = np.gradient(yaw, dt)

    sin_r, cos_r = np.sin(roll), np.cos(roll)
    sin_p, cos_p = np.sin(pitch), np.cos(pitch)
    gyro = np.stack([
        droll - dyaw * sin_p,
        dpitch * cos_r + dyaw * cos_p * sin_r,
        -dpitch * sin_r + dyaw * cos_p * cos_r,
    ], axis=1)
    accel = GRAVITY * np.stack([
        -sin_p,
        cos_p * sin_r,
        cos_p * cos_r,
    ], axis=1)
    if rng is not None:
        if gyro_noise_rads > 0.0:
            gyro = gyro + rng.normal(0.0, gyro_noise_rads, gyro.shape)
        if accel_noise_ms2 > 0.0:
            accel = accel + rng.normal(0.0, accel_noise_ms2, accel.shape)
    return gyro, accel
