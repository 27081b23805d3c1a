"""Gradient-descent quaternion attitude filter (six-axis form).

Fuses gyroscope integration with an accelerometer correction step: the
quaternion rate from the gyro is nudged opposite the normalized gradient of
the gravity-alignment error, scaled by the filter gain. Yaw is returned for
completeness but is observable only through gyro integration here (no
magnetometer), so it drifts.
"""

import math

import numpy as np

from ..errors import ContractViolation

DEFAULT_GAIN = 0.1


def _quat_mult(q, r):
    w1, x1, y1, z1 = q
    w2, x2, y2, z2 = r
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def quat_to_euler_deg(q):
    """ZYX Euler angles (roll, pitch, yaw) in degrees."""
    w, x, y, z = q
    sinr = 2.0 * (w * x + y * z)
    cosr = 1.0 - 2.0 * (x * x + y * y)
    roll = math.atan2(sinr, cosr)
    sinp = 2.0 * (w * y - z * x)
    pitch = math.copysign(math.pi / 2.0, sinp) if abs(sinp) >= 1.0 \
        else math.asin(sinp)
    siny = 2.0 * (w * z + x * y)
    cosy = 1.0 - 2.0 * (y * y + z * z)
    yaw = math.atan2(siny, cosy)
    return (math.degrees(roll), math.degrees(pitch), math.degrees(yaw))


def euler_deg_to_quat(roll, pitch, yaw):
    r, p, y = (math.radians(a) / 2.0 for a in (roll, pitch, yaw))
    cr, sr = math.cos(r), math.sin(r)
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(y), math.sin(y)
    return np.array([
        cy * cp * cr + sy * sp * sr,
        cy * cp * sr - sy * sp * cr,
        cy * sp * cr + sy * cp * sr,
        sy * cp * cr - cy * sp * sr,
    ])


class AttitudeFilter:
    """Streaming six-axis attitude estimator."""

    def __init__(self, gain=DEFAULT_GAIN, q0=None):
        self.gain = gain
        self.q = np.array([1.0, 0.0, 0.0, 0.0]) if q0 is None \
            else np.asarray(q0, dtype=np.float64).copy()

    def reset(self, q0=None):
        self.q = np.array([1.0, 0.0, 0.0, 0.0]) if q0 is None \
            else np.asarray(q0, dtype=np.float64).copy()

    def update(self, gyro_rads, accel_ms2, dt):
        """One fusion step; returns (roll, pitch, yaw) in degrees.

        A zero-norm accelerometer sample degrades gracefully to gyro-only
        propagation for that step.
        """
        q = self.q
        gyro = np.asarray(gyro_rads, dtype=np.float64)
        accel = np.asarray(accel_ms2, dtype=np.float64)
        q_dot = 0.5 * _quat_mult(q, np.array([0.0, *gyro]))
        norm_a = np.linalg.norm(accel)
        if norm_a > 0.0 and self.gain > 0.0:
            ax, ay, az = accel / norm_a
            f = np.array([
                2.0 * (q[1] * q[3] - q[0] * q[2]) - ax,
                2.0 * (q[0] * q[1] + q[2] * q[3]) - ay,
                2.0 * (0.5 - q[1] ** 2 - q[2] ** 2) - az,
            ])
            jac = np.array([
                [-2.0 * q[2], 2.0 * q[3], -2.0 * q[0], 2.0 * q[1]],
                [2.0 * q[1], 2.0 * q[0], 2.0 * q[3], 2.0 * q[2]],
                [0.0, -4.0 * q[1], -4.0 * q[2], 0.0],
            ])
            step = jac.T @ f
            norm_s = np.linalg.norm(step)
            if norm_s > 0.0:
                q_dot = q_dot - self.gain * (step / norm_s)
        q = q + q_dot * dt
        self.q = q / np.linalg.norm(q)
        return quat_to_euler_deg(self.q)


def gyro_bias_calibrate(samples):
    """Per-axis mean of stationary gyro samples (rad/s); needs >= 100."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ContractViolation("expected an N x 3 gyro sample array")
    if arr.shape[0] < 100:
        raise ContractViolation("need at least 100 stationary samples")
    return arr.mean(axis=0)
