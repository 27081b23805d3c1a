"""Sinusoidal stroke oscillator and the wing command chain.

The oscillator produces the commanded stroke angle; the attitude controller
only shifts its mean. Equal offsets on both wings pitch the body, opposite
offsets yaw it, and the stroke angle maps affinely onto a servo pulse width.
"""

import math
from dataclasses import dataclass


@dataclass
class CPGParams:
    amplitude_deg: float = 20.0
    frequency_hz: float = 3.25
    phase_rad: float = 0.0

    def __post_init__(self):
        if self.amplitude_deg <= 0.0:
            raise ValueError("amplitude must be positive")
        if self.frequency_hz <= 0.0:
            raise ValueError("frequency must be positive")


def cpg_step(params, t, offset_deg):
    """Stroke angle A*sin(2*pi*f*t + phase) + offset, in degrees."""
    return params.amplitude_deg * math.sin(
        2.0 * math.pi * params.frequency_hz * t + params.phase_rad) + offset_deg


def offsets_to_wing_commands(o_pitch, o_yaw):
    """Superpose the symmetric pitch and antisymmetric yaw offsets.

    Left wing gets o_pitch + o_yaw, right wing o_pitch - o_yaw; zeroing one
    channel recovers the single-channel behavior exactly.
    """
    return o_pitch + o_yaw, o_pitch - o_yaw


PWM_CENTER_US = 1500.0
PWM_MIN_US = 1000.0
PWM_MAX_US = 2000.0
SERVO_TRAVEL_DEG = 60.0
US_PER_DEG = 500.0 / SERVO_TRAVEL_DEG


def angle_to_pwm(stroke_deg, us_per_deg=US_PER_DEG):
    """Servo pulse in microseconds: 1500 at center, clamped to [1000, 2000]."""
    pulse = PWM_CENTER_US + us_per_deg * stroke_deg
    return min(max(pulse, PWM_MIN_US), PWM_MAX_US)
