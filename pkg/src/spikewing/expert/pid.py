"""Discrete PID with trapezoidal integration and anti-windup.

Discretization: trapezoidal accumulation of the integral, backward
difference for the derivative (zero on the first sample). The integral is
clamped so its contribution alone never exceeds the output limit, and the
final command is clamped to the same limit.
"""

from dataclasses import dataclass


@dataclass
class PIDGains:
    kp: float
    ki: float
    kd: float


# Controller gains used to generate expert demonstrations.
PITCH_GAINS = PIDGains(kp=0.6, ki=0.55, kd=0.05)
YAW_GAINS = PIDGains(kp=0.15, ki=0.0, kd=0.0)

OFFSET_LIMIT_DEG = 15.0


@dataclass
class PidState:
    integral: float = 0.0
    prev_error: float = 0.0
    primed: bool = False

    def reset(self):
        self.integral = 0.0
        self.prev_error = 0.0
        self.primed = False


def pid_step(gains, state, error, dt, out_limit=OFFSET_LIMIT_DEG):
    """Advance the controller one sample and return the clamped command."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if not state.primed:
        state.prev_error = error
        state.primed = True
    state.integral += 0.5 * dt * (state.prev_error + error)
    if gains.ki > 0.0:
        bound = out_limit / gains.ki
        state.integral = min(max(state.integral, -bound), bound)
    derivative = (error - state.prev_error) / dt
    state.prev_error = error
    u = gains.kp * error + gains.ki * state.integral + gains.kd * derivative
    return min(max(u, -out_limit), out_limit)
