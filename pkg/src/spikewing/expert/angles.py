"""Angle wrapping, yaw-rate targets, and yaw reconstruction."""

import numpy as np


def wrap_angle(e):
    """Map an angle (degrees) into [-180, 180), congruent mod 360.

    Values already inside the interval pass through unchanged, which makes
    the function idempotent at the bit level (replaying stored wrapped
    angles reproduces them exactly).
    """
    e = np.asarray(e, dtype=np.float64)
    wrapped = (e + 180.0) % 360.0 - 180.0
    # np.mod can round up to the divisor itself for tiny negative inputs.
    wrapped = np.where(wrapped >= 180.0, -180.0, wrapped)
    result = np.where((e >= -180.0) & (e < 180.0), e, wrapped)
    return result if result.ndim else float(result)


def yaw_rate_target(psi, dt_ms=10.0):
    """Backward-difference yaw rate in degrees per millisecond.

    Consecutive differences are wrapped before division so a 179 -> -179
    transition counts as +2 degrees, not -358. The first element is
    duplicated from the second so the output length matches the input.
    """
    psi = np.asarray(psi, dtype=np.float64)
    if psi.shape[0] < 2:
        raise ValueError("need at least two yaw samples")
    rate = wrap_angle(psi[1:] - psi[:-1]) / dt_ms
    return np.concatenate([rate[:1], rate])


def integrate_yaw(prev_psi, rate_prev, rate_cur, dt):
    """Trapezoidal yaw update, wrapped: psi + dt/2 * (r[t-1] + r[t]).

    Units must agree between the rates and dt (degrees/s with dt in
    seconds, or degrees/ms with dt in milliseconds).
    """
    return float(wrap_angle(prev_psi + 0.5 * dt * (rate_prev + rate_cur)))
