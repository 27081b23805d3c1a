"""Channel scaling and window extraction from flight logs.

Networks train in a scaled signal space: each input/target channel is
multiplied by a fixed factor chosen so its training-set RMS maps to about
one. Windows are cut per log (never across log boundaries) with a fixed
stride, in deterministic order.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation

PITCH_OFFSET = "pitch_offset"
YAW_OFFSET = "yaw_offset"
CPG_AGNOSTIC = "cpg_agnostic"

ESTIMATOR_INPUT_DIM = 6
# theta_ref, wrapped relative yaw reference, gyro x/y/z
CONTROLLER_REF_DIM = 5
ESTIMATOR_OUTPUT_DIM = 3  # roll, pitch, yaw_rate


def scale(x, c):
    """Elementwise multiply by the channel scale vector."""
    c = np.asarray(c, dtype=np.float64)
    if np.any(c == 0.0):
        raise ContractViolation("scale entries must be nonzero")
    return np.asarray(x, dtype=np.float64) * c


def unscale(y, c):
    """Exact inverse of scale()."""
    c = np.asarray(c, dtype=np.float64)
    if np.any(c == 0.0):
        raise ContractViolation("scale entries must be nonzero")
    return np.asarray(y, dtype=np.float64) / c


def compute_scale(stacked, floor=1e-9):
    """Per-channel 1/RMS over row-stacked samples; degenerate channels -> 1."""
    rms = np.sqrt(np.mean(np.square(stacked), axis=0))
    return np.where(rms > floor, 1.0 / np.maximum(rms, floor), 1.0)


def estimator_features(log, gyro_bias=(0.0, 0.0, 0.0)):
    """Inputs: bias-corrected gyro + accel. Targets: roll, pitch, yaw rate."""
    x = np.concatenate([log.gyro - np.asarray(gyro_bias), log.accel], axis=1)
    y = np.stack([log.roll, log.pitch, log.yaw_rate], axis=1)
    return x, y


def controller_refs(theta_ref, psi_ref, yaw, gyro):
    """Reference/measurement block of the controller input.

    Heading is only observable up to the integration constant of the
    reconstructed yaw, so the yaw reference enters relative to the current
    heading (wrapped difference) rather than as two absolute angles.
    """
    from ..expert.angles import wrap_angle

    rel_yaw = wrap_angle(np.asarray(psi_ref, dtype=np.float64)
                         - np.asarray(yaw, dtype=np.float64))
    gyro = np.asarray(gyro, dtype=np.float64)
    return np.stack([np.asarray(theta_ref, dtype=np.float64),
                     np.atleast_1d(rel_yaw),
                     gyro[:, 0], gyro[:, 1], gyro[:, 2]], axis=1)


def controller_features(log, variant, gyro_bias=(0.0, 0.0, 0.0)):
    """Inputs: reference/measurement block plus the estimate slot.

    The estimate slot (roll, pitch, yaw rate) holds expert estimates
    during training and the estimator network's outputs at deployment.
    """
    gyro = log.gyro - np.asarray(gyro_bias)
    refs = controller_refs(log.theta_ref, log.psi_ref, log.yaw, gyro)
    x = np.concatenate(
        [refs, np.stack([log.roll, log.pitch, log.yaw_rate], axis=1)],
        axis=1)
    if variant == PITCH_OFFSET:
        y = log.offset_pitch[:, None]
    elif variant == YAW_OFFSET:
        y = log.offset_yaw[:, None]
    elif variant == CPG_AGNOSTIC:
        y = np.stack([log.pwm_left, log.pwm_right], axis=1)
    else:
        raise ContractViolation(f"unknown controller variant {variant!r}")
    return x, np.ascontiguousarray(y)


@dataclass
class ScaledDataset:
    """Pre-scaled training windows: x (N, T, D), y (N, T, O)."""

    x: np.ndarray
    y: np.ndarray
    c_x: np.ndarray
    c_y: np.ndarray
    split: str = "train"

    @property
    def n_windows(self):
        return self.x.shape[0]


def window_dataset(feature_pairs, window_len, stride, c_x=None, c_y=None,
                   split="train"):
    """Cut overlapping windows from per-log (x, y) feature arrays.

    Scales default to 1/RMS over everything passed in; pass the training
    scales explicitly when building validation/test splits. Logs shorter
    than one window are skipped with a warning.
    """
    if stride <= 0 or window_len <= 0:
        raise ContractViolation("window_len and stride must be positive")
    usable = []
    for x, y in feature_pairs:
        if x.shape[0] < window_len:
            warnings.warn(
                f"log with {x.shape[0]} samples shorter than window "
                f"{window_len}; skipped", stacklevel=2)
            continue
        usable.append((np.asarray(x, dtype=np.float64),
                       np.asarray(y, dtype=np.float64)))
    if not usable:
        raise ContractViolation("no log is long enough for one window")
    if c_x is None:
        c_x = compute_scale(np.concatenate([x for x, _ in usable], axis=0))
    if c_y is None:
        c_y = compute_scale(np.concatenate([y for _, y in usable], axis=0))
    xs, ys = [], []
    for x, y in usable:
        for start in range(0, x.shape[0] - window_len + 1, stride):
            xs.append(scale(x[start:start + window_len], c_x))
            ys.append(scale(y[start:start + window_len], c_y))
    return ScaledDataset(x=np.stack(xs), y=np.stack(ys),
                         c_x=np.asarray(c_x, dtype=np.float64),
                         c_y=np.asarray(c_y, dtype=np.float64), split=split)
