"""Offline replay evaluation of trained networks against expert logs.

Estimation metrics follow the reporting convention of the expert pipeline:
pitch is compared after applying the same causal smoothing filter to both
the prediction and the expert estimate (the raw comparison is reported
too); roll and yaw rate are compared raw. Controller metrics compare the
network's command channel(s) against the stored expert labels, feeding the
controller the expert's estimates (pure imitation measure). The first
second of each log is excluded as initialization transient.
"""

import numpy as np

from .expert.cpg import US_PER_DEG
from .expert.rls import rls_filter_pitch
from .snn.runtime import run_subnet
from .training.dataset import (CPG_AGNOSTIC, PITCH_OFFSET, YAW_OFFSET,
                               controller_features, estimator_features)

SKIP_TICKS = 100


def _rmse(err):
    return float(np.sqrt(np.mean(np.square(err))))


def _rho(pred, target):
    p = pred - pred.mean()
    t = target - target.mean()
    denom = np.sqrt((p * p).sum() * (t * t).sum())
    return float((p * t).sum() / denom) if denom > 0 else 0.0


def evaluate_estimator(subnet, logs, skip=SKIP_TICKS, rls_forgetting=0.95,
                       event_driven=False):
    """RMSE of the estimator subnet against expert attitude estimates."""
    errs = {"roll": [], "pitch_raw": [], "pitch_filtered": [], "yaw_rate": []}
    for log in logs:
        x, _ = estimator_features(log)
        pred = run_subnet(subnet, x, event_driven=event_driven)
        pred_pitch_f = rls_filter_pitch(pred[:, 1], forgetting=rls_forgetting)
        sl = slice(skip, None)
        errs["roll"].append(pred[sl, 0] - log.roll[sl])
        errs["pitch_raw"].append(pred[sl, 1] - log.pitch[sl])
        errs["pitch_filtered"].append(pred_pitch_f[sl]
                                      - log.pitch_filtered[sl])
        errs["yaw_rate"].append(pred[sl, 2] - log.yaw_rate[sl])
    return {f"est_{k}_rmse": _rmse(np.concatenate(v))
            for k, v in errs.items()}


def _controller_targets(log, variant):
    if variant == PITCH_OFFSET:
        return log.offset_pitch[:, None]
    if variant == YAW_OFFSET:
        return log.offset_yaw[:, None]
    return np.stack([log.pwm_left, log.pwm_right], axis=1)


def evaluate_controller(subnet, logs, variant, skip=SKIP_TICKS,
                        event_driven=False):
    """RMSE and temporal correlation of the controller subnet.

    For offset variants the stroke carrier cancels between prediction and
    expert, so the induced servo-pulse RMSE is exactly the offset RMSE
    mapped through the pulse slope (saturation-free regime).
    """
    errors = []
    preds = []
    targets = []
    for log in logs:
        x, _ = controller_features(log, variant)
        pred = run_subnet(subnet, x, event_driven=event_driven)
        target = _controller_targets(log, variant)
        errors.append(pred[skip:] - target[skip:])
        preds.append(pred[skip:])
        targets.append(target[skip:])
    err = np.concatenate(errors)
    pred = np.concatenate(preds)
    target = np.concatenate(targets)
    rho = float(np.mean([_rho(pred[:, o], target[:, o])
                         for o in range(pred.shape[1])]))
    out = {"rho": rho}
    if variant == CPG_AGNOSTIC:
        out["pwm_rmse"] = _rmse(err)
    else:
        out["offset_rmse"] = _rmse(err)
        out["offset_induced_pwm_rmse"] = US_PER_DEG * _rmse(err)
    return out


def evaluate_expert_self(logs, variant, skip=SKIP_TICKS):
    """Expert replayed as its own predictor: zero RMSE by construction."""
    err = []
    for log in logs:
        target = _controller_targets(log, variant)
        err.append(target[skip:] - target[skip:])
    key = "pwm_rmse" if variant == CPG_AGNOSTIC else "offset_rmse"
    return {key: _rmse(np.concatenate(err)), "rho": 1.0}


def evaluate_cascade(spec, logs, skip=SKIP_TICKS):
    """Deployment-style replay: the controller consumes the network's own
    state estimates; references and gyro come from the log."""
    from .snn.runtime import run_sequence
    from .training.dataset import controller_refs

    offs = []
    targets = []
    for log in logs:
        spec.reset()
        imu = np.concatenate([log.gyro, log.accel], axis=1)
        refs = controller_refs(log.theta_ref, log.psi_ref, log.yaw, log.gyro)
        _, ctrl = run_sequence(spec, imu, refs)
        offs.append(ctrl[skip:])
        targets.append(_controller_targets(log, spec.controller_variant)[skip:])
    err = np.concatenate(offs) - np.concatenate(targets)
    key = "pwm_rmse" if spec.controller_variant == CPG_AGNOSTIC \
        else "offset_rmse"
    return {f"cascade_{key}": _rmse(err)}
