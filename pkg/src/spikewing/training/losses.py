"""Supervised objectives for imitation training.

Estimator: mean elementwise Huber loss with the first `burn_in` timesteps
excluded (recurrent-state initialization transient). Controller: mean Huber
over the full sequence plus a weighted (1 - Pearson) term, correlation taken
over time per channel and batch element, averaged.

Sequence tensors are time-major: (T, B, O).
"""

import numpy as np

from ..errors import ContractViolation

# A channel whose centered energy falls below this is treated as constant;
# its correlation contribution (and gradient) is zero instead of NaN.
VAR_FLOOR = 1e-18


def huber(error, delta):
    """0.5*e^2 inside |e| <= delta, linear with matched value outside."""
    if delta <= 0.0:
        raise ContractViolation("delta must be positive")
    e = np.asarray(error, dtype=np.float64)
    out = np.where(np.abs(e) <= delta,
                   0.5 * e * e,
                   delta * np.abs(e) - 0.5 * delta * delta)
    return out if out.ndim else float(out)


def _huber_grad(error, delta):
    e = np.asarray(error, dtype=np.float64)
    return np.where(np.abs(e) <= delta, e, delta * np.sign(e))


def _check_seq(pred, target):
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape or pred.ndim != 3:
        raise ContractViolation("expected matching (T, B, O) sequences")
    return pred, target


def pearson(pred, target):
    """Mean temporal Pearson correlation over batch and channels."""
    pred, target = _check_seq(pred, target)
    if pred.shape[0] < 2:
        raise ContractViolation("need at least two timesteps")
    p = pred - pred.mean(axis=0)
    y = target - target.mean(axis=0)
    sp = (p * p).sum(axis=0)
    sy = (y * y).sum(axis=0)
    sxy = (p * y).sum(axis=0)
    valid = (sp > VAR_FLOOR) & (sy > VAR_FLOOR)
    rho = np.zeros_like(sp)
    rho[valid] = sxy[valid] / np.sqrt(sp[valid] * sy[valid])
    return float(rho.mean())


def _pearson_grad(pred, target):
    """d(mean rho)/d(pred); zero on degenerate channels."""
    p = pred - pred.mean(axis=0)
    y = target - target.mean(axis=0)
    sp = (p * p).sum(axis=0)
    sy = (y * y).sum(axis=0)
    sxy = (p * y).sum(axis=0)
    valid = (sp > VAR_FLOOR) & (sy > VAR_FLOOR)
    inv = np.zeros_like(sp)
    inv[valid] = 1.0 / np.sqrt(sp[valid] * sy[valid])
    ratio = np.zeros_like(sp)
    ratio[valid] = sxy[valid] / sp[valid]
    # d rho_bo / d p[t,b,o] = (y~ - (sxy/sp) p~) / sqrt(sp*sy); the mean over
    # (b, o) contributes 1/(B*O). Centering terms cancel because sum(y~) = 0.
    n_bo = pred.shape[1] * pred.shape[2]
    return (y - ratio[None] * p) * inv[None] / n_bo


def loss_estimator(pred, target, cfg):
    """Burn-in-excluded mean Huber loss."""
    pred, target = _check_seq(pred, target)
    if pred.shape[0] <= cfg.burn_in:
        raise ContractViolation("sequence not longer than burn-in")
    e = pred[cfg.burn_in:] - target[cfg.burn_in:]
    return float(np.mean(huber(e, cfg.huber_delta)))


def loss_estimator_grad(pred, target, cfg):
    pred, target = _check_seq(pred, target)
    if pred.shape[0] <= cfg.burn_in:
        raise ContractViolation("sequence not longer than burn-in")
    grad = np.zeros_like(pred)
    sel = slice(cfg.burn_in, None)
    count = pred[sel].size
    grad[sel] = _huber_grad(pred[sel] - target[sel], cfg.huber_delta) / count
    loss = float(np.mean(huber(pred[sel] - target[sel], cfg.huber_delta)))
    return loss, grad


def loss_controller(pred, target, cfg):
    """Full-sequence mean Huber plus corr_weight * (1 - mean Pearson)."""
    pred, target = _check_seq(pred, target)
    h = float(np.mean(huber(pred - target, cfg.huber_delta)))
    return h + cfg.corr_weight * (1.0 - pearson(pred, target))


def loss_controller_grad(pred, target, cfg):
    pred, target = _check_seq(pred, target)
    e = pred - target
    h = float(np.mean(huber(e, cfg.huber_delta)))
    grad = _huber_grad(e, cfg.huber_delta) / pred.size
    rho_grad = _pearson_grad(pred, target)
    p = pred - pred.mean(axis=0)
    y = target - target.mean(axis=0)
    sp = (p * p).sum(axis=0)
    sy = (y * y).sum(axis=0)
    sxy = (p * y).sum(axis=0)
    valid = (sp > VAR_FLOOR) & (sy > VAR_FLOOR)
    rho = np.zeros_like(sp)
    rho[valid] = sxy[valid] / np.sqrt(sp[valid] * sy[valid])
    loss = h + cfg.corr_weight * (1.0 - float(rho.mean()))
    grad = grad - cfg.corr_weight * rho_grad
    return loss, grad
