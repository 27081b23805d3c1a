"""Mini-batch training loop shared by the spiking and rectifier networks.

Window order is reshuffled each epoch from the run seed; recurrent state is
zero at every window start; gradient reduction uses fixed summation order,
so a given seed reproduces the loss history bit-for-bit. A non-finite loss
aborts the run and keeps the last finite-loss parameters.
"""

import csv
from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation
from ..snn.types import NeuronParams, Readout, SpikingLayer, SpikingNet
from .bptt import TrainableSpikingNet
from .losses import (loss_controller, loss_controller_grad, loss_estimator,
                     loss_estimator_grad, pearson)
from .optim import Adam

ESTIMATOR = "estimator"
CONTROLLER = "controller"


@dataclass
class TrainConfig:
    window_len: int = 2500
    stride: int = 400
    burn_in: int = 100
    huber_delta: float = 1.0
    corr_weight: float = 0.5
    kappa: float = 5.0
    learning_rate: float = 5e-3
    epochs: int = 20
    batch_size: int = 8
    seed: int = 0
    grad_clip: float = 1.0

    def __post_init__(self):
        if not (0 <= self.burn_in < self.window_len):
            raise ContractViolation("burn_in must be below window_len")
        if self.stride > self.window_len:
            raise ContractViolation("stride must not exceed window_len")
        if self.huber_delta <= 0 or self.corr_weight < 0 or self.kappa <= 0:
            raise ContractViolation("bad loss constants")


@dataclass
class TrainResult:
    net: object
    history: list
    diverged: bool = False

    @property
    def final_loss(self):
        return self.history[-1]["train_loss"] if self.history else None


def _loss_fns(role):
    if role == ESTIMATOR:
        return loss_estimator, loss_estimator_grad
    if role == CONTROLLER:
        return loss_controller, loss_controller_grad
    raise ContractViolation(f"unknown training role {role!r}")


def _clip_grads(grads, max_norm):
    if max_norm is None or max_norm <= 0:
        return
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if total > max_norm:
        factor = max_norm / total
        for g in grads.values():
            g *= factor


def _snapshot(net):
    return {k: v.copy() for k, v in net.params().items()}


def _restore(net, snap):
    for k, v in net.params().items():
        v[:] = snap[k]


def _eval_loss(net, dataset, cfg, loss_fn, batch_size):
    total = 0.0
    rho_num = 0.0
    count = 0
    for start in range(0, dataset.n_windows, batch_size):
        xb = dataset.x[start:start + batch_size].transpose(1, 0, 2)
        yb = dataset.y[start:start + batch_size].transpose(1, 0, 2)
        _, pred = net.forward_trace(xb)
        b = xb.shape[1]
        total += loss_fn(pred, yb, cfg) * b
        rho_num += pearson(pred, yb) * b
        count += b
    return total / count, rho_num / count


def train(net, dataset, cfg, role, val_dataset=None, log_path=None):
    """Fit `net` (spiking or rectifier) on a ScaledDataset.

    Returns a TrainResult with per-epoch train/validation losses and the
    validation-sequence correlation.
    """
    if dataset.n_windows == 0:
        raise ContractViolation("empty dataset")
    if isinstance(net, TrainableSpikingNet):
        net.kappa = cfg.kappa
    loss_fn, grad_fn = _loss_fns(role)
    opt = Adam(learning_rate=cfg.learning_rate)
    rng = np.random.default_rng(cfg.seed)
    history = []
    last_good = _snapshot(net)
    diverged = False
    for epoch in range(cfg.epochs):
        order = rng.permutation(dataset.n_windows)
        epoch_loss = 0.0
        seen = 0
        for start in range(0, len(order), cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            xb = dataset.x[idx].transpose(1, 0, 2)
            yb = dataset.y[idx].transpose(1, 0, 2)
            trace, pred = net.forward_trace(xb)
            loss, d_y = grad_fn(pred, yb, cfg)
            if not np.isfinite(loss):
                diverged = True
                break
            grads = net.backward(trace, d_y)
            _clip_grads(grads, cfg.grad_clip)
            opt.step(net.params(), grads)
            net.clamp()
            epoch_loss += loss * len(idx)
            seen += len(idx)
        if diverged:
            _restore(net, last_good)
            break
        last_good = _snapshot(net)
        row = {"epoch": epoch, "train_loss": epoch_loss / max(seen, 1)}
        if val_dataset is not None:
            val_loss, rho = _eval_loss(net, val_dataset, cfg, loss_fn,
                                       cfg.batch_size)
            row["val_loss"] = val_loss
            row["rho"] = rho
        else:
            row["val_loss"] = float("nan")
            row["rho"] = float("nan")
        history.append(row)
    if log_path is not None:
        with open(log_path, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["epoch", "train_loss", "val_loss", "rho"])
            writer.writeheader()
            writer.writerows(history)
    return TrainResult(net=net, history=history, diverged=diverged)


def to_runtime_subnet(net, input_scale, output_scale):
    """Cast a trained float64 spiking net into the float32 runtime form."""
    layers = []
    for l in net.layers:
        layers.append(SpikingLayer(
            kind=l.kind, w_in=l.w_in, w_rec=l.w_rec,
            params=NeuronParams(l.alpha, l.beta, l.theta)))
    return SpikingNet(layers=layers, readout=Readout(net.w_out),
                      input_scale=np.asarray(input_scale),
                      output_scale=np.asarray(output_scale))


def to_runtime_ann(net, input_scale, output_scale):
    from ..snn.runtime import AnnNet
    specs = [(l.w_in, l.w_rec) for l in net.layers]
    return AnnNet(specs, net.w_out, input_scale, output_scale)
