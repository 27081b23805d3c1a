"""Per-tick execution of the cascaded network.

Each call advances every layer exactly once (the 100 Hz contract): the
estimator consumes the scaled six-axis inertial sample, its readout is
unscaled to physical units, concatenated with the reference/measurement
vector, rescaled, and fed to the controller within the same tick. A single
network instance is stateful and single-threaded; independent instances are
fully isolated.
"""

import numpy as np

from ..errors import ContractViolation
from . import kernels
from .ops import readout_step, step_layer
from .types import EVENT_DRIVEN, F32


def reset_state(spec):
    """Zero every layer's currents, potentials, and spike flags."""
    spec.reset()


def _subnet_step(net, x_raw, event_driven, counts=None):
    x = net.input_scale * np.ascontiguousarray(x_raw, dtype=F32)
    inp = x
    analog = True
    for li, layer in enumerate(net.layers):
        inp = step_layer(layer, inp, analog, event_driven)
        if counts is not None:
            counts[li] = int(inp.sum())
        analog = False
    y = readout_step(net.readout.w_out, inp, event_driven)
    return y / net.output_scale, inp


def network_step(spec, imu, refs_meas):
    """One tick: physical inputs in, physical estimate and command out."""
    imu = np.ascontiguousarray(imu, dtype=F32)
    refs = np.ascontiguousarray(refs_meas, dtype=F32)
    if imu.shape[0] != spec.estimator.d_in:
        raise ContractViolation("imu length != estimator input dimension")
    if refs.shape[0] != spec.d_refs:
        raise ContractViolation("refs/measurements length mismatch")
    ev = spec.mode == EVENT_DRIVEN
    s_hat, _ = _subnet_step(spec.estimator, imu, ev)
    x_ctrl = np.concatenate([refs, s_hat])
    u, _ = _subnet_step(spec.controller, x_ctrl, ev)
    return s_hat, u


def run_sequence(spec, imu_seq, refs_seq, record_spikes=False):
    """Drive the cascade over aligned input sequences.

    Returns (estimates T x 3, commands T x k) and, when requested, the
    per-tick spike counts for each spiking layer (estimator layers first).
    State is NOT reset here; callers own the reset policy.
    """
    imu_seq = np.asarray(imu_seq, dtype=F32)
    refs_seq = np.asarray(refs_seq, dtype=F32)
    t_len = imu_seq.shape[0]
    if refs_seq.shape[0] != t_len:
        raise ContractViolation("imu/refs sequence lengths differ")
    ev = spec.mode == EVENT_DRIVEN
    n_layers = len(spec.estimator.layers) + len(spec.controller.layers)
    est_out = np.empty((t_len, spec.estimator.d_out), dtype=F32)
    ctrl_out = np.empty((t_len, spec.controller.d_out), dtype=F32)
    counts = np.zeros((t_len, n_layers), dtype=np.int64) if record_spikes else None
    n_est = len(spec.estimator.layers)
    for t in range(t_len):
        if record_spikes:
            s_hat, _ = _subnet_step(spec.estimator, imu_seq[t], ev,
                                    counts[t, :n_est])
            x_ctrl = np.concatenate([refs_seq[t], s_hat])
            u, _ = _subnet_step(spec.controller, x_ctrl, ev,
                                counts[t, n_est:])
        else:
            s_hat, _ = _subnet_step(spec.estimator, imu_seq[t], ev)
            x_ctrl = np.concatenate([refs_seq[t], s_hat])
            u, _ = _subnet_step(spec.controller, x_ctrl, ev)
        est_out[t] = s_hat
        ctrl_out[t] = u
    if record_spikes:
        return est_out, ctrl_out, counts
    return est_out, ctrl_out


def run_subnet(net, x_seq, event_driven=False, reset=True):
    """Run a single subnet over a raw input sequence (physical units)."""
    x_seq = np.asarray(x_seq, dtype=F32)
    if reset:
        net.reset()
    out = np.empty((x_seq.shape[0], net.d_out), dtype=F32)
    for t in range(x_seq.shape[0]):
        out[t], _ = _subnet_step(net, x_seq[t], event_driven)
    return out


class AnnNet:
    """Bias-free recurrent rectifier network mirroring a spiking subnet.

    layer_specs: list of (w_in, w_rec-or-None); hidden update
    h' = max(0, W_in p + W_rec h), readout y = W_out h.
    """

    def __init__(self, layer_specs, w_out, input_scale, output_scale):
        self.layers = [(np.ascontiguousarray(w, dtype=F32),
                        None if wr is None else np.ascontiguousarray(wr, dtype=F32))
                       for w, wr in layer_specs]
        self.w_out = np.ascontiguousarray(w_out, dtype=F32)
        self.input_scale = np.ascontiguousarray(input_scale, dtype=F32)
        self.output_scale = np.ascontiguousarray(output_scale, dtype=F32)
        self.hidden = [np.zeros(w.shape[0], dtype=F32) for w, _ in self.layers]

    @property
    def d_in(self):
        return self.layers[0][0].shape[1]

    @property
    def d_out(self):
        return self.w_out.shape[0]

    def reset(self):
        for h in self.hidden:
            h[:] = 0.0

    def step(self, x_raw):
        x = self.input_scale * np.ascontiguousarray(x_raw, dtype=F32)
        inp = x
        for li, (w_in, w_rec) in enumerate(self.layers):
            h = kernels.relu_recurrent_update(w_in, w_rec, inp,
                                              self.hidden[li])
            self.hidden[li] = h
            inp = h
        y = kernels.mv_analog(self.w_out, inp)
        return y / self.output_scale
