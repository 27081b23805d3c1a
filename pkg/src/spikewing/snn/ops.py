"""Single-step operations on layers and plain arrays.

These are the contract-checked building blocks; `runtime` composes them
(through the shared kernels) into the per-tick cascade. All arithmetic is
float32 with ascending-index column accumulation.
"""

import numpy as np

from ..errors import ContractViolation
from . import kernels
from .types import F32


def _as_f32_vec(x, name):
    v = np.ascontiguousarray(x, dtype=F32)
    if v.ndim != 1:
        raise ContractViolation(f"{name} must be a vector")
    return v


def _check_binary(s, name):
    if s.size and not np.all((s == 0.0) | (s == 1.0)):
        raise ContractViolation(f"{name} must be binary (0/1)")


def inject_input(w_in, x):
    """j = W_in @ x: continuous input injected as synaptic current."""
    w_in = np.ascontiguousarray(w_in, dtype=F32)
    x = _as_f32_vec(x, "x")
    if w_in.ndim != 2 or w_in.shape[1] != x.shape[0]:
        raise ContractViolation(
            f"w_in {w_in.shape} incompatible with input length {x.shape[0]}")
    return kernels.mv_analog(w_in, x)


def step_synaptic_current(state, ff_spikes, rec_spikes, injected, layer):
    """i' = alpha*i + W@ff_spikes + W_rec@rec_spikes + injected.

    `ff_spikes` may be empty when the layer input is a continuous signal
    already injected through W_in; `rec_spikes` is empty for feedforward
    layers. When there are no feedforward spikes the injected current takes
    the feedforward slot in the addition order, which keeps this function
    bit-identical to the fused runtime kernel for every layer shape.
    """
    ff = _as_f32_vec(ff_spikes, "ff_spikes")
    rec = _as_f32_vec(rec_spikes, "rec_spikes")
    inj = _as_f32_vec(injected, "injected")
    _check_binary(ff, "ff_spikes")
    _check_binary(rec, "rec_spikes")
    if inj.shape[0] != layer.n:
        raise ContractViolation("injected length != layer width")
    cur = layer.params.alpha * state.syn_current
    if ff.size:
        if ff.shape[0] != layer.w_in.shape[1]:
            raise ContractViolation("ff_spikes length != w_in columns")
        cur = cur + kernels.mv_spike_dense(layer.w_in, ff)
    else:
        cur = cur + inj
    if rec.size:
        if layer.w_rec is None:
            raise ContractViolation("recurrent spikes fed to feedforward layer")
        if rec.shape[0] != layer.n:
            raise ContractViolation("rec_spikes length != layer width")
        cur = cur + kernels.mv_spike_dense(layer.w_rec, rec)
    if ff.size:
        cur = cur + inj
    return cur


def step_membrane(state, layer):
    """v' = beta*v*(1 - s) + i: leak plus hard reset, then current."""
    p = layer.params
    if state.membrane.shape[0] != layer.n:
        raise ContractViolation("state width != layer width")
    return (p.beta * state.membrane) * (F32(1.0) - state.spikes) \
        + state.syn_current


def fire(membrane, theta):
    """Heaviside threshold crossing with H(0) = 1."""
    v = _as_f32_vec(membrane, "membrane")
    th = _as_f32_vec(theta, "theta")
    if v.shape != th.shape:
        raise ContractViolation("membrane/theta length mismatch")
    if np.any(np.isnan(v)):
        raise ContractViolation("NaN membrane potential")
    return (v - th >= F32(0.0)).astype(F32)


def readout(w_out, spikes):
    """y = W_out @ z over a binary spike vector."""
    w_out = np.ascontiguousarray(w_out, dtype=F32)
    z = _as_f32_vec(spikes, "spikes")
    _check_binary(z, "spikes")
    if w_out.shape[1] != z.shape[0]:
        raise ContractViolation("w_out columns != spike vector length")
    return kernels.mv_spike_dense(w_out, z)


def active_set(spikes):
    """Ascending indices j with s_j = 1."""
    z = _as_f32_vec(spikes, "spikes")
    _check_binary(z, "spikes")
    return [int(j) for j in kernels.active_indices(z)]


def event_driven_accumulate(w, active):
    """p[i] = sum over j in `active` of w[i, j], ascending order.

    Bit-identical to the dense product with a binary indicator of `active`.
    """
    w = np.ascontiguousarray(w, dtype=F32)
    idx = np.asarray(active, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= w.shape[1]):
        raise ContractViolation("active index out of range")
    return kernels.mv_spike_event(w, idx)


def step_layer(layer, ff_input, analog, event_driven):
    """Advance one layer a single tick and return its fresh spike vector.

    Order of state use: the membrane update consumes the stored current
    (previous tick), the current update consumes the stored spikes, and the
    new spikes come from the new membrane.
    """
    st = layer.state
    p = layer.params
    if analog:
        ff_acc = kernels.mv_analog(layer.w_in, ff_input)
    elif event_driven:
        ff_acc = kernels.mv_spike_event(layer.w_in,
                                        kernels.active_indices(ff_input))
    else:
        ff_acc = kernels.mv_spike_dense(layer.w_in, ff_input)
    if layer.w_rec is not None:
        if event_driven:
            rec_acc = kernels.mv_spike_event(layer.w_rec,
                                             kernels.active_indices(st.spikes))
        else:
            rec_acc = kernels.mv_spike_dense(layer.w_rec, st.spikes)
    else:
        rec_acc = None
    i_new, v_new, s_new = kernels.lif_update(
        p.alpha, p.beta, p.theta, st.syn_current, st.membrane, st.spikes,
        ff_acc, rec_acc)
    st.syn_current = i_new
    st.membrane = v_new
    st.spikes = s_new
    return s_new


def readout_step(w_out, spikes, event_driven):
    if event_driven:
        return kernels.mv_spike_event(w_out, kernels.active_indices(spikes))
    return kernels.mv_spike_dense(w_out, spikes)
