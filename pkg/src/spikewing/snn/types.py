"""Network description types for the float32 runtime.

A `NetworkSpec` is the unit that training produces and that inference,
export, and benchmarking consume: an estimator subnet (feedforward spiking
layer, recurrent spiking layer, linear readout) cascaded into a controller
subnet (recurrent spiking layer, linear readout), plus fixed channel-wise
input/output scale vectors for each subnet. Everything is bias-free.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation

F32 = np.float32

FEEDFORWARD = "feedforward"
RECURRENT = "recurrent"
DENSE = "dense"
EVENT_DRIVEN = "event_driven"

PITCH_OFFSET = "pitch_offset"
YAW_OFFSET = "yaw_offset"
CPG_AGNOSTIC = "cpg_agnostic"
CONTROLLER_VARIANTS = (PITCH_OFFSET, YAW_OFFSET, CPG_AGNOSTIC)

LEAK_MIN = 1e-4
LEAK_MAX = 1.0 - 1e-4


def _f32(a):
    return np.ascontiguousarray(a, dtype=F32)


@dataclass
class NeuronParams:
    """Per-neuron leak factors and firing thresholds.

    alpha: synaptic-current leak, each entry in (0, 1)
    beta:  membrane leak, each entry in (0, 1)
    theta: firing threshold, any finite value (learned)
    """

    alpha: np.ndarray
    beta: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        self.alpha = _f32(self.alpha)
        self.beta = _f32(self.beta)
        self.theta = _f32(self.theta)
        if not (self.alpha.shape == self.beta.shape == self.theta.shape):
            raise ContractViolation("neuron parameter vectors differ in length")
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if np.any(v <= 0.0) or np.any(v >= 1.0):
                raise ContractViolation(f"{name} must lie in (0, 1)")
        if not np.all(np.isfinite(self.theta)):
            raise ContractViolation("theta must be finite")

    @property
    def n(self):
        return self.alpha.shape[0]


@dataclass
class LayerState:
    """Synaptic currents, membrane potentials, and binary spike flags."""

    syn_current: np.ndarray
    membrane: np.ndarray
    spikes: np.ndarray

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n, F32), np.zeros(n, F32), np.zeros(n, F32))

    def reset(self):
        self.syn_current[:] = 0.0
        self.membrane[:] = 0.0
        self.spikes[:] = 0.0

    def copy(self):
        return LayerState(self.syn_current.copy(), self.membrane.copy(),
                          self.spikes.copy())


@dataclass
class SpikingLayer:
    """One spiking layer: input projection, optional recurrence, state.

    `w_in` projects the layer input (continuous signals for the first layer
    of a subnet, the upstream spike vector otherwise). `w_rec` is present
    exactly when kind == "recurrent". No additive biases anywhere.
    """

    kind: str
    w_in: np.ndarray
    params: NeuronParams
    w_rec: np.ndarray | None = None
    state: LayerState = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.w_in = _f32(self.w_in)
        n = self.w_in.shape[0]
        if self.kind not in (FEEDFORWARD, RECURRENT):
            raise ContractViolation(f"unknown layer kind {self.kind!r}")
        if (self.w_rec is not None) != (self.kind == RECURRENT):
            raise ContractViolation("w_rec present iff kind == recurrent")
        if self.w_rec is not None:
            self.w_rec = _f32(self.w_rec)
            if self.w_rec.shape != (n, n):
                raise ContractViolation("w_rec must be square N x N")
        if self.params.n != n:
            raise ContractViolation("neuron parameter length != layer width")
        if self.state is None:
            self.state = LayerState.zeros(n)

    @property
    def n(self):
        return self.w_in.shape[0]

    @property
    def d_in(self):
        return self.w_in.shape[1]


@dataclass
class Readout:
    """Bias-free linear map from the final spike vector to outputs."""

    w_out: np.ndarray

    def __post_init__(self):
        self.w_out = _f32(self.w_out)

    @property
    def n_out(self):
        return self.w_out.shape[0]

    @property
    def n_in(self):
        return self.w_out.shape[1]


@dataclass
class SpikingNet:
    """A trainable/executable subnet: spiking layers plus a readout.

    The first layer receives the scaled continuous input; each later layer
    receives the previous layer's fresh spike vector. `input_scale` and
    `output_scale` are the fixed channel-wise factors: scaled = c * raw,
    physical = scaled_output / c_out.
    """

    layers: list
    readout: Readout
    input_scale: np.ndarray
    output_scale: np.ndarray

    def __post_init__(self):
        self.input_scale = _f32(self.input_scale)
        self.output_scale = _f32(self.output_scale)
        if self.input_scale.shape[0] != self.layers[0].d_in:
            raise ContractViolation("input_scale length != first layer input")
        if self.output_scale.shape[0] != self.readout.n_out:
            raise ContractViolation("output_scale length != readout rows")
        if self.readout.n_in != self.layers[-1].n:
            raise ContractViolation("readout columns != last layer width")
        for up, down in zip(self.layers, self.layers[1:]):
            if down.d_in != up.n:
                raise ContractViolation("layer widths do not chain")
        if np.any(self.input_scale == 0.0) or np.any(self.output_scale == 0.0):
            raise ContractViolation("scale vectors must be nonzero")

    @property
    def d_in(self):
        return self.layers[0].d_in

    @property
    def d_out(self):
        return self.readout.n_out

    def reset(self):
        for layer in self.layers:
            layer.state.reset()


@dataclass
class NetworkSpec:
    """Cascaded estimator -> controller network plus execution mode."""

    estimator: SpikingNet
    controller: SpikingNet
    mode: str = DENSE
    controller_variant: str = PITCH_OFFSET

    def __post_init__(self):
        if self.mode not in (DENSE, EVENT_DRIVEN):
            raise ContractViolation(f"unknown mode {self.mode!r}")
        if self.controller_variant not in CONTROLLER_VARIANTS:
            raise ContractViolation(
                f"unknown controller variant {self.controller_variant!r}")
        d_s = self.estimator.d_out
        if self.controller.d_in <= d_s:
            raise ContractViolation(
                "controller input must be refs/measurements + estimate")

    @property
    def d_imu(self):
        return self.estimator.d_in

    @property
    def d_refs(self):
        return self.controller.d_in - self.estimator.d_out

    def reset(self):
        self.estimator.reset()
        self.controller.reset()


def default_estimator_sizes():
    return (150, 150)


def default_controller_size():
    return 130
