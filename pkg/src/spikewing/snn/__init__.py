from .types import (
    NeuronParams,
    LayerState,
    SpikingLayer,
    Readout,
    SpikingNet,
    NetworkSpec,
    DENSE,
    EVENT_DRIVEN,
)
from .ops import (
    inject_input,
    step_synaptic_current,
    step_membrane,
    fire,
    readout,
    active_set,
    event_driven_accumulate,
)
from .runtime import network_step, reset_state, run_sequence, run_subnet
from .serialize import save_network, load_network, spec_hash

__all__ = [
    "NeuronParams", "LayerState", "SpikingLayer", "Readout", "SpikingNet",
    "NetworkSpec", "DENSE", "EVENT_DRIVEN",
    "inject_input", "step_synaptic_current", "step_membrane", "fire",
    "readout", "active_set", "event_driven_accumulate",
    "network_step", "reset_state", "run_sequence", "run_subnet",
    "save_network", "load_network", "spec_hash",
]
