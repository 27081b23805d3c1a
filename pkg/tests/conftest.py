import os

import numpy as np
import pytest

from spikewing.snn import kernels
from spikewing.snn.types import (NetworkSpec, NeuronParams, Readout,
                                 SpikingLayer, SpikingNet)

# SPIKEWING_NO_NUMBA=1 runs the whole suite on the pure-numpy kernel
# fallback (the paths a numba-less install would take).
if os.environ.get("SPIKEWING_NO_NUMBA") == "1":
    kernels.use_numba(False)


def random_subnet(rng, d_in, sizes, kinds, d_out, w_scale=0.4):
    layers = []
    fan = d_in
    for kind, n in zip(kinds, sizes):
        w_rec = rng.normal(0, w_scale / np.sqrt(n), (n, n)) \
            if kind == "recurrent" else None
        layers.append(SpikingLayer(
            kind=kind,
            w_in=rng.normal(0, 2.0 * w_scale / np.sqrt(fan), (n, fan)),
            w_rec=w_rec,
            params=NeuronParams(rng.uniform(0.4, 0.9, n),
                                rng.uniform(0.4, 0.9, n),
                                rng.uniform(0.2, 0.9, n))))
        fan = n
    return SpikingNet(layers=layers,
                      readout=Readout(rng.normal(0, 0.5, (d_out, fan))),
                      input_scale=rng.uniform(0.5, 2.0, d_in),
                      output_scale=rng.uniform(0.5, 2.0, d_out))


def random_network(rng, est_sizes=(10, 12), ctrl_size=8, d_refs=5, k=1):
    est = random_subnet(rng, 6, est_sizes, ("feedforward", "recurrent"), 3)
    ctrl = random_subnet(rng, d_refs + 3, (ctrl_size,), ("recurrent",), k)
    return NetworkSpec(estimator=est, controller=ctrl)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_network(rng):
    return random_network(rng)
