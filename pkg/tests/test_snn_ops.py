import numpy as np
import pytest

from spikewing.errors import ContractViolation
from spikewing.snn import kernels
from spikewing.snn.ops import (active_set, event_driven_accumulate, fire,
                               inject_input, readout, step_membrane,
                               step_synaptic_current)
from spikewing.snn.types import NeuronParams, SpikingLayer

F32 = np.float32


def make_layer(rng, n, d, recurrent=False):
    return SpikingLayer(
        kind="recurrent" if recurrent else "feedforward",
        w_in=rng.normal(0, 0.5, (n, d)),
        w_rec=rng.normal(0, 0.5, (n, n)) if recurrent else None,
        params=NeuronParams(rng.uniform(0.3, 0.9, n),
                            rng.uniform(0.3, 0.9, n),
                            rng.uniform(0.1, 1.0, n)))


class TestInjectInput:
    def test_identity(self):
        out = inject_input(np.eye(3), [1.0, -2.0, 0.5])
        assert np.array_equal(out, np.array([1.0, -2.0, 0.5], F32))

    def test_zero_matrix(self, rng):
        out = inject_input(np.zeros((4, 3)), rng.normal(size=3))
        assert np.array_equal(out, np.zeros(4, F32))

    def test_against_triple_loop(self, rng):
        w = rng.normal(size=(4, 3)).astype(F32)
        x = rng.normal(size=3).astype(F32)
        expect = np.zeros(4, F32)
        for i in range(4):
            acc = F32(0.0)
            for j in range(3):
                acc += w[i, j] * x[j]
            expect[i] = acc
        assert np.array_equal(inject_input(w, x), expect)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ContractViolation):
            inject_input(np.eye(3), np.zeros(4))


class TestStepSynapticCurrent:
    def test_pure_leak(self, rng):
        layer = make_layer(rng, 1, 1)
        layer.params.alpha[:] = 0.9
        layer.state.syn_current[:] = 1.0
        out = step_synaptic_current(layer.state, np.zeros(1), np.zeros(0),
                                    np.zeros(1), layer)
        assert out[0] == F32(F32(0.9) * F32(1.0))

    def test_single_synapse(self, rng):
        layer = make_layer(rng, 1, 1)
        layer.params.alpha[:] = 0.5
        layer.w_in[:] = 2.0
        out = step_synaptic_current(layer.state, np.ones(1), np.zeros(0),
                                    np.zeros(1), layer)
        assert out[0] == F32(2.0)

    def test_matches_dense_reference(self, rng):
        layer = make_layer(rng, 8, 5, recurrent=True)
        layer.state.syn_current = rng.normal(size=8).astype(F32)
        ff = (rng.random(5) < 0.5).astype(F32)
        rec = (rng.random(8) < 0.5).astype(F32)
        inj = np.zeros(8, F32)
        out = step_synaptic_current(layer.state, ff, rec, inj, layer)
        expect = (layer.params.alpha * layer.state.syn_current
                  + kernels.mv_spike_dense(layer.w_in, ff))
        expect = expect + kernels.mv_spike_dense(layer.w_rec, rec)
        expect = expect + inj
        assert np.array_equal(out, expect)

    def test_rejects_non_binary(self, rng):
        layer = make_layer(rng, 2, 2)
        with pytest.raises(ContractViolation):
            step_synaptic_current(layer.state, np.array([0.5, 0.0]),
                                  np.zeros(0), np.zeros(2), layer)


class TestStepMembrane:
    def test_leak_no_spike(self, rng):
        layer = make_layer(rng, 1, 1)
        layer.params.beta[:] = 0.8
        layer.state.membrane[:] = 1.0
        layer.state.syn_current[:] = 0.1
        out = step_membrane(layer.state, layer)
        assert out[0] == pytest.approx(0.9, abs=1e-7)

    def test_hard_reset(self, rng):
        layer = make_layer(rng, 1, 1)
        layer.params.beta[:] = 0.8
        layer.state.membrane[:] = 1.0
        layer.state.spikes[:] = 1.0
        layer.state.syn_current[:] = 0.1
        out = step_membrane(layer.state, layer)
        assert out[0] == F32(0.1)

    def test_elementwise_reference(self, rng):
        layer = make_layer(rng, 16, 3)
        st = layer.state
        st.membrane = rng.normal(size=16).astype(F32)
        st.syn_current = rng.normal(size=16).astype(F32)
        st.spikes = (rng.random(16) < 0.4).astype(F32)
        out = step_membrane(st, layer)
        for i in range(16):
            expect = (layer.params.beta[i] * st.membrane[i]) \
                * (F32(1.0) - st.spikes[i]) + st.syn_current[i]
            assert out[i] == expect


class TestFire:
    def test_above(self):
        assert fire([1.2], [1.0])[0] == 1.0

    def test_below(self):
        assert fire([0.99], [1.0])[0] == 0.0

    def test_boundary_fires(self):
        assert fire([1.0], [1.0])[0] == 1.0

    def test_nan_rejected(self):
        with pytest.raises(ContractViolation):
            fire([np.nan], [1.0])


class TestReadout:
    def test_zero_spikes(self, rng):
        w = rng.normal(size=(3, 6)).astype(F32)
        assert np.array_equal(readout(w, np.zeros(6)), np.zeros(3, F32))

    def test_one_hot_selects_column(self, rng):
        w = rng.normal(size=(3, 6)).astype(F32)
        z = np.zeros(6, F32)
        z[4] = 1.0
        assert np.array_equal(readout(w, z), w[:, 4])

    def test_dense_oracle(self, rng):
        w = rng.normal(size=(4, 10)).astype(F32)
        z = (rng.random(10) < 0.5).astype(F32)
        assert np.array_equal(readout(w, z), kernels.mv_spike_dense(w, z))


class TestActiveSet:
    def test_examples(self):
        assert active_set([0.0, 1.0, 0.0, 1.0]) == [1, 3]
        assert active_set(np.zeros(4)) == []
        assert active_set(np.ones(5)) == [0, 1, 2, 3, 4]


class TestEventDrivenAccumulate:
    def test_empty(self, rng):
        w = rng.normal(size=(3, 4)).astype(F32)
        assert np.array_equal(event_driven_accumulate(w, []),
                              np.zeros(3, F32))

    def test_single_column(self, rng):
        w = rng.normal(size=(3, 4)).astype(F32)
        assert np.array_equal(event_driven_accumulate(w, [2]), w[:, 2])

    def test_out_of_range(self, rng):
        with pytest.raises(ContractViolation):
            event_driven_accumulate(np.zeros((2, 2), F32), [2])

    @pytest.mark.parametrize("rate", [0.01, 0.1, 0.5, 1.0])
    def test_bit_identical_to_dense(self, rate):
        rng = np.random.default_rng(int(rate * 1000))
        for trial in range(200):
            m = int(rng.integers(1, 30))
            n = int(rng.integers(1, 30))
            w = rng.normal(size=(m, n)).astype(F32)
            s = (rng.random(n) < rate).astype(F32)
            dense = kernels.mv_spike_dense(w, s)
            event = event_driven_accumulate(w, np.flatnonzero(s))
            assert np.array_equal(dense.view(np.uint32),
                                  event.view(np.uint32))
