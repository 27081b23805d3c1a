import copy

import numpy as np
import pytest

from spikewing.snn import kernels
from spikewing.snn.runtime import network_step, reset_state, run_sequence
from spikewing.snn.types import DENSE, EVENT_DRIVEN

from conftest import random_network


def test_quiescence(small_network):
    """Zero state + zero input + positive thresholds -> silence forever."""
    spec = small_network
    for net in (spec.estimator, spec.controller):
        for layer in net.layers:
            layer.params.theta[:] = np.abs(layer.params.theta) + 0.05
    reset_state(spec)
    for _ in range(20):
        s_hat, u = network_step(spec, np.zeros(6), np.zeros(5))
        assert np.all(s_hat == 0.0) and np.all(u == 0.0)
    for net in (spec.estimator, spec.controller):
        for layer in net.layers:
            assert np.all(layer.state.spikes == 0.0)


def test_dense_event_equivalence_sequences():
    """1000-step cascade: both modes bit-identical."""
    rng = np.random.default_rng(7)
    spec = random_network(rng)
    imu = rng.normal(0, 1.0, (1000, 6))
    refs = rng.normal(0, 1.0, (1000, 5))
    spec.mode = DENSE
    reset_state(spec)
    e1, c1 = run_sequence(spec, imu, refs)
    spec.mode = EVENT_DRIVEN
    reset_state(spec)
    e2, c2 = run_sequence(spec, imu, refs)
    assert np.array_equal(e1.view(np.uint32), e2.view(np.uint32))
    assert np.array_equal(c1.view(np.uint32), c2.view(np.uint32))


def test_dense_event_equivalence_many_networks():
    """200 random networks, spike activity spanning sparse to saturated."""
    rng = np.random.default_rng(11)
    for trial in range(200):
        sizes = (int(rng.integers(2, 16)), int(rng.integers(2, 16)))
        ctrl = int(rng.integers(2, 16))
        spec = random_network(rng, est_sizes=sizes, ctrl_size=ctrl)
        # vary thresholds to sweep spike rates between 0 and saturation
        scale = rng.choice([0.01, 0.3, 1.0, 3.0])
        for net in (spec.estimator, spec.controller):
            for layer in net.layers:
                layer.params.theta[:] = layer.params.theta * scale
        imu = rng.normal(0, 1.0, (15, 6))
        refs = rng.normal(0, 1.0, (15, 5))
        spec.mode = DENSE
        reset_state(spec)
        e1, c1, n1 = run_sequence(spec, imu, refs, record_spikes=True)
        spec.mode = EVENT_DRIVEN
        reset_state(spec)
        e2, c2, n2 = run_sequence(spec, imu, refs, record_spikes=True)
        assert np.array_equal(e1.view(np.uint32), e2.view(np.uint32))
        assert np.array_equal(c1.view(np.uint32), c2.view(np.uint32))
        assert np.array_equal(n1, n2)


def test_replay_determinism(small_network, rng):
    spec = small_network
    imu = rng.normal(0, 1.0, (200, 6))
    refs = rng.normal(0, 1.0, (200, 5))
    reset_state(spec)
    first = run_sequence(spec, imu, refs)
    reset_state(spec)
    second = run_sequence(spec, imu, refs)
    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])


def test_reset_mid_sequence_equals_fresh(small_network, rng):
    spec = small_network
    imu = rng.normal(0, 1.0, (100, 6))
    refs = rng.normal(0, 1.0, (100, 5))
    reset_state(spec)
    run_sequence(spec, imu[:40], refs[:40])
    reset_state(spec)
    tail = run_sequence(spec, imu[40:], refs[40:])
    fresh = copy.deepcopy(spec)
    reset_state(fresh)
    expect = run_sequence(fresh, imu[40:], refs[40:])
    assert np.array_equal(tail[0], expect[0])
    assert np.array_equal(tail[1], expect[1])


def test_causality(small_network, rng):
    """Truncating future inputs never changes past outputs."""
    spec = small_network
    imu = rng.normal(0, 1.0, (60, 6))
    refs = rng.normal(0, 1.0, (60, 5))
    reset_state(spec)
    full = run_sequence(spec, imu, refs)
    reset_state(spec)
    part = run_sequence(spec, imu[:30], refs[:30])
    assert np.array_equal(full[0][:30], part[0])
    assert np.array_equal(full[1][:30], part[1])


def test_leak_decay():
    """No spikes, no input: currents decay by alpha, membrane by beta."""
    rng = np.random.default_rng(3)
    spec = random_network(rng)
    layer = spec.estimator.layers[0]
    layer.params.theta[:] = 1e6  # never fire
    reset_state(spec)
    layer.state.syn_current[:] = 1.0
    i_prev = layer.state.syn_current.copy()
    for _ in range(5):
        network_step(spec, np.zeros(6), np.zeros(5))
        assert np.array_equal(layer.state.syn_current,
                              layer.params.alpha * i_prev)
        i_prev = layer.state.syn_current.copy()
    # membrane-only decay: zero current, nonzero potential
    reset_state(spec)
    layer.state.membrane[:] = 1.0
    v_prev = layer.state.membrane.copy()
    for _ in range(5):
        network_step(spec, np.zeros(6), np.zeros(5))
        assert np.array_equal(layer.state.membrane,
                              layer.params.beta * v_prev)
        v_prev = layer.state.membrane.copy()


def test_hard_reset_makes_next_membrane_independent(rng):
    """After a spike, the new membrane equals the stored current alone."""
    spec = random_network(rng)
    layer = spec.controller.layers[0]
    reset_state(spec)
    layer.state.spikes[:] = 1.0
    layer.state.membrane[:] = rng.normal(0, 100.0, layer.n)
    cur = layer.state.syn_current.copy()
    from spikewing.snn.ops import step_membrane

    v_new = step_membrane(layer.state, layer)
    assert np.array_equal(v_new, cur)


def test_spike_binarity(small_network, rng):
    spec = small_network
    reset_state(spec)
    imu = rng.normal(0, 3.0, (50, 6))
    refs = rng.normal(0, 3.0, (50, 5))
    for t in range(50):
        network_step(spec, imu[t], refs[t])
        for net in (spec.estimator, spec.controller):
            for layer in net.layers:
                s = layer.state.spikes
                assert np.all((s == 0.0) | (s == 1.0))


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")
def test_fallback_kernels_bit_identical(rng):
    spec = random_network(rng)
    imu = rng.normal(0, 1.0, (100, 6))
    refs = rng.normal(0, 1.0, (100, 5))
    prior = kernels.using_numba()
    kernels.use_numba(True)
    reset_state(spec)
    with_numba = run_sequence(spec, imu, refs)
    kernels.use_numba(False)
    try:
        reset_state(spec)
        fallback = run_sequence(spec, imu, refs)
    finally:
        kernels.use_numba(prior)
    assert np.array_equal(with_numba[0].view(np.uint32),
                          fallback[0].view(np.uint32))
    assert np.array_equal(with_numba[1].view(np.uint32),
                          fallback[1].view(np.uint32))


def test_equivalence_with_adversarial_weights():
    """Signed zeros, denormals, and huge magnitudes keep both spike paths
    bit-identical (the accumulation-order argument, stress-tested)."""
    from spikewing.snn import kernels
    from spikewing.snn.ops import event_driven_accumulate

    pool = np.array([-0.0, 0.0, 1.0, -1.0, 2.0**-126, -(2.0**-126),
                     2.0**-149, 1e30, -1e30, 3.275, -3.275], dtype=np.float32)
    rng = np.random.default_rng(99)
    for trial in range(300):
        m = int(rng.integers(1, 12))
        n = int(rng.integers(1, 12))
        w = rng.choice(pool, size=(m, n)).astype(np.float32)
        s = (rng.random(n) < rng.choice([0.1, 0.5, 1.0])).astype(np.float32)
        dense = kernels.mv_spike_dense(w, s)
        event = event_driven_accumulate(w, np.flatnonzero(s))
        assert np.array_equal(dense.view(np.uint32), event.view(np.uint32))


def test_equivalence_over_long_sequences(rng):
    """No drift between modes across 10k stateful ticks."""
    spec = random_network(rng, est_sizes=(24, 24), ctrl_size=20)
    imu = rng.normal(0, 1.0, (10000, 6))
    refs = rng.normal(0, 1.0, (10000, 5))
    spec.mode = DENSE
    reset_state(spec)
    e1, c1 = run_sequence(spec, imu, refs)
    spec.mode = EVENT_DRIVEN
    reset_state(spec)
    e2, c2 = run_sequence(spec, imu, refs)
    assert np.array_equal(e1.view(np.uint32), e2.view(np.uint32))
    assert np.array_equal(c1.view(np.uint32), c2.view(np.uint32))
