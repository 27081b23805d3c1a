"""Exact multiply-accumulate accounting per inference tick.

Dense-input projections (continuous signals) cost rows*cols every tick in
every variant. Spike-mediated projections cost rows*cols per tick in dense
mode and active_spikes*rows per tick in event-driven mode; the counts come
from the recorded spike trains, so the identity

    event_spike_macs == mean_rate * dense_spike_macs

holds exactly with the MAC-weighted mean rate.
"""

import copy
from dataclasses import dataclass

import numpy as np

from ..snn.runtime import run_sequence


@dataclass
class MacCounts:
    ticks: int
    analog_macs: int
    dense_spike_macs: int
    event_spike_macs: int
    ann_macs: int
    layer_spike_rates: list
    mac_weighted_rate: float

    @property
    def dense_total(self):
        return self.analog_macs + self.dense_spike_macs

    @property
    def event_total(self):
        return self.analog_macs + self.event_spike_macs


def _spike_matrices(spec):
    """(source_count_column, rows, use_prev_tick) per spike-mediated matrix.

    Count columns: estimator layers first, then controller layers, matching
    run_sequence's spike-count recording order.
    """
    mats = []
    col = 0
    for net in (spec.estimator, spec.controller):
        for li, layer in enumerate(net.layers):
            if li > 0:
                # feedforward spike input from the upstream layer, same tick
                mats.append((col - 1, layer.n, False))
            if layer.w_rec is not None:
                mats.append((col, layer.n, True))
            col += 1
        mats.append((col - 1, net.readout.n_out, False))
    return mats


def spike_macs_from_counts(spec, counts, prev0=None):
    """Dense and event-driven spike-mediated MACs from recorded counts.

    counts: (T, n_spike_layers) per-tick spike counts in runtime order.
    prev0: spike counts feeding the recurrent matrices on the first tick
    (zeros after a reset; pass layer widths to model saturated history).
    """
    counts = np.asarray(counts, dtype=np.int64)
    ticks = counts.shape[0]
    widths = _all_widths(spec)
    if prev0 is None:
        prev0 = np.zeros(len(widths), dtype=np.int64)
    dense_spike = 0
    event_spike = 0
    for col, rows, use_prev in _spike_matrices(spec):
        src = counts[:, col]
        if use_prev:
            src = np.concatenate([[prev0[col]], src[:-1]])
        dense_spike += ticks * rows * widths[col]
        event_spike += int(src.sum()) * rows
    return int(dense_spike), int(event_spike)


def count_macs(spec, imu_seq, refs_seq):
    """Run the network once (event trace) and account all three variants."""
    spec = copy.deepcopy(spec)
    spec.reset()
    _, _, counts = run_sequence(spec, imu_seq, refs_seq, record_spikes=True)
    ticks = counts.shape[0]

    analog = ticks * (spec.estimator.layers[0].n * spec.estimator.d_in
                      + spec.controller.layers[0].n * spec.controller.d_in)

    dense_spike, event_spike = spike_macs_from_counts(spec, counts)

    ann = analog
    for net in (spec.estimator, spec.controller):
        prev = net.d_in
        for li, layer in enumerate(net.layers):
            if li > 0:
                ann += ticks * layer.n * prev
            if layer.w_rec is not None:
                ann += ticks * layer.n * layer.n
            prev = layer.n
        ann += ticks * net.readout.n_out * prev
    # the analog term already covers each subnet's first-layer input matrix

    widths = _all_widths(spec)
    rates = [float(counts[:, i].mean()) / widths[i]
             for i in range(len(widths))]
    weighted = event_spike / dense_spike if dense_spike else 0.0
    return MacCounts(ticks=ticks, analog_macs=int(analog),
                     dense_spike_macs=int(dense_spike),
                     event_spike_macs=int(event_spike), ann_macs=int(ann),
                     layer_spike_rates=rates,
                     mac_weighted_rate=float(weighted))


def _all_widths(spec):
    widths = []
    for net in (spec.estimator, spec.controller):
        widths += [layer.n for layer in net.layers]
    return widths


def _layer_width(spec, col):
    return _all_widths(spec)[col]
