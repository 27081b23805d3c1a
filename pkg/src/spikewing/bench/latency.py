"""Per-tick wall-clock latency measurement.

Every variant is driven over the identical input sequence from identical
(reset) state; per-tick samples are taken with the monotonic ns counter,
warmup repetitions are discarded, and the median/p95 summarize the rest.
MAC counts and outputs are bit-reproducible; only wall-clock fields vary
between runs. Repetitions run sequentially on one thread.
"""

import copy
import csv
import time
from dataclasses import dataclass, field

import numpy as np

from ..snn.runtime import network_step, run_sequence
from ..snn.types import DENSE, EVENT_DRIVEN


@dataclass
class VariantResult:
    name: str
    median_ns: float
    p95_ns: float
    ticks: int
    repetitions: int
    noisy: bool


@dataclass
class BenchReport:
    variants: dict
    sequence_id: str = ""
    mac_counts: object = None
    layer_spike_rates: list = field(default_factory=list)

    def variant(self, name):
        return self.variants[name]


def _time_spec(spec, imu_seq, refs_seq, reps, warmup):
    ticks = imu_seq.shape[0]
    samples = np.empty((reps, ticks), dtype=np.int64)
    for rep in range(warmup + reps):
        spec.reset()
        record = rep >= warmup
        for t in range(ticks):
            t0 = time.perf_counter_ns()
            network_step(spec, imu_seq[t], refs_seq[t])
            t1 = time.perf_counter_ns()
            if record:
                samples[rep - warmup, t] = t1 - t0
    return samples.ravel()


def _time_ann(ann, imu_seq, refs_seq, reps, warmup):
    ticks = imu_seq.shape[0]
    samples = np.empty((reps, ticks), dtype=np.int64)
    for rep in range(warmup + reps):
        ann.reset()
        record = rep >= warmup
        for t in range(ticks):
            t0 = time.perf_counter_ns()
            ann.step(imu_seq[t], refs_seq[t])
            t1 = time.perf_counter_ns()
            if record:
                samples[rep - warmup, t] = t1 - t0
    return samples.ravel()


def _summary(name, samples, ticks, reps, noise_threshold):
    med = float(np.median(samples))
    p95 = float(np.percentile(samples, 95))
    noisy = bool(p95 > noise_threshold * med)
    return VariantResult(name=name, median_ns=med, p95_ns=p95, ticks=ticks,
                         repetitions=reps, noisy=noisy)


def bench_latency(spec, imu_seq, refs_seq, ann_cascade=None, repetitions=30,
                  warmup=3, noise_threshold=5.0, sequence_id=""):
    """Measure dense SNN, event-driven SNN, and optionally the ANN.

    Outputs of the timed runs are re-checked against an untimed pass so
    instrumentation cannot mask a behavior change. Requires >= 30
    repetitions for stable medians.
    """
    if repetitions < 30:
        raise ValueError("need at least 30 repetitions")
    imu_seq = np.asarray(imu_seq, dtype=np.float32)
    refs_seq = np.asarray(refs_seq, dtype=np.float32)
    ticks = imu_seq.shape[0]
    results = {}
    reference = {}
    for name, mode in (("snn_dense", DENSE), ("snn_event", EVENT_DRIVEN)):
        variant = copy.deepcopy(spec)
        variant.mode = mode
        variant.reset()
        est, ctrl = run_sequence(variant, imu_seq, refs_seq)
        reference[name] = (est, ctrl)
        samples = _time_spec(variant, imu_seq, refs_seq, repetitions, warmup)
        results[name] = _summary(name, samples, ticks, repetitions,
                                 noise_threshold)
        variant.reset()
        est2, ctrl2 = run_sequence(variant, imu_seq, refs_seq)
        if not (np.array_equal(est, est2) and np.array_equal(ctrl, ctrl2)):
            raise RuntimeError(f"{name}: outputs changed between runs")
    for side in (0, 1):
        if not np.array_equal(reference["snn_dense"][side].view(np.uint32),
                              reference["snn_event"][side].view(np.uint32)):
            raise RuntimeError("dense/event outputs diverged during benchmark")
    if ann_cascade is not None:
        samples = _time_ann(ann_cascade, imu_seq, refs_seq, repetitions,
                            warmup)
        results["ann"] = _summary("ann", samples, ticks, repetitions,
                                  noise_threshold)
    return BenchReport(variants=results, sequence_id=sequence_id)


def write_bench_csv(report, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["variant", "median_ns", "p95_ns", "ticks",
                         "repetitions", "noisy"])
        for name in sorted(report.variants):
            v = report.variants[name]
            writer.writerow([v.name, repr(v.median_ns), repr(v.p95_ns),
                             v.ticks, v.repetitions, int(v.noisy)])


class AnnCascade:
    """Estimator + controller rectifier nets run per tick like the SNN."""

    def __init__(self, estimator, controller):
        self.estimator = estimator
        self.controller = controller

    def reset(self):
        self.estimator.reset()
        self.controller.reset()

    def step(self, imu, refs):
        s_hat = self.estimator.step(imu)
        x_ctrl = np.concatenate([np.asarray(refs, dtype=np.float32), s_hat])
        return s_hat, self.controller.step(x_ctrl)
