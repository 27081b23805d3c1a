"""Causal pitch smoothing via recursive least squares on a constant model.

An exponentially-forgetting RLS fit of a local constant: the gain settles at
1 - lambda, so the steady state is an exponential smoother that attenuates
the flapping-frequency oscillation while locking onto a constant input
within a few samples (large initial covariance).
"""

import numpy as np


class RlsConstantFit:
    def __init__(self, forgetting=0.95, p0=1e6):
        self.lam = forgetting
        self.p0 = p0
        self.reset()

    def reset(self):
        self.p = self.p0
        self.estimate = 0.0

    def update(self, y):
        gain = self.p / (self.lam + self.p)
        self.estimate += gain * (y - self.estimate)
        self.p = (1.0 - gain) * self.p / self.lam
        return self.estimate


def rls_filter_pitch(pitch_seq, forgetting=0.95):
    """Filter a raw pitch sequence; strictly causal, same length out."""
    fit = RlsConstantFit(forgetting=forgetting)
    out = np.empty(len(pitch_seq), dtype=np.float64)
    for i, y in enumerate(np.asarray(pitch_seq, dtype=np.float64)):
        out[i] = fit.update(y)
    return out
