"""Adaptive-moment optimizer with in-place updates."""

import numpy as np

from ..errors import ContractViolation


class Adam:
    def __init__(self, learning_rate=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = learning_rate
        self.b1 = beta1
        self.b2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {}
        self.v = {}

    def step(self, params, grads):
        """Update each parameter array in place; keys must match."""
        for name, g in grads.items():
            if not np.all(np.isfinite(g)):
                raise ContractViolation(f"non-finite gradient for {name}")
        self.t += 1
        bc1 = 1.0 - self.b1 ** self.t
        bc2 = 1.0 - self.b2 ** self.t
        for name, p in params.items():
            g = grads[name]
            m = self.m.setdefault(name, np.zeros_like(p))
            v = self.v.setdefault(name, np.zeros_like(p))
            m *= self.b1
            m += (1.0 - self.b1) * g
            v *= self.b2
            v += (1.0 - self.b2) * g * g
            p -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)

    def state_arrays(self):
        out = {"t": np.array([self.t], dtype=np.int64)}
        for name, arr in self.m.items():
            out[f"m.{name}"] = arr
        for name, arr in self.v.items():
            out[f"v.{name}"] = arr
        return out

    def load_state(self, arrays):
        self.t = int(arrays["t"][0])
        for key, arr in arrays.items():
            if key.startswith("m."):
                self.m[key[2:]] = arr.copy()
            elif key.startswith("v."):
                self.v[key[2:]] = arr.copy()
