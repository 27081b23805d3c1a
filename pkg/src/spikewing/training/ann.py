"""Bias-free recurrent rectifier baseline.

Mirrors the spiking subnet topology exactly (same layer widths, no biases)
with h[t] = ReLU(W_in p[t] + W_rec h[t-1]) and a linear readout. Shares the
training harness: only the forward/backward kernels differ.
"""

from dataclasses import dataclass

import numpy as np

RECURRENT = "recurrent"
FEEDFORWARD = "feedforward"


@dataclass
class _AnnLayer:
    kind: str
    w_in: np.ndarray
    w_rec: np.ndarray | None

    @property
    def n(self):
        return self.w_in.shape[0]


class TrainableAnnNet:
    def __init__(self, layers, w_out):
        self.layers = layers
        self.w_out = w_out

    @property
    def d_in(self):
        return self.layers[0].w_in.shape[1]

    @property
    def d_out(self):
        return self.w_out.shape[0]

    def params(self):
        out = {}
        for li, l in enumerate(self.layers):
            out[f"l{li}.w_in"] = l.w_in
            if l.w_rec is not None:
                out[f"l{li}.w_rec"] = l.w_rec
        out["w_out"] = self.w_out
        return out

    def clamp(self):
        pass

    def forward_trace(self, x):
        x = np.asarray(x, dtype=np.float64)
        t_len, batch = x.shape[0], x.shape[1]
        h_hist = [np.zeros((t_len + 1, batch, l.n)) for l in self.layers]
        y = np.empty((t_len, batch, self.d_out))
        for t in range(t_len):
            inp = x[t]
            for li, l in enumerate(self.layers):
                pre = inp @ l.w_in.T
                if l.w_rec is not None:
                    pre = pre + h_hist[li][t] @ l.w_rec.T
                h = np.maximum(pre, 0.0)
                h_hist[li][t + 1] = h
                inp = h
            y[t] = inp @ self.w_out.T
        return {"h": h_hist, "x": x}, y

    def backward(self, trace, d_y):
        x = trace["x"]
        h_hist = trace["h"]
        t_len = x.shape[0]
        n_layers = len(self.layers)
        grads = {k: np.zeros_like(v) for k, v in self.params().items()}
        d_h_next = [np.zeros((x.shape[1], l.n)) for l in self.layers]
        for t in range(t_len - 1, -1, -1):
            grads["w_out"] += d_y[t].T @ h_hist[-1][t + 1]
            d_down = None
            for li in range(n_layers - 1, -1, -1):
                l = self.layers[li]
                d_h = d_y[t] @ self.w_out if li == n_layers - 1 else d_down
                d_h = d_h + d_h_next[li]
                d_pre = d_h * (h_hist[li][t + 1] > 0.0)
                inp = x[t] if li == 0 else h_hist[li - 1][t + 1]
                grads[f"l{li}.w_in"] += d_pre.T @ inp
                if l.w_rec is not None:
                    grads[f"l{li}.w_rec"] += d_pre.T @ h_hist[li][t]
                    d_h_next[li] = d_pre @ l.w_rec
                else:
                    d_h_next[li] = np.zeros_like(d_h_next[li])
                if li > 0:
                    d_down = d_pre @ l.w_in
        return grads


def init_ann_net(layer_defs, d_in, d_out, seed):
    rng = np.random.default_rng(seed)
    layers = []
    fan = d_in
    for kind, width in layer_defs:
        bound = 1.0 / np.sqrt(fan)
        w_in = rng.uniform(-bound, bound, size=(width, fan))
        w_rec = None
        if kind == RECURRENT:
            rb = 1.0 / np.sqrt(width)
            w_rec = rng.uniform(-rb, rb, size=(width, width))
        layers.append(_AnnLayer(kind=kind, w_in=w_in, w_rec=w_rec))
        fan = width
    ob = 1.0 / np.sqrt(fan)
    w_out = rng.uniform(-ob, ob, size=(d_out, fan))
    return TrainableAnnNet(layers, w_out)


def ann_forward(net, x_seq):
    """Single-sequence forward pass (T, D) -> (T, O)."""
    x = np.asarray(x_seq, dtype=np.float64)[:, None, :]
    _, y = net.forward_trace(x)
    return y[:, 0, :]
