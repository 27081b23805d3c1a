"""Manual backpropagation through time for the spiking networks.

The forward pass runs the exact hard-threshold dynamics in float64 over a
batch of windows (time-major). The backward pass is reverse-mode through
the unrolled graph with two standard relaxations:

  * the spike nondifferentiability is replaced by the arctan-style
    surrogate 1 / (1 + kappa * (v - theta)^2), forward pass unchanged;
  * the hard-reset gate (1 - s[t]) is treated as a constant, so no
    gradient flows through the reset path.

Gradients cover every learnable tensor: input/recurrent/readout weights
and the per-neuron leak factors and thresholds.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation

RECURRENT = "recurrent"
FEEDFORWARD = "feedforward"


def surrogate_grad(v, theta, kappa):
    """Surrogate dS/dV: peaks at 1 when v == theta, even, decaying."""
    if kappa <= 0.0:
        raise ContractViolation("kappa must be positive")
    d = np.asarray(v, dtype=np.float64) - theta
    out = 1.0 / (1.0 + kappa * d * d)
    return out if out.ndim else float(out)


@dataclass
class _Layer:
    kind: str
    w_in: np.ndarray
    w_rec: np.ndarray | None
    alpha: np.ndarray
    beta: np.ndarray
    theta: np.ndarray

    @property
    def n(self):
        return self.w_in.shape[0]


class TrainableSpikingNet:
    """Float64 parameter container with batched forward/backward."""

    def __init__(self, layers, w_out, kappa=2.0):
        self.layers = layers
        self.w_out = w_out
        self.kappa = kappa

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
            out[f"l{li}.alpha"] = l.alpha
            out[f"l{li}.beta"] = l.beta
            out[f"l{li}.theta"] = l.theta
        out["w_out"] = self.w_out
        return out

    def clamp(self, leak_min=1e-4, leak_max=1.0 - 1e-4):
        for l in self.layers:
            np.clip(l.alpha, leak_min, leak_max, out=l.alpha)
            np.clip(l.beta, leak_min, leak_max, out=l.beta)

    def forward_trace(self, x):
        """Run a window batch; x is (T, B, D) in scaled units.

        Returns (trace, y) where y is (T, B, O) and the trace holds the
        full state history needed by backward().
        """
        x = np.asarray(x, dtype=np.float64)
        t_len, batch = x.shape[0], x.shape[1]
        i_hist, v_hist, s_hist = [], [], []
        for l in self.layers:
            i_hist.append(np.zeros((t_len + 1, batch, l.n)))
            v_hist.append(np.zeros((t_len + 1, batch, l.n)))
            s_hist.append(np.zeros((t_len + 1, batch, l.n)))
        y = np.empty((t_len, batch, self.d_out))
        for t in range(t_len):
            inp = x[t]
            for li, l in enumerate(self.layers):
                i_prev = i_hist[li][t]
                v_prev = v_hist[li][t]
                s_prev = s_hist[li][t]
                v_new = l.beta * v_prev * (1.0 - s_prev) + i_prev
                cur = l.alpha * i_prev + inp @ l.w_in.T
                if l.w_rec is not None:
                    cur = cur + s_prev @ l.w_rec.T
                s_new = (v_new - l.theta >= 0.0).astype(np.float64)
                i_hist[li][t + 1] = cur
                v_hist[li][t + 1] = v_new
                s_hist[li][t + 1] = s_new
                inp = s_new
            y[t] = inp @ self.w_out.T
        return {"i": i_hist, "v": v_hist, "s": s_hist, "x": x}, y

    def backward(self, trace, d_y):
        """Reverse pass; d_y is dLoss/dy, (T, B, O). Returns grad dict."""
        x = trace["x"]
        i_hist, v_hist, s_hist = trace["i"], trace["v"], trace["s"]
        t_len, batch = x.shape[0], x.shape[1]
        n_layers = len(self.layers)
        grads = {k: np.zeros_like(v) for k, v in self.params().items()}
        d_v_next = [np.zeros((batch, l.n)) for l in self.layers]
        d_i_next = [np.zeros((batch, l.n)) for l in self.layers]
        for t in range(t_len - 1, -1, -1):
            d_y_t = d_y[t]
            grads["w_out"] += d_y_t.T @ s_hist[-1][t + 1]
            d_s_down = None
            for li in range(n_layers - 1, -1, -1):
                l = self.layers[li]
                d_i_cur = d_v_next[li] + l.alpha * d_i_next[li]
                if li == n_layers - 1:
                    d_s = d_y_t @ self.w_out
                else:
                    d_s = d_s_down
                if l.w_rec is not None:
                    d_s = d_s + d_i_next[li] @ l.w_rec
                g = surrogate_grad(v_hist[li][t + 1], l.theta, self.kappa)
                d_v_cur = d_s * g + d_v_next[li] * l.beta \
                    * (1.0 - s_hist[li][t + 1])
                inp = x[t] if li == 0 else s_hist[li - 1][t + 1]
                grads[f"l{li}.w_in"] += d_i_cur.T @ inp
                if l.w_rec is not None:
                    grads[f"l{li}.w_rec"] += d_i_cur.T @ s_hist[li][t]
                grads[f"l{li}.alpha"] += (d_i_cur * i_hist[li][t]).sum(axis=0)
                grads[f"l{li}.beta"] += (d_v_cur * v_hist[li][t]
                                         * (1.0 - s_hist[li][t])).sum(axis=0)
                grads[f"l{li}.theta"] += (-d_s * g).sum(axis=0)
                if li > 0:
                    d_s_down = d_i_cur @ l.w_in
                d_v_next[li] = d_v_cur
                d_i_next[li] = d_i_cur
        return grads


def init_spiking_net(layer_defs, d_in, d_out, seed, kappa=5.0,
                     leak_range=(0.5, 0.8), theta_init=0.75,
                     weight_gain=0.5):
    """Build a randomly initialized network.

    layer_defs: sequence of (kind, width). Weights are uniform with a
    `weight_gain`/sqrt(fan_in) bound; leaks start in `leak_range`,
    thresholds at `theta_init`. The defaults keep initial membrane
    excursions within a few thresholds, which keeps spike rates moderate
    and the 2500-step backward pass numerically stable.
    """
    rng = np.random.default_rng(seed)
    layers = []
    fan = d_in
    for kind, width in layer_defs:
        bound = weight_gain / np.sqrt(fan)
        w_in = rng.uniform(-bound, bound, size=(width, fan))
        w_rec = None
        if kind == RECURRENT:
            rb = weight_gain / np.sqrt(width)
            w_rec = rng.uniform(-rb, rb, size=(width, width))
        layers.append(_Layer(
            kind=kind, w_in=w_in, w_rec=w_rec,
            alpha=rng.uniform(*leak_range, size=width),
            beta=rng.uniform(*leak_range, size=width),
            theta=np.full(width, float(theta_init))))
        fan = width
    ob = 1.0 / np.sqrt(fan)
    w_out = rng.uniform(-ob, ob, size=(d_out, fan))
    return TrainableSpikingNet(layers, w_out, kappa=kappa)
