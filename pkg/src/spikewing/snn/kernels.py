"""Float32 per-tick kernels with a pinned accumulation order.

Every kernel exists in two interchangeable forms: a compiled (numba) scalar
loop and a pure-numpy fallback. Both accumulate matrix columns in ascending
presynaptic index, one rounding per float32 operation, so that

  * dense and event-driven spike propagation are bit-identical, and
  * emitted C code (plain loops, no FMA contraction) reproduces the Python
    runtime spike-for-spike.

Do not reorder arithmetic here without updating the C emitter to match.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    HAVE_NUMBA = False

F32 = np.float32

# ---------------------------------------------------------------------------
# numpy fallbacks: vector ops round each element exactly like the scalar loops
# ---------------------------------------------------------------------------


def _mv_analog_np(w, x):
    m, n = w.shape
    acc = np.zeros(m, dtype=F32)
    for j in range(n):
        acc += w[:, j] * x[j]
    return acc


def _mv_spike_dense_np(w, s):
    m, n = w.shape
    acc = np.zeros(m, dtype=F32)
    for j in range(n):
        acc += w[:, j] * s[j]
    return acc


def _mv_spike_event_np(w, active):
    acc = np.zeros(w.shape[0], dtype=F32)
    for j in active:
        acc += w[:, j]
    return acc


def _lif_update_np(alpha, beta, theta, i_cur, v_mem, spikes, ff_acc, rec_acc):
    v_new = (beta * v_mem) * (F32(1.0) - spikes) + i_cur
    i_new = alpha * i_cur + ff_acc
    if rec_acc is not None:
        i_new = i_new + rec_acc
    s_new = (v_new - theta >= F32(0.0)).astype(F32)
    return i_new, v_new, s_new


def _active_set_np(spikes):
    return np.flatnonzero(spikes != F32(0.0)).astype(np.int64)


# ---------------------------------------------------------------------------
# compiled kernels
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _mv_analog_nb(w, x, out):
        m, n = w.shape
        for i in range(m):
            acc = F32(0.0)
            for j in range(n):
                acc += w[i, j] * x[j]
            out[i] = acc

    @njit(cache=True)
    def _mv_spike_dense_nb(w, s, out):
        m, n = w.shape
        for i in range(m):
            acc = F32(0.0)
            for j in range(n):
                acc += w[i, j] * s[j]
            out[i] = acc

    @njit(cache=True)
    def _mv_spike_event_nb(w, active, out):
        m = w.shape[0]
        for i in range(m):
            acc = F32(0.0)
            for k in range(active.shape[0]):
                acc += w[i, active[k]]
            out[i] = acc

    @njit(cache=True)
    def _lif_update_nb(alpha, beta, theta, i_cur, v_mem, spikes, ff_acc,
                       rec_acc, has_rec, i_out, v_out, s_out):
        n = i_cur.shape[0]
        for i in range(n):
            v = (beta[i] * v_mem[i]) * (F32(1.0) - spikes[i]) + i_cur[i]
            cur = alpha[i] * i_cur[i] + ff_acc[i]
            if has_rec:
                cur = cur + rec_acc[i]
            v_out[i] = v
            i_out[i] = cur
            s_out[i] = F32(1.0) if v - theta[i] >= F32(0.0) else F32(0.0)

    @njit(cache=True)
    def _active_set_nb(spikes, out):
        k = 0
        for j in range(spikes.shape[0]):
            if spikes[j] != F32(0.0):
                out[k] = j
                k += 1
        return k


_use_numba = HAVE_NUMBA


def use_numba(flag):
    """Select the compiled or fallback kernel set (tests use both)."""
    global _use_numba
    if flag and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    _use_numba = bool(flag)


def using_numba():
    return _use_numba


def mv_analog(w, x):
    """out[i] = sum_j w[i,j]*x[j], ascending j, float32."""
    if _use_numba:
        out = np.empty(w.shape[0], dtype=F32)
        _mv_analog_nb(w, x, out)
        return out
    return _mv_analog_np(w, x)


def mv_spike_dense(w, s):
    """Dense spike propagation: every column visited in ascending order."""
    if _use_numba:
        out = np.empty(w.shape[0], dtype=F32)
        _mv_spike_dense_nb(w, s, out)
        return out
    return _mv_spike_dense_np(w, s)


def mv_spike_event(w, active):
    """Accumulate only the columns listed in `active` (ascending indices)."""
    active = np.asarray(active, dtype=np.int64)
    if _use_numba:
        out = np.empty(w.shape[0], dtype=F32)
        _mv_spike_event_nb(w, active, out)
        return out
    return _mv_spike_event_np(w, active)


def lif_update(alpha, beta, theta, i_cur, v_mem, spikes, ff_acc, rec_acc):
    """One neuron-state tick.

    v' = beta*v*(1 - s) + i          (hard reset folded into the leak)
    i' = alpha*i + ff_acc [+ rec_acc]
    s' = 1 if v' - theta >= 0 else 0
    """
    if _use_numba:
        n = i_cur.shape[0]
        i_out = np.empty(n, dtype=F32)
        v_out = np.empty(n, dtype=F32)
        s_out = np.empty(n, dtype=F32)
        rec = rec_acc if rec_acc is not None else ff_acc
        _lif_update_nb(alpha, beta, theta, i_cur, v_mem, spikes, ff_acc,
                       rec, rec_acc is not None, i_out, v_out, s_out)
        return i_out, v_out, s_out
    return _lif_update_np(alpha, beta, theta, i_cur, v_mem, spikes,
                          ff_acc, rec_acc)


def active_indices(spikes):
    """Ascending indices of nonzero entries."""
    if _use_numba:
        out = np.empty(spikes.shape[0], dtype=np.int64)
        k = _active_set_nb(spikes, out)
        return out[:k].copy()
    return _active_set_np(spikes)


def relu_recurrent_update(w_in, w_rec, x, h):
    """h' = max(0, w_in@x + w_rec@h), same accumulation discipline."""
    pre = mv_analog(w_in, x)
    if w_rec is not None:
        pre = pre + mv_analog(w_rec, h)
    return np.maximum(pre, F32(0.0))
