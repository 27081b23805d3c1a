"""Static C source emission for a trained network.

The generated pair (header + kernel) implements exactly the runtime step
semantics: float32 arithmetic, ascending-index column accumulation, hard
reset, threshold firing with the >= 0 convention, per-tick estimator ->
controller cascade with the same scaling operations in the same order.
Weights are emitted as hexadecimal float literals so the round trip is
bit-exact. No dynamic allocation appears anywhere in the generated code;
state lives in fixed static buffers and the event-driven active-index list
is a stack array sized to the layer width.

Entry points of the artifact:
    void net_init(void);
    void net_reset(void);
    void net_step(const float *inputs, float *outputs,
                  unsigned *spike_counts);        /* counts may be NULL */
"""

from dataclasses import dataclass

import numpy as np

from ..errors import EmissionError
from ..snn.serialize import spec_hash
from ..snn.types import DENSE, EVENT_DRIVEN

HEADER_NAME = "net_artifact.h"
KERNEL_NAME = "net_artifact.c"
MANIFEST_NAME = "manifest.txt"
FORMAT_VERSION = 1


@dataclass
class ExportArtifact:
    header_text: str
    kernel_text: str
    manifest_text: str

    @property
    def manifest(self):
        out = {}
        for line in self.manifest_text.strip().splitlines():
            key, _, value = line.partition(":")
            out[key.strip()] = value.strip()
        return out


def _hexf(value):
    """Exact C literal for a float32 value."""
    return float(np.float32(value)).hex() + "f"


def _float_array(name, arr):
    arr = np.asarray(arr, dtype=np.float32).ravel()
    body = []
    line = "    "
    for k, v in enumerate(arr):
        tok = _hexf(v) + ("," if k < arr.size - 1 else "")
        if len(line) + len(tok) > 78:
            body.append(line.rstrip())
            line = "    "
        line += tok + " "
    body.append(line.rstrip())
    return (f"static const float {name}[{arr.size}] = {{\n"
            + "\n".join(body) + "\n};")


def _check_finite(spec):
    from ..snn.serialize import _all_arrays
    for key, arr in _all_arrays(spec).items():
        if not np.all(np.isfinite(arr)):
            raise EmissionError(f"non-finite values in {key}")


def _layer_names(prefix, li):
    return f"{prefix}_l{li}"


def _emit_subnet_arrays(prefix, net):
    chunks = []
    for li, layer in enumerate(net.layers):
        base = _layer_names(prefix, li)
        chunks.append(_float_array(f"{base}_w_in", layer.w_in))
        if layer.w_rec is not None:
            chunks.append(_float_array(f"{base}_w_rec", layer.w_rec))
        chunks.append(_float_array(f"{base}_alpha", layer.params.alpha))
        chunks.append(_float_array(f"{base}_beta", layer.params.beta))
        chunks.append(_float_array(f"{base}_theta", layer.params.theta))
        chunks.append(f"static float {base}_i[{layer.n}];")
        chunks.append(f"static float {base}_v[{layer.n}];")
        chunks.append(f"static float {base}_s[{layer.n}];")
    chunks.append(_float_array(f"{prefix}_w_out", net.readout.w_out))
    chunks.append(_float_array(f"{prefix}_c_in", net.input_scale))
    chunks.append(_float_array(f"{prefix}_c_out", net.output_scale))
    return chunks


def _emit_layer_step(prefix, li, layer, in_expr, in_dim, analog, event):
    """Straight-line code advancing one layer; input already scaled."""
    base = _layer_names(prefix, li)
    n = layer.n
    lines = [f"    {{", f"        float ff[{n}];"]
    if analog:
        lines.append(
            f"        mv_analog({base}_w_in, {in_expr}, {n}, {in_dim}, ff);")
    elif event:
        lines += [
            f"        int active[{in_dim}];",
            f"        int na = collect_active({in_expr}, {in_dim}, active);",
            f"        mv_spike_event({base}_w_in, active, na, {n}, "
            f"{in_dim}, ff);",
        ]
    else:
        lines.append(
            f"        mv_spike_dense({base}_w_in, {in_expr}, {n}, {in_dim},"
            f" ff);")
    if layer.w_rec is not None:
        lines.append(f"        float rec[{n}];")
        if event:
            lines += [
                f"        int ra[{n}];",
                f"        int nr = collect_active({base}_s, {n}, ra);",
                f"        mv_spike_event({base}_w_rec, ra, nr, {n}, {n},"
                f" rec);",
            ]
        else:
            lines.append(
                f"        mv_spike_dense({base}_w_rec, {base}_s, {n}, {n},"
                f" rec);")
        rec_arg = "rec"
    else:
        rec_arg = "0"
    lines += [
        f"        lif_update({base}_alpha, {base}_beta, {base}_theta,",
        f"                   {base}_i, {base}_v, {base}_s, ff, {rec_arg},"
        f" {n});",
        f"    }}",
    ]
    return lines


def _emit_readout(prefix, net, out_var, event):
    base_s = _layer_names(prefix, len(net.layers) - 1) + "_s"
    m = net.layers[-1].n
    o = net.readout.n_out
    lines = []
    if event:
        lines += [
            f"    {{",
            f"        int active[{m}];",
            f"        int na = collect_active({base_s}, {m}, active);",
            f"        mv_spike_event({prefix}_w_out, active, na, {o}, {m},"
            f" {out_var});",
            f"    }}",
        ]
    else:
        lines.append(
            f"    mv_spike_dense({prefix}_w_out, {base_s}, {o}, {m},"
            f" {out_var});")
    return lines


_HELPER_ANALOG = r"""
static void mv_analog(const float *w, const float *x, int m, int n,
                      float *out) {
    for (int i = 0; i < m; ++i) {
        float acc = 0.0f;
        for (int j = 0; j < n; ++j) {
            acc += w[(long)i * n + j] * x[j];
        }
        out[i] = acc;
    }
}
"""

_HELPER_DENSE = r"""
static void mv_spike_dense(const float *w, const float *s, int m, int n,
                           float *out) {
    for (int i = 0; i < m; ++i) {
        float acc = 0.0f;
        for (int j = 0; j < n; ++j) {
            acc += w[(long)i * n + j] * s[j];
        }
        out[i] = acc;
    }
}
"""

_HELPER_EVENT = r"""
static void mv_spike_event(const float *w, const int *active, int n_active,
                           int m, int n, float *out) {
    for (int i = 0; i < m; ++i) {
        float acc = 0.0f;
        for (int k = 0; k < n_active; ++k) {
            acc += w[(long)i * n + active[k]];
        }
        out[i] = acc;
    }
}

static int collect_active(const float *s, int n, int *active) {
    int k = 0;
    for (int j = 0; j < n; ++j) {
        if (s[j] != 0.0f) {
            active[k++] = j;
        }
    }
    return k;
}
"""

_HELPER_LIF = r"""
static void lif_update(const float *alpha, const float *beta,
                       const float *theta, float *i_cur, float *v_mem,
                       float *spikes, const float *ff_acc,
                       const float *rec_acc, int n) {
    for (int k = 0; k < n; ++k) {
        float v = (beta[k] * v_mem[k]) * (1.0f - spikes[k]) + i_cur[k];
        float cur = alpha[k] * i_cur[k] + ff_acc[k];
        if (rec_acc) {
            cur = cur + rec_acc[k];
        }
        v_mem[k] = v;
        i_cur[k] = cur;
        spikes[k] = (v - theta[k] >= 0.0f) ? 1.0f : 0.0f;
    }
}

static float spike_count(const float *s, int n) {
    float total = 0.0f;
    for (int j = 0; j < n; ++j) {
        total += s[j];
    }
    return total;
}
"""


def emit(spec, mode=None):
    """Compile a NetworkSpec into C sources plus a provenance manifest."""
    _check_finite(spec)
    mode = spec.mode if mode is None else mode
    if mode not in (DENSE, EVENT_DRIVEN):
        raise EmissionError(f"unknown mode {mode!r}")
    event = mode == EVENT_DRIVEN
    est, ctrl = spec.estimator, spec.controller
    d_imu = est.d_in
    d_refs = ctrl.d_in - est.d_out
    d_out = est.d_out + ctrl.d_out
    n_spike_layers = len(est.layers) + len(ctrl.layers)

    header = "\n".join([
        "/* Generated network artifact. Do not edit. */",
        "#ifndef NET_ARTIFACT_H",
        "#define NET_ARTIFACT_H",
        "",
        f"#define NET_IMU_DIM {d_imu}",
        f"#define NET_REFS_DIM {d_refs}",
        f"#define NET_INPUT_DIM {d_imu + d_refs}",
        f"#define NET_EST_OUT {est.d_out}",
        f"#define NET_CTRL_OUT {ctrl.d_out}",
        f"#define NET_OUTPUT_DIM {d_out}",
        f"#define NET_NUM_SPIKE_LAYERS {n_spike_layers}",
        "",
        "void net_init(void);",
        "void net_reset(void);",
        "/* inputs: NET_INPUT_DIM raw values (inertial sample, then",
        " * references/measurements); outputs: NET_OUTPUT_DIM physical",
        " * values (state estimate, then command). spike_counts may be",
        " * NULL; otherwise it receives NET_NUM_SPIKE_LAYERS counts. */",
        "void net_step(const float *inputs, float *outputs,",
        "              unsigned *spike_counts);",
        "",
        "#endif /* NET_ARTIFACT_H */",
        "",
    ])

    chunks = [
        "/* Generated network artifact. Do not edit. */",
        f'#include "{HEADER_NAME}"',
        "",
    ]
    chunks += _emit_subnet_arrays("est", est)
    chunks += _emit_subnet_arrays("ctrl", ctrl)
    chunks.append(_HELPER_ANALOG)
    chunks.append(_HELPER_EVENT if event else _HELPER_DENSE)
    chunks.append(_HELPER_LIF)

    reset_lines = ["void net_reset(void) {"]
    for prefix, net in (("est", est), ("ctrl", ctrl)):
        for li, layer in enumerate(net.layers):
            base = _layer_names(prefix, li)
            reset_lines += [
                f"    for (int k = 0; k < {layer.n}; ++k) {{",
                f"        {base}_i[k] = 0.0f;",
                f"        {base}_v[k] = 0.0f;",
                f"        {base}_s[k] = 0.0f;",
                f"    }}",
            ]
    reset_lines += ["}", "", "void net_init(void) {", "    net_reset();",
                    "}", ""]
    chunks.append("\n".join(reset_lines))

    step = [
        "void net_step(const float *inputs, float *outputs,",
        "              unsigned *spike_counts) {",
        f"    float xs[{d_imu}];",
        f"    float ys[{est.d_out}];",
        f"    float s_hat[{est.d_out}];",
        f"    float xc[{ctrl.d_in}];",
        f"    float yc[{ctrl.d_out}];",
        f"    for (int k = 0; k < {d_imu}; ++k) {{",
        "        xs[k] = est_c_in[k] * inputs[k];",
        "    }",
    ]
    in_expr, in_dim, analog = "xs", d_imu, True
    for li, layer in enumerate(est.layers):
        step += _emit_layer_step("est", li, layer, in_expr, in_dim, analog,
                                 event)
        in_expr = _layer_names("est", li) + "_s"
        in_dim = layer.n
        analog = False
    step += _emit_readout("est", est, "ys", event)
    step += [
        f"    for (int k = 0; k < {est.d_out}; ++k) {{",
        "        s_hat[k] = ys[k] / est_c_out[k];",
        "    }",
        f"    for (int k = 0; k < {d_refs}; ++k) {{",
        f"        xc[k] = ctrl_c_in[k] * inputs[{d_imu} + k];",
        "    }",
        f"    for (int k = 0; k < {est.d_out}; ++k) {{",
        f"        xc[{d_refs} + k] = ctrl_c_in[{d_refs} + k] * s_hat[k];",
        "    }",
    ]
    in_expr, in_dim, analog = "xc", ctrl.d_in, True
    for li, layer in enumerate(ctrl.layers):
        step += _emit_layer_step("ctrl", li, layer, in_expr, in_dim, analog,
                                 event)
        in_expr = _layer_names("ctrl", li) + "_s"
        in_dim = layer.n
        analog = False
    step += _emit_readout("ctrl", ctrl, "yc", event)
    step += [
        f"    for (int k = 0; k < {est.d_out}; ++k) {{",
        "        outputs[k] = s_hat[k];",
        "    }",
        f"    for (int k = 0; k < {ctrl.d_out}; ++k) {{",
        f"        outputs[{est.d_out} + k] = yc[k] / ctrl_c_out[k];",
        "    }",
        "    if (spike_counts) {",
    ]
    ci = 0
    for prefix, net in (("est", est), ("ctrl", ctrl)):
        for li, layer in enumerate(net.layers):
            base = _layer_names(prefix, li)
            step.append(
                f"        spike_counts[{ci}] = (unsigned)spike_count("
                f"{base}_s, {layer.n});")
            ci += 1
    step += ["    }", "}", ""]
    chunks.append("\n".join(step))

    manifest = "\n".join([
        f"format_version: {FORMAT_VERSION}",
        f"mode: {mode}",
        "numeric_format: float32",
        f"spec_sha256: {spec_hash(spec)}",
        f"controller_variant: {spec.controller_variant}",
        f"input_dim: {d_imu + d_refs}",
        f"output_dim: {d_out}",
        f"estimator_layers: {'/'.join(str(l.n) for l in est.layers)}",
        f"controller_layers: {'/'.join(str(l.n) for l in ctrl.layers)}",
        "",
    ])
    return ExportArtifact(header_text=header,
                          kernel_text="\n".join(chunks),
                          manifest_text=manifest)


def write_artifact(artifact, out_dir):
    """Write the artifact file pair and manifest into a directory."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    for name, text in ((HEADER_NAME, artifact.header_text),
                       (KERNEL_NAME, artifact.kernel_text),
                       (MANIFEST_NAME, artifact.manifest_text)):
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            fh.write(text)
        paths[name] = path
    return paths
