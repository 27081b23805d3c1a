"""Lossless network serialization.

Format: a numpy .npz archive holding one float32 block per weight matrix,
parameter vector, and scale vector, plus a JSON manifest describing layer
kinds, sizes, and the format version. Row-major blocks, exact round trip.
Training checkpoints and the C emitter both consume this format.
"""

import hashlib
import io
import json

import numpy as np

from ..errors import ContractViolation
from .types import (F32, NetworkSpec, NeuronParams, Readout, SpikingLayer,
                    SpikingNet)

FORMAT_VERSION = 1
SUBNET_KEYS = ("est", "ctrl")


def _net_arrays(prefix, net):
    arrays = {}
    layer_meta = []
    for li, layer in enumerate(net.layers):
        base = f"{prefix}.l{li}"
        arrays[f"{base}.w_in"] = layer.w_in
        if layer.w_rec is not None:
            arrays[f"{base}.w_rec"] = layer.w_rec
        arrays[f"{base}.alpha"] = layer.params.alpha
        arrays[f"{base}.beta"] = layer.params.beta
        arrays[f"{base}.theta"] = layer.params.theta
        layer_meta.append({"kind": layer.kind, "n": layer.n,
                           "d_in": layer.d_in})
    arrays[f"{prefix}.w_out"] = net.readout.w_out
    arrays[f"{prefix}.c_in"] = net.input_scale
    arrays[f"{prefix}.c_out"] = net.output_scale
    return arrays, layer_meta


def network_manifest(spec):
    manifest = {"format_version": FORMAT_VERSION, "mode": spec.mode,
                "controller_variant": spec.controller_variant}
    for key, net in (("est", spec.estimator), ("ctrl", spec.controller)):
        _, meta = _net_arrays(key, net)
        manifest[key] = {"layers": meta, "d_out": net.d_out}
    return manifest


def _all_arrays(spec):
    arrays = {}
    for key, net in (("est", spec.estimator), ("ctrl", spec.controller)):
        a, _ = _net_arrays(key, net)
        arrays.update(a)
    return arrays


def spec_hash(spec):
    """SHA-256 over the manifest and every array block, key-sorted."""
    arrays = _all_arrays(spec)
    h = hashlib.sha256()
    h.update(json.dumps(network_manifest(spec), sort_keys=True).encode())
    for key in sorted(arrays):
        h.update(key.encode())
        h.update(np.ascontiguousarray(arrays[key], dtype=F32).tobytes())
    return h.hexdigest()


def save_network(spec, path):
    arrays = _all_arrays(spec)
    manifest = json.dumps(network_manifest(spec), sort_keys=True)
    np.savez(path, manifest=np.frombuffer(manifest.encode(), dtype=np.uint8),
             **arrays)


def _load_subnet(data, manifest, key):
    layers = []
    for li, meta in enumerate(manifest[key]["layers"]):
        base = f"{key}.l{li}"
        w_rec = data[f"{base}.w_rec"] if f"{base}.w_rec" in data else None
        layers.append(SpikingLayer(
            kind=meta["kind"],
            w_in=data[f"{base}.w_in"],
            w_rec=w_rec,
            params=NeuronParams(data[f"{base}.alpha"], data[f"{base}.beta"],
                                data[f"{base}.theta"])))
    return SpikingNet(layers=layers,
                      readout=Readout(data[f"{key}.w_out"]),
                      input_scale=data[f"{key}.c_in"],
                      output_scale=data[f"{key}.c_out"])


def load_network(path):
    with np.load(path) as data:
        manifest = json.loads(bytes(data["manifest"]).decode())
        if manifest.get("format_version") != FORMAT_VERSION:
            raise ContractViolation(
                f"unsupported format version {manifest.get('format_version')}")
        est = _load_subnet(data, manifest, "est")
        ctrl = _load_subnet(data, manifest, "ctrl")
    return NetworkSpec(estimator=est, controller=ctrl, mode=manifest["mode"],
                       controller_variant=manifest["controller_variant"])


def network_bytes(spec):
    buf = io.BytesIO()
    save_network(spec, buf)
    return buf.getvalue()
