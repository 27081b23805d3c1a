"""Subnet checkpoints: trained parameters, scales, optimizer state, epoch."""

import json

import numpy as np

from ..errors import ContractViolation
from .ann import TrainableAnnNet, _AnnLayer
from .bptt import TrainableSpikingNet, _Layer
from .optim import Adam

CKPT_VERSION = 1


def save_checkpoint(path, net, c_x, c_y, role, opt=None, epoch=0,
                    variant=None):
    arrays = {}
    layer_meta = []
    spiking = isinstance(net, TrainableSpikingNet)
    for li, l in enumerate(net.layers):
        arrays[f"l{li}.w_in"] = l.w_in
        if l.w_rec is not None:
            arrays[f"l{li}.w_rec"] = l.w_rec
        if spiking:
            arrays[f"l{li}.alpha"] = l.alpha
            arrays[f"l{li}.beta"] = l.beta
            arrays[f"l{li}.theta"] = l.theta
        layer_meta.append({"kind": l.kind, "n": l.n})
    arrays["w_out"] = net.w_out
    arrays["c_x"] = np.asarray(c_x, dtype=np.float64)
    arrays["c_y"] = np.asarray(c_y, dtype=np.float64)
    if opt is not None:
        for key, arr in opt.state_arrays().items():
            arrays[f"opt.{key}"] = arr
    meta = {"version": CKPT_VERSION, "role": role, "epoch": epoch,
            "arch": "snn" if spiking else "ann", "layers": layer_meta,
            "kappa": getattr(net, "kappa", None), "variant": variant}
    np.savez(path, meta=np.frombuffer(json.dumps(meta).encode(),
                                      dtype=np.uint8), **arrays)


def load_checkpoint(path):
    with np.load(path) as data:
        meta = json.loads(bytes(data["meta"]).decode())
        if meta.get("version") != CKPT_VERSION:
            raise ContractViolation("unsupported checkpoint version")
        layers = []
        spiking = meta["arch"] == "snn"
        for li, lm in enumerate(meta["layers"]):
            w_in = data[f"l{li}.w_in"]
            w_rec = data[f"l{li}.w_rec"] if f"l{li}.w_rec" in data else None
            if spiking:
                layers.append(_Layer(kind=lm["kind"], w_in=w_in, w_rec=w_rec,
                                     alpha=data[f"l{li}.alpha"],
                                     beta=data[f"l{li}.beta"],
                                     theta=data[f"l{li}.theta"]))
            else:
                layers.append(_AnnLayer(kind=lm["kind"], w_in=w_in,
                                        w_rec=w_rec))
        if spiking:
            net = TrainableSpikingNet(layers, data["w_out"],
                                      kappa=meta.get("kappa") or 2.0)
        else:
            net = TrainableAnnNet(layers, data["w_out"])
        opt = Adam()
        opt_arrays = {k[4:]: data[k] for k in data.files
                      if k.startswith("opt.")}
        if opt_arrays:
            opt.load_state(opt_arrays)
        return {"net": net, "c_x": data["c_x"], "c_y": data["c_y"],
                "role": meta["role"], "epoch": meta["epoch"],
                "variant": meta.get("variant"), "opt": opt,
                "arch": meta["arch"]}
