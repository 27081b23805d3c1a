"""Command-line surface for the full pipeline.

Subcommands:
    gen-data   synthesize expert demonstration logs into a directory
    train      fit an estimator or controller (spiking or rectifier)
    assemble   combine two subnet checkpoints into a network file
    eval       offline replay of a network against held-out logs
    export     emit the C artifact for a network file
    validate   differential check of an emitted artifact vs the runtime
    bench      MAC counts and per-tick latency comparison

A config file of `key: value` lines may set any flag default; explicit
flags win. All outputs go under the directory given by --out.
"""

import argparse
import json
import os
import sys

import numpy as np

from .bench.latency import AnnCascade, bench_latency, write_bench_csv
from .bench.macs import count_macs
from .codegen.emit import emit, write_artifact
from .codegen.validate import validate_export
from .errors import ContractViolation
from .evaluate import (evaluate_cascade, evaluate_controller,
                       evaluate_estimator, evaluate_expert_self)
from .expert.labels import ExpertConfig, make_flight_log
from .expert.logio import read_flight_csv, write_flight_csv
from .expert.synth import SynthConfig
from .snn.serialize import load_network, save_network
from .snn.types import NetworkSpec
from .training.ann import init_ann_net
from .training.bptt import init_spiking_net
from .training.checkpoint import load_checkpoint, save_checkpoint
from .training.dataset import (controller_features, estimator_features,
                               window_dataset)
from .training.trainer import (TrainConfig, to_runtime_ann,
                               to_runtime_subnet, train)

ROLE_ESTIMATOR = "estimator"
ROLE_CONTROLLER = "controller"


def _load_config(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(":")
            values[key.strip()] = value.strip()
    return values


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return args
    values = _load_config(args.config)
    defaults = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if hasattr(args, dest):
            current = getattr(args, dest)
            caster = type(current) if current is not None else str
            if caster is bool:
                defaults[dest] = value.lower() in ("1", "true", "yes")
            else:
                defaults[dest] = caster(value)
    # flags explicitly provided on the command line override the file
    provided = {a.split("=")[0].lstrip("-").replace("-", "_")
                for a in sys.argv if a.startswith("--")}
    for dest, value in defaults.items():
        if dest not in provided:
            setattr(args, dest, value)
    return args


def _log_paths(data_dir):
    names = sorted(n for n in os.listdir(data_dir)
                   if n.startswith("log_") and n.endswith(".csv"))
    if not names:
        raise ContractViolation(f"no log_*.csv files in {data_dir}")
    return [os.path.join(data_dir, n) for n in names]


def _split_logs(paths, holdout_frac=0.15):
    """Deterministic split: the last 15% of logs are held out."""
    n_hold = max(1, int(round(len(paths) * holdout_frac))) \
        if len(paths) > 1 else 0
    if n_hold == 0:
        return paths, []
    return paths[:-n_hold], paths[-n_hold:]


def cmd_gen_data(args):
    os.makedirs(args.out, exist_ok=True)
    synth = SynthConfig(flap_hz=args.flap_hz,
                        und_pitch_deg=args.und_pitch,
                        und_roll_deg=args.und_roll,
                        und_yaw_deg=args.und_yaw)
    expert = ExpertConfig()
    total_s = args.minutes * 60.0
    n_logs = max(1, int(round(total_s / args.log_seconds)))
    meta = {"seed": args.seed, "minutes": args.minutes,
            "log_seconds": args.log_seconds, "flap_hz": args.flap_hz,
            "logs": []}
    for k in range(n_logs):
        log_seed = args.seed * 100003 + k
        log, used_cfg = make_flight_log(synth, expert, args.log_seconds,
                                        log_seed)
        name = f"log_{k:04d}.csv"
        write_flight_csv(os.path.join(args.out, name), log)
        meta["logs"].append({"name": name, "seed": log_seed,
                             "cpg_phase": used_cfg.cpg.phase_rad,
                             "cpg_amplitude": used_cfg.cpg.amplitude_deg,
                             "cpg_frequency": used_cfg.cpg.frequency_hz})
    with open(os.path.join(args.out, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    print(f"wrote {n_logs} logs ({total_s / 60.0:.1f} min) to {args.out}")
    return 0


def _feature_pairs(paths, role, variant):
    pairs = []
    for path in paths:
        log = read_flight_csv(path)
        if role == ROLE_ESTIMATOR:
            pairs.append(estimator_features(log))
        else:
            pairs.append(controller_features(log, variant))
    return pairs


def cmd_train(args):
    os.makedirs(args.out, exist_ok=True)
    paths = _log_paths(args.data)
    train_paths, val_paths = _split_logs(paths)
    cfg = TrainConfig(window_len=args.window, stride=args.stride,
                      burn_in=args.burn_in, epochs=args.epochs,
                      batch_size=args.batch_size,
                      learning_rate=args.learning_rate, kappa=args.kappa,
                      seed=args.seed)
    pairs = _feature_pairs(train_paths, args.role, args.variant)
    dataset = window_dataset(pairs, cfg.window_len, cfg.stride)
    val = None
    if val_paths:
        val_pairs = _feature_pairs(val_paths, args.role, args.variant)
        val = window_dataset(val_pairs, cfg.window_len, cfg.stride,
                             c_x=dataset.c_x, c_y=dataset.c_y,
                             split="validation")
    d_in = dataset.x.shape[2]
    d_out = dataset.y.shape[2]
    if args.role == ROLE_ESTIMATOR:
        sizes = [int(s) for s in args.est_sizes.split(",")]
        defs = [("feedforward", sizes[0]), ("recurrent", sizes[1])]
    else:
        defs = [("recurrent", args.ctrl_size)]
    if args.arch == "snn":
        net = init_spiking_net(defs, d_in, d_out, seed=cfg.seed,
                               kappa=cfg.kappa)
    else:
        net = init_ann_net(defs, d_in, d_out, seed=cfg.seed)
    log_path = os.path.join(args.out, f"train_{args.role}.csv")
    result = train(net, dataset, cfg, role=args.role, val_dataset=val,
                   log_path=log_path)
    ckpt = os.path.join(args.out, f"{args.role}_{args.arch}.npz")
    save_checkpoint(ckpt, result.net, dataset.c_x, dataset.c_y,
                    role=args.role, epoch=len(result.history),
                    variant=args.variant)
    status = "diverged" if result.diverged else "ok"
    print(f"{status}: {len(result.history)} epochs, "
          f"final train loss {result.final_loss:.6f} -> {ckpt}")
    return 0 if not result.diverged else 1


def _subnet_from_ckpt(path):
    ck = load_checkpoint(path)
    if ck["arch"] != "snn":
        raise ContractViolation("network assembly requires spiking subnets")
    return to_runtime_subnet(ck["net"], ck["c_x"], ck["c_y"]), ck


def cmd_assemble(args):
    est, _ = _subnet_from_ckpt(args.estimator)
    ctrl, ck = _subnet_from_ckpt(args.controller)
    variant = args.variant or ck.get("variant") or "pitch_offset"
    spec = NetworkSpec(estimator=est, controller=ctrl, mode=args.mode,
                       controller_variant=variant)
    save_network(spec, args.out)
    print(f"network written to {args.out}")
    return 0


def cmd_eval(args):
    os.makedirs(args.out, exist_ok=True)
    paths = _log_paths(args.data)
    logs = [read_flight_csv(p) for p in paths]
    metrics = {}
    if args.expert:
        variant = args.variant or "pitch_offset"
        metrics.update(evaluate_expert_self(logs, variant))
    else:
        spec = load_network(args.network)
        metrics.update(evaluate_estimator(spec.estimator, logs))
        metrics.update(evaluate_controller(spec.controller, logs,
                                           spec.controller_variant))
        metrics.update(evaluate_cascade(spec, logs))
    out_path = os.path.join(args.out, "metrics.json")
    with open(out_path, "w") as fh:
        json.dump(metrics, fh, indent=2, sort_keys=True)
    for key in sorted(metrics):
        print(f"{key}: {metrics[key]:.6f}")
    if args.plot and not args.expert:
        _plot_eval(args, logs, spec)
    return 0


def _plot_eval(args, logs, spec):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .training.dataset import controller_features
    from .snn.runtime import run_subnet

    log = logs[0]
    x, _ = controller_features(log, spec.controller_variant)
    pred = run_subnet(spec.controller, x)
    fig, ax = plt.subplots(figsize=(10, 4))
    t = log.timestamp
    if spec.controller_variant == "pitch_offset":
        ax.plot(t, log.offset_pitch, label="expert offset")
    elif spec.controller_variant == "yaw_offset":
        ax.plot(t, log.offset_yaw, label="expert offset")
    else:
        ax.plot(t, log.pwm_left, label="expert pwm L")
    ax.plot(t, pred[:, 0], label="network", alpha=0.7)
    ax.set_xlabel("time [s]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(args.out, "tracking.png"), dpi=120)
    plt.close(fig)


def cmd_export(args):
    os.makedirs(args.out, exist_ok=True)
    spec = load_network(args.network)
    artifact = emit(spec, mode=args.mode)
    paths = write_artifact(artifact, args.out)
    for p in paths.values():
        print(p)
    return 0


def cmd_validate(args):
    from .training.dataset import controller_refs

    spec = load_network(args.network)
    logs = [read_flight_csv(p) for p in _log_paths(args.data)]
    log = logs[0]
    ticks = min(args.ticks, log.n)
    imu = np.concatenate([log.gyro, log.accel], axis=1)[:ticks]
    refs = controller_refs(log.theta_ref, log.psi_ref, log.yaw,
                           log.gyro)[:ticks]
    spec.reset()
    from .snn.runtime import run_sequence

    est, ctrl, counts = run_sequence(spec, imu, refs, record_spikes=True)
    ref_out = np.concatenate([est, ctrl], axis=1)
    artifact = emit(spec, mode=spec.mode)
    os.makedirs(args.out, exist_ok=True)
    report = validate_export(artifact, imu, refs, ref_out, counts,
                             tol=args.tol, harness_src=args.harness,
                             workdir=args.out)
    print(f"status: {report.status}")
    if report.max_abs_dev is not None:
        print("max abs deviation per channel:",
              " ".join(f"{d:.3g}" for d in report.max_abs_dev))
        print(f"spike counts equal: {report.spike_counts_equal}")
    if report.detail:
        print(report.detail)
    return 0 if report.status == "passed" else (2 if report.status ==
                                                "skipped" else 1)


def cmd_bench(args):
    from .training.dataset import controller_refs

    os.makedirs(args.out, exist_ok=True)
    spec = load_network(args.network)
    log = read_flight_csv(_log_paths(args.data)[0])
    ticks = min(args.ticks, log.n)
    imu = np.concatenate([log.gyro, log.accel], axis=1)[:ticks]
    refs = controller_refs(log.theta_ref, log.psi_ref, log.yaw,
                           log.gyro)[:ticks]
    macs = count_macs(spec, imu, refs)
    ann = None
    if args.with_ann:
        est_defs = [("feedforward", spec.estimator.layers[0].n),
                    ("recurrent", spec.estimator.layers[1].n)]
        ctrl_defs = [("recurrent", spec.controller.layers[0].n)]
        est = init_ann_net(est_defs, spec.estimator.d_in,
                           spec.estimator.d_out, seed=0)
        ctrl = init_ann_net(ctrl_defs, spec.controller.d_in,
                            spec.controller.d_out, seed=1)
        ann = AnnCascade(
            to_runtime_ann(est, spec.estimator.input_scale,
                           spec.estimator.output_scale),
            to_runtime_ann(ctrl, spec.controller.input_scale,
                           spec.controller.output_scale))
    report = bench_latency(spec, imu, refs, ann_cascade=ann,
                           repetitions=args.reps,
                           sequence_id=os.path.basename(args.data))
    report.mac_counts = macs
    report.layer_spike_rates = macs.layer_spike_rates
    write_bench_csv(report, os.path.join(args.out, "bench.csv"))
    if args.plot:
        _plot_bench(args, report, macs)
    print(f"ticks: {macs.ticks}")
    print(f"dense MACs/tick: {macs.dense_total // macs.ticks}")
    print(f"event MACs/tick: {macs.event_total // macs.ticks}")
    print(f"ann MACs/tick: {macs.ann_macs // macs.ticks}")
    print(f"mac-weighted spike rate: {macs.mac_weighted_rate:.4f}")
    for name in sorted(report.variants):
        v = report.variants[name]
        flag = " (noisy)" if v.noisy else ""
        print(f"{name}: median {v.median_ns:.0f} ns, "
              f"p95 {v.p95_ns:.0f} ns{flag}")
    return 0


def _plot_bench(args, report, macs):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = sorted(report.variants)
    medians = [report.variants[n].median_ns / 1e3 for n in names]
    p95s = [report.variants[n].p95_ns / 1e3 for n in names]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.bar(names, medians, yerr=[np.zeros(len(names)),
                                  np.array(p95s) - np.array(medians)],
            capsize=4)
    ax1.set_ylabel("per-tick latency [µs]")
    ax1.set_title("median (whisker to p95)")
    mac_rows = {"ann": macs.ann_macs, "snn_dense": macs.dense_total,
                "snn_event": macs.event_total}
    keys = [n for n in names if n in mac_rows]
    ax2.bar(keys, [mac_rows[n] / macs.ticks for n in keys])
    ax2.set_ylabel("MACs per tick")
    fig.tight_layout()
    fig.savefig(os.path.join(args.out, "bench.png"), dpi=120)
    plt.close(fig)


def build_parser():
    parser = argparse.ArgumentParser(prog="spikewing", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="synthesize demonstration logs")
    p.add_argument("--out", required=True)
    p.add_argument("--minutes", type=float, default=150.0)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--log-seconds", type=float, default=120.0)
    p.add_argument("--flap-hz", type=float, default=3.25)
    p.add_argument("--und-pitch", type=float, default=2.5)
    p.add_argument("--und-roll", type=float, default=1.5)
    p.add_argument("--und-yaw", type=float, default=0.6)
    p.add_argument("--config")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="fit a subnet by imitation")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--role", choices=[ROLE_ESTIMATOR, ROLE_CONTROLLER],
                   required=True)
    p.add_argument("--variant", default="pitch_offset",
                   choices=["pitch_offset", "yaw_offset", "cpg_agnostic"])
    p.add_argument("--arch", choices=["snn", "ann"], default="snn")
    p.add_argument("--est-sizes", default="150,150")
    p.add_argument("--ctrl-size", type=int, default=130)
    p.add_argument("--window", type=int, default=2500)
    p.add_argument("--stride", type=int, default=400)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--learning-rate", type=float, default=5e-3)
    p.add_argument("--kappa", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("assemble", help="combine subnet checkpoints")
    p.add_argument("--estimator", required=True)
    p.add_argument("--controller", required=True)
    p.add_argument("--mode", choices=["dense", "event_driven"],
                   default="dense")
    p.add_argument("--variant")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("eval", help="offline replay metrics")
    p.add_argument("--network")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--expert", action="store_true",
                   help="evaluate the stored expert labels against "
                        "themselves (sanity: zero error)")
    p.add_argument("--variant")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export", help="emit the C artifact")
    p.add_argument("--network", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["dense", "event_driven"],
                   default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("validate", help="differential artifact validation")
    p.add_argument("--network", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--harness", default=None,
                   help="path to harness.c (defaults to ./harness/harness.c)")
    p.add_argument("--ticks", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="MAC and latency comparison")
    p.add_argument("--network", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ticks", type=int, default=1000)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--with-ann", action="store_true")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser)
        return args.func(args)
    except (ContractViolation, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
