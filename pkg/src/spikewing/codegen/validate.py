"""Differential validation of emitted artifacts against the runtime.

Compiles the generated sources together with the C harness, drives the
binary over a recorded input sequence, and compares: spike-count traces
must match the reference runtime exactly (binary events leave no
tolerance), real-valued outputs within the given absolute tolerance. A
missing compiler or harness is reported as an explicit skip, never as a
silent pass.
"""

import os
import shutil
import subprocess
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation
from ..snn.serialize import spec_hash
from .emit import KERNEL_NAME, write_artifact

CFLAGS = ["-O2", "-ffp-contract=off", "-fno-fast-math", "-std=c11",
          "-Wall", "-Werror"]


@dataclass
class ValidationReport:
    status: str  # "passed" | "failed" | "skipped"
    max_abs_dev: np.ndarray | None = None
    spike_counts_equal: bool | None = None
    tol: float = 0.0
    detail: str = ""

    @property
    def passed(self):
        return self.status == "passed"


def check_manifest_hash(spec, artifact):
    """Reject an artifact whose manifest hash disagrees with the spec."""
    recorded = artifact.manifest.get("spec_sha256")
    actual = spec_hash(spec)
    if recorded != actual:
        raise ContractViolation(
            f"artifact hash {recorded} != network hash {actual}")


def find_compiler():
    for name in ("cc", "gcc", "clang"):
        path = shutil.which(name)
        if path:
            return path
    return None


def compile_with_harness(artifact, harness_src, workdir, compiler=None):
    """Compile harness + artifact into `workdir`; returns binary path."""
    compiler = compiler or find_compiler()
    if compiler is None:
        raise RuntimeError("no C compiler available")
    paths = write_artifact(artifact, workdir)
    binary = os.path.join(workdir, "harness_bin")
    cmd = [compiler, *CFLAGS, "-I", workdir,
           harness_src, paths[KERNEL_NAME], "-o", binary, "-lm"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"compilation failed:\n{proc.stderr}")
    return binary


def write_input_csv(path, imu_seq, refs_seq):
    imu_seq = np.asarray(imu_seq, dtype=np.float32)
    refs_seq = np.asarray(refs_seq, dtype=np.float32)
    with open(path, "w") as fh:
        for t in range(imu_seq.shape[0]):
            row = [repr(float(v)) for v in imu_seq[t]]
            row += [repr(float(v)) for v in refs_seq[t]]
            fh.write(",".join(row) + "\n")


def read_output_csv(path, n_out, n_layers):
    outputs = []
    counts = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != n_out + n_layers:
                raise ContractViolation(
                    f"harness row has {len(parts)} fields, expected "
                    f"{n_out + n_layers}")
            outputs.append([float(v) for v in parts[:n_out]])
            counts.append([int(v) for v in parts[n_out:]])
    return (np.asarray(outputs, dtype=np.float64),
            np.asarray(counts, dtype=np.int64))


def default_harness_source():
    """Harness shipped alongside a source checkout, if present."""
    here = os.path.dirname(os.path.abspath(__file__))
    for up in ("../../..", "../../../.."):
        cand = os.path.normpath(
            os.path.join(here, up, "harness", "harness.c"))
        if os.path.exists(cand):
            return cand
    return None


def validate_export(artifact, imu_seq, refs_seq, ref_outputs, ref_counts,
                    tol=1e-5, harness_src=None, workdir=None):
    """Run the compiled artifact and compare against reference outputs.

    ref_outputs: (T, n_out) physical outputs from the reference runtime.
    ref_counts: (T, n_layers) per-layer spike counts from the runtime.
    """
    harness_src = harness_src or default_harness_source()
    compiler = find_compiler()
    if harness_src is None or not os.path.exists(harness_src):
        return ValidationReport(status="skipped",
                                detail="harness source not available")
    if compiler is None:
        return ValidationReport(status="skipped",
                                detail="no C compiler available")
    if workdir is None:
        raise ContractViolation("workdir required")
    os.makedirs(workdir, exist_ok=True)
    binary = compile_with_harness(artifact, harness_src, workdir, compiler)
    in_csv = os.path.join(workdir, "input.csv")
    out_csv = os.path.join(workdir, "output.csv")
    write_input_csv(in_csv, imu_seq, refs_seq)
    proc = subprocess.run([binary, in_csv, out_csv], capture_output=True,
                          text=True)
    if proc.returncode != 0:
        return ValidationReport(status="failed",
                                detail=f"harness exited {proc.returncode}: "
                                       f"{proc.stderr.strip()}")
    ref_outputs = np.asarray(ref_outputs, dtype=np.float64)
    ref_counts = np.asarray(ref_counts, dtype=np.int64)
    got_out, got_counts = read_output_csv(out_csv, ref_outputs.shape[1],
                                          ref_counts.shape[1])
    if got_out.shape != ref_outputs.shape:
        return ValidationReport(status="failed",
                                detail="output row count mismatch")
    dev = np.abs(got_out - ref_outputs).max(axis=0)
    counts_equal = bool(np.array_equal(got_counts, ref_counts))
    ok = counts_equal and bool(np.all(dev <= tol))
    return ValidationReport(status="passed" if ok else "failed",
                            max_abs_dev=dev, spike_counts_equal=counts_equal,
                            tol=tol,
                            detail="" if ok else "deviation above tolerance"
                            if counts_equal else "spike-count trace mismatch")
