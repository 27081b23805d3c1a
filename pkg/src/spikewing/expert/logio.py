"""Flight log CSV I/O.

One row per 10 ms tick, fixed column order, mandatory header row, units in
leading comment lines. Floats are written with repr(), which round-trips
float64 exactly, so a log can be re-read and replayed bit-for-bit.
"""

import csv

import numpy as np

from .labels import FlightLog

FLIGHT_COLUMNS = [
    "timestamp", "gyro_x", "gyro_y", "gyro_z",
    "accel_x", "accel_y", "accel_z",
    "theta_ref", "psi_ref",
    "roll", "pitch", "pitch_filtered", "yaw", "yaw_rate",
    "offset_pitch", "offset_yaw", "pwm_left", "pwm_right",
]

_UNIT_COMMENTS = [
    "# timestamp: s; gyro_*: rad/s; accel_*: m/s^2",
    "# theta_ref, psi_ref, roll, pitch, pitch_filtered, yaw: degrees",
    "# yaw_rate: degrees/s; offset_*: degrees; pwm_*: microseconds",
]


def _log_columns(log):
    return [
        log.timestamp,
        log.gyro[:, 0], log.gyro[:, 1], log.gyro[:, 2],
        log.accel[:, 0], log.accel[:, 1], log.accel[:, 2],
        log.theta_ref, log.psi_ref,
        log.roll, log.pitch, log.pitch_filtered, log.yaw, log.yaw_rate,
        log.offset_pitch, log.offset_yaw, log.pwm_left, log.pwm_right,
    ]


def write_flight_csv(path, log):
    cols = _log_columns(log)
    with open(path, "w", newline="") as fh:
        for line in _UNIT_COMMENTS:
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(FLIGHT_COLUMNS)
        for i in range(log.n):
            writer.writerow([repr(float(c[i])) for c in cols])


def read_flight_csv(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader)
        if header != FLIGHT_COLUMNS:
            raise ValueError(f"unexpected flight log header in {path}")
        for row in reader:
            rows.append([float(v) for v in row])
    data = np.asarray(rows, dtype=np.float64)
    return FlightLog(
        timestamp=data[:, 0],
        gyro=np.ascontiguousarray(data[:, 1:4]),
        accel=np.ascontiguousarray(data[:, 4:7]),
        theta_ref=data[:, 7], psi_ref=data[:, 8],
        roll=data[:, 9], pitch=data[:, 10], pitch_filtered=data[:, 11],
        yaw=data[:, 12], yaw_rate=data[:, 13],
        offset_pitch=data[:, 14], offset_yaw=data[:, 15],
        pwm_left=data[:, 16], pwm_right=data[:, 17],
    )
