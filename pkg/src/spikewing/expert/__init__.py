from .angles import wrap_angle, yaw_rate_target, integrate_yaw
from .cpg import CPGParams, cpg_step, offsets_to_wing_commands, angle_to_pwm
from .pid import PIDGains, PidState, pid_step
from .madgwick import AttitudeFilter, gyro_bias_calibrate
from .rls import RlsConstantFit, rls_filter_pitch
from .synth import SynthConfig, synth_trajectory, synth_imu
from .labels import ExpertConfig, FlightLog, generate_expert_labels, make_flight_log
from .logio import write_flight_csv, read_flight_csv, FLIGHT_COLUMNS

__all__ = [
    "wrap_angle", "yaw_rate_target", "integrate_yaw",
    "CPGParams", "cpg_step", "offsets_to_wing_commands", "angle_to_pwm",
    "PIDGains", "PidState", "pid_step",
    "AttitudeFilter", "gyro_bias_calibrate",
    "RlsConstantFit", "rls_filter_pitch",
    "SynthConfig", "synth_trajectory", "synth_imu",
    "ExpertConfig", "FlightLog", "generate_expert_labels", "make_flight_log",
    "write_flight_csv", "read_flight_csv", "FLIGHT_COLUMNS",
]
