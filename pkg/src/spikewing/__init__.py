"""Spiking-network flight control stack.

Subpackages:
    snn       float32 runtime for cascaded recurrent spiking networks
              (dense and event-driven execution)
    expert    demonstration generator: oscillator, attitude filter, PID,
              synthetic trajectories and IMU, expert label replay
    training  surrogate-gradient BPTT behavioral cloning plus the
              recurrent ReLU baseline
    codegen   static C source emission and differential validation
    bench     inference cost measurement (MAC counts, per-tick latency)
"""

__version__ = "0.1.0"
