"""Networks, realizations and closed-loop simulation."""

from .network import TOPOLOGIES, Network, build_network
from .objectives import PolynomialSignals, Quadratic, Tanh, ramp_signals, zero_objective
from .realize import StateSpace, append, identity, markov_from_transfer, realize, series, static
from .simulate import (DecouplingReport, ProbeResult, Trajectory, eigen_decoupling, unfactored_system,
                       factored_system, internal_state_probe, linear_fit_r2, run_loop, scalar_loop,
                       simulate_consensus, simulate_distributed, simulate_optimization)

__all__ = [
    "TOPOLOGIES", "Network", "build_network", "PolynomialSignals", "Quadratic", "Tanh", "ramp_signals",
    "zero_objective", "StateSpace", "append", "identity", "markov_from_transfer", "realize", "series",
    "static", "DecouplingReport", "ProbeResult", "Trajectory", "eigen_decoupling", "unfactored_system",
    "factored_system", "internal_state_probe", "linear_fit_r2", "run_loop", "scalar_loop",
    "simulate_consensus", "simulate_distributed", "simulate_optimization",
]
