"""Eigenvalues of non-unitary matrices by iterative phase estimation on a
universal embedding circuit, simulated on a dense statevector."""
from .circuit import (CNOT, UCR, Circuit, Controlled, Hadamard, PostSelectionError, Ry, Rz,
                      Scale, Swap, probabilities, run, sample)
from .decomposer import decompose_circuit, decompose_ucr, gate_counts
from .encoder import EncodedOperator, Scaling, ScalingPolicy, build_ipea_iteration, \
    build_universal
from .gatelist import format_gate_list, parse_gate_list
from .ipea import Estimator, IPEAConfig, IPEAResult, Sign, hamiltonian_eigenvalue, run_ipea
from .linalg import EigenPair, eig_all_small, eig_dominant, expm, mat_power

__version__ = "0.1.0"
