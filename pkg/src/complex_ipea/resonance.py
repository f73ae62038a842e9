"""Two-level non-Hermitian resonance Hamiltonian used as the built-in example.

Two harmonic-oscillator basis functions, potential depth and width both 0.1.
``U = expm(1j * H)`` is non-unitary; its dominant eigenvalue is ``exp(1j * E)``
for the resonance energy ``E``.
"""
import numpy as np

HAMILTONIAN = np.array([
    [1.4216 - 0.1576j, 0.2782 + 0.2802j],
    [0.2782 + 0.2802j, 0.6807 - 0.2361j],
])

# Four-digit reference values, kept for regression checks.
PROPAGATOR = np.array([
    [0.2588 + 1.1214j, -0.4569 - 0.1109j],
    [-0.4569 - 0.1109j, 1.0594 + 0.7394j],
])
EIGENVECTOR = np.array([-0.3790 - 0.1962j, 0.9044])
ENERGY = 0.6249 - 0.4139j
EIGENVALUE = 1.2268 + 0.8849j
BITS = (1, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0)

# Reference outcome of the 11-round estimation.
REPORTED_EIGENVALUE = 1.22255 + 0.88355j
REPORTED_ENERGY = 0.62581 - 0.41105j
