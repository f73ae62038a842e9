"""
Embedding an arbitrary matrix in a unitary circuit
===================================================

For an N x N matrix (N = 2**n) the circuit uses 2n + 1 qubits: n replica
ancillas, one extra ancilla and the n-qubit main register. On input
|0...0>|alpha> the first N output amplitudes are (1/N) (U/mu) alpha. We build
the circuit for a random 4x4 complex matrix and check that claim.
"""

# %%
import numpy as np

from complex_ipea import circuit as qc
from complex_ipea.encoder import (Scaling, build_combination, build_formation,
                                  build_input_mod, build_universal)

rng = np.random.default_rng(3)
U = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
alpha = rng.normal(size=4) + 1j * rng.normal(size=4)
alpha /= np.linalg.norm(alpha)

enc = build_universal(U, Scaling.ONE_NORM)
print(f"n = {enc.n}, qubits = {enc.circuit.qubits}, mu = {enc.mu:.4f}, kappa = {enc.kappa}")
for g in enc.circuit.gates:
    print("  ", type(g).__name__, qc.gate_qubits(g))

# %% [markdown]
# Input modification spreads alpha over N replicas, interleaved with zeros.

# %%
state = qc.embed(alpha, 5)
after_m = qc.run(build_input_mod(2), state)
print("non-zero amplitudes after input modification:")
for i in np.flatnonzero(np.abs(after_m) > 1e-12):
    print(f"   |{i:05b}>  {after_m[i]:.4f}")

# %% [markdown]
# Formation applies one 2x2 rotation per matrix element. The rotation selected
# by control pattern i*N + j has u_ij as its leading entry, so the dense block
# diagonal reads the scaled matrix back out.

# %%
ry, rz = build_formation(enc.scaled)
F = qc.expand(rz, 5) @ qc.expand(ry, 5)
readback = np.array([F[2 * l, 2 * l] for l in range(16)]).reshape(4, 4)
print("max |readback - U/mu| =", np.abs(readback - enc.scaled).max())

# %% [markdown]
# Combination adds the replicas together with Hadamards. The final swaps move
# the row index into the main register, so the result sits in the first slots.

# %%
out = qc.run(enc.circuit, state)
target = enc.scaled @ alpha / enc.dim
print("first 4 amplitudes:", np.round(out[:4], 5))
print("kappa (U/mu) alpha:", np.round(target, 5))
print("max deviation:", np.abs(out[:4] - target).max())

# %% [markdown]
# Post-selecting the ancillas on zero succeeds with probability
# kappa**2 |(U/mu) alpha|**2. For unitary U and kappa = 1/4 that is 1/16.

# %%
marg = qc.probabilities(out, (3, 4), {0: 0, 1: 0, 2: 0})
print(f"post-selection mass {marg.mass:.5f}, normalized output {np.round(marg.probs, 4)}")
G = qc.circuit_matrix(enc.circuit)
print("unitary:", np.allclose(G.conj().T @ G, np.eye(32)))
print("combination block is H on qubits 2..3:",
      np.allclose(qc.circuit_matrix(build_combination(2))[0, :4], [0.5, 0, 0.5, 0]))
