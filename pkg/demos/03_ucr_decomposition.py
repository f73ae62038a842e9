"""
Decomposing uniformly controlled rotations
==========================================

Formation is a pair of uniformly controlled rotations: one rotation angle for
each pattern of the control qubits. With k controls they expand into 2**k
plain rotations and 2**k CNOTs. The CNOT controls follow a Gray code, and the
rotation angles solve the linear system M theta = phi.
"""

# %%
import numpy as np

from complex_ipea import circuit as qc
from complex_ipea import linalg, resonance
from complex_ipea.decomposer import build_M, cnot_controls, decompose_ucr, gate_counts, gray_code
from complex_ipea.encoder import Scaling, build_ipea_iteration, build_universal, element_angles
from complex_ipea.gatelist import format_gate_list

print("gray codes:", [format(gray_code(i), "03b") for i in range(8)])
print("M for k = 2:\n", build_M(2))
print("CNOT controls for controls (0, 1, 2):", cnot_controls((0, 1, 2)))

# %% [markdown]
# Inside a phase-estimation round the formation rotations are also controlled
# by the phase qubit. Absorbing that control gives a UCR with three controls:
# the four patterns with the phase qubit at 0 get angle 0, the other four get
# the per-element angles of U / ||U||_1.

# %%
U = linalg.expm(1j * resonance.HAMILTONIAN)
enc = build_universal(U, Scaling.ONE_NORM)
raw = [element_angles(u) for u in enc.scaled.reshape(-1)]
phi_y = [0.0] * 4 + [t[0] for t in raw]
phi_z = [0.0] * 4 + [t[1] for t in raw]
ucr_y = qc.UCR("y", phi_y, (0, 1, 2), 3)
ucr_z = qc.UCR("z", phi_z, (0, 1, 2), 3)
dy, dz = decompose_ucr(ucr_y), decompose_ucr(ucr_z)
print(f"{'Ry angle':>10} {'Rz angle':>10}  CNOT control")
for ty, tz, c in zip(dy.theta, dz.theta, dy.cnot_controls):
    print(f"{ty:10.4f} {tz:10.4f}  q{c}")

for ucr, dec in ((ucr_y, dy), (ucr_z, dz)):
    dense = qc.circuit_matrix(qc.Circuit(4, dec.gates()))
    print(f"axis {ucr.axis}: max |decomposed - UCR| =",
          f"{np.abs(dense - qc.expand(ucr, 4)).max():.1e}")

# %% [markdown]
# Gate budget of one full round, after every UCR is expanded.

# %%
round_circuit = build_ipea_iteration(enc, -2.51572849)
print(gate_counts(round_circuit))
print(format_gate_list(round_circuit))
