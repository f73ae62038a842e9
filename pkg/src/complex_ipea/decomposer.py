"""Gray-code decomposition of uniformly controlled rotations.

A UCR with ``k`` controls becomes ``2**k`` single-qubit rotations on the target
interleaved with ``2**k`` CNOTs. Rotation ``j`` is followed by a CNOT whose
control is the qubit whose bit flips between Gray codes ``j`` and ``j + 1``
(cyclically, so the last CNOT returns to pattern 0 and the chain closes).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .circuit import CNOT, UCR, Circuit, Controlled, Hadamard, Ry, Rz, Scale, Swap

MAX_CONTROLS = 10


def gray_code(i: int) -> int:
    if i < 0:
        raise ValueError("gray_code needs a non-negative index")
    return i ^ (i >> 1)


def build_M(k: int) -> np.ndarray:
    """Sign matrix ``M[i, j] = (-1)**popcount(i & gray(j))`` (0-based indices)."""
    if not 0 <= k <= MAX_CONTROLS:
        raise ValueError(f"k must be in 0..{MAX_CONTROLS}, got {k}")
    n = 2 ** k
    j = np.arange(n, dtype=np.int64)
    x = j[:, None] & (j ^ (j >> 1))[None, :]
    for shift in (8, 4, 2, 1):   # fold to the parity bit (k <= 10 fits in 16 bits)
        x ^= x >> shift
    return 1 - 2 * (x & 1)


def solve_angles(phi) -> np.ndarray:
    """Rotation angles of the decomposed circuit from the per-pattern angles.

    Solves ``M theta = phi`` using ``M^{-1} = 2**-k M^T``.
    """
    phi = np.asarray(phi, dtype=float)
    k = int(phi.shape[0]).bit_length() - 1
    if phi.ndim != 1 or 2 ** k != phi.shape[0]:
        raise ValueError(f"angle vector length must be a power of two, got {phi.shape}")
    return build_M(k).T @ phi / 2 ** k


@dataclass(frozen=True)
class DecomposedUCR:
    axis: str
    target: int
    theta: tuple
    cnot_controls: tuple

    def gates(self) -> list:
        rot = Ry if self.axis == "y" else Rz
        out = []
        for t, c in zip(self.theta, self.cnot_controls):
            out.append(rot(float(t), self.target))
            if c is not None:
                out.append(CNOT(c, self.target))
        return out


def cnot_controls(controls) -> tuple:
    """Control qubit of each CNOT in the cyclic Gray-code chain."""
    k = len(controls)
    n = 2 ** k
    if k == 0:
        return (None,)
    out = []
    for j in range(n):
        flipped = gray_code(j) ^ gray_code((j + 1) % n)
        bit = flipped.bit_length() - 1
        # pattern bit `bit` (LSB = 0) belongs to controls[k - 1 - bit]
        out.append(controls[k - 1 - bit])
    return tuple(out)


def decompose_ucr(g) -> DecomposedUCR:
    """Decompose a UCR, or a positively controlled UCR, into rotations and CNOTs.

    Extra positive controls are folded in as leading UCR controls with zero angles
    on every pattern where they are not all 1.
    """
    g = _absorb_controls(g)
    if not isinstance(g, UCR):
        raise TypeError(f"expected a UCR gate, got {g!r}")
    if len(g.controls) > MAX_CONTROLS:
        raise ValueError(f"at most {MAX_CONTROLS} controls supported")
    theta = solve_angles(g.angles)
    return DecomposedUCR(g.axis, g.target, tuple(float(t) for t in theta),
                         cnot_controls(g.controls))


def _absorb_controls(g):
    if not (isinstance(g, Controlled) and isinstance(g.inner, UCR)):
        return g
    inner = g.inner
    ctrl = tuple(q for q, _ in g.controls)
    pattern = 0
    for _, pol in g.controls:
        pattern = 2 * pattern + pol
    block = len(inner.angles)
    angles = [0.0] * (block * 2 ** len(ctrl))
    angles[pattern * block:(pattern + 1) * block] = inner.angles
    return UCR(inner.axis, angles, ctrl + inner.controls, inner.target)


def decompose_circuit(circuit: Circuit) -> Circuit:
    """Expand every UCR (plain or controlled) into rotations and CNOTs."""
    gates = []
    for g in circuit.gates:
        if isinstance(g, UCR) or (isinstance(g, Controlled) and isinstance(g.inner, UCR)):
            gates.extend(decompose_ucr(g).gates())
        else:
            gates.append(g)
    return Circuit(circuit.qubits, gates)


_KIND = {Hadamard: "H", Ry: "RY", Rz: "RZ", CNOT: "CNOT", Swap: "SWAP", Scale: "SCALE"}


def gate_counts(circuit: Circuit) -> dict:
    """Gate tally after expanding UCRs; controlled gates count as their inner kind.

    Keys: H, RY, RZ, CNOT, SWAP, SCALE, plus ``rotations`` = RY + RZ.
    """
    counts = Counter({k: 0 for k in _KIND.values()})
    for g in decompose_circuit(circuit).gates:
        inner = g.inner if isinstance(g, Controlled) else g
        counts[_KIND[type(inner)]] += 1
    counts["rotations"] = counts["RY"] + counts["RZ"]
    return dict(counts)
