"""Universal circuit embedding an arbitrary complex matrix.

Register layout for an ``N = 2**n`` matrix (``2n + 1`` qubits, qubit 0 on top)::

    qubits 0 .. n-1     replica ancillas (Hadamards in the input block)
    qubit  n            extra ancilla, swapped through the main register
    qubits n+1 .. 2n    main register holding the input vector

The circuit is input modification, then formation (a Rz and a Ry uniformly
controlled rotation on qubit 2n, controlled by qubits 0..2n-1), then combination
(Hadamards on qubits n..2n-1), then a swap chain that moves the row index into
the main register. On input ``|0...0>|alpha>`` the first N output amplitudes are
``kappa * (U / mu) @ alpha`` with ``kappa = 1/N``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import acos, log2

import numpy as np

from . import linalg
from .circuit import UCR, Circuit, Controlled, Hadamard, Rz, Scale, Swap, gate_qubits, relabel

_TOL = 1e-12


class Scaling(str, Enum):
    NONE = "none"
    ONE_NORM = "one-norm"
    INF_NORM = "inf-norm"
    MAX_ABS = "max"


@dataclass(frozen=True)
class ScalingPolicy:
    kind: Scaling = Scaling.ONE_NORM
    per_iteration: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", Scaling(self.kind))


class ElementTooLargeError(ValueError):
    """A matrix element exceeds 1 in magnitude and cannot become a rotation."""


def scale_matrix(u, policy: ScalingPolicy | Scaling | str = Scaling.ONE_NORM):
    """Return ``(u / mu, mu)`` with mu chosen by ``policy``."""
    a = linalg.as_matrix(u)
    kind = policy.kind if isinstance(policy, ScalingPolicy) else Scaling(policy)
    if kind is Scaling.NONE:
        mu = 1.0
    elif kind is Scaling.ONE_NORM:
        mu = linalg.one_norm(a)
    elif kind is Scaling.INF_NORM:
        mu = linalg.inf_norm(a)
    else:
        mu = linalg.max_abs(a)
    if mu == 0.0:
        mu = 1.0
    scaled = a / mu
    if kind is Scaling.MAX_ABS:
        # dividing by the max can land a hair above 1 in floating point
        mags = np.abs(scaled)
        scaled = np.where(mags > 1.0, scaled / mags, scaled)
    big = linalg.max_abs(scaled)
    if big > 1.0 + _TOL:
        raise ElementTooLargeError(
            f"matrix elements must satisfy |u_ij| <= 1 (largest is {big:.6g}); "
            "choose a scaling policy other than 'none'")
    return scaled, mu


def element_angles(u: complex) -> tuple[float, float]:
    """(theta_y, theta_z) with ``(Rz(theta_z) @ Ry(theta_y))[0, 0] == u``.

    Real elements keep their sign in the Ry angle (``theta_z = 0``), which makes
    the rotation block exactly ``[[u, sqrt(1-u**2)], [-sqrt(1-u**2), u]]``.
    """
    u = complex(u)
    mag = abs(u)
    if mag > 1.0 + _TOL:
        raise ElementTooLargeError(f"|u| = {mag!r} exceeds 1")
    if u.imag == 0.0:
        return 2.0 * acos(min(max(u.real, -1.0), 1.0)), 0.0
    return 2.0 * acos(min(mag, 1.0)), 2.0 * float(np.angle(u))


def _dimension(a: np.ndarray) -> int:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got {a.shape}")
    n = int(round(log2(a.shape[0]))) if a.shape[0] > 0 else -1
    if n < 1 or 2 ** n != a.shape[0]:
        raise ValueError(f"matrix dimension must be 2**n with n >= 1, got {a.shape[0]}")
    return n


def build_formation(scaled) -> tuple[UCR, UCR]:
    """The Ry and Rz uniformly controlled rotations, in application order.

    Element ``u[i, j]`` drives the block selected by control pattern
    ``i * N + j`` (row-major linear index).
    """
    a = linalg.as_matrix(scaled)
    n = _dimension(a)
    angles = [element_angles(u) for u in a.reshape(-1)]
    controls = tuple(range(2 * n))
    target = 2 * n
    ry = UCR("y", [t[0] for t in angles], controls, target)
    rz = UCR("z", [t[1] for t in angles], controls, target)
    return ry, rz


def build_combination(n: int) -> Circuit:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Circuit(2 * n + 1, [Hadamard(q) for q in range(n, 2 * n)])


def build_input_mod(n: int) -> Circuit:
    if n < 1:
        raise ValueError("n must be >= 1")
    gates = [Hadamard(q) for q in range(n)]
    gates += [Swap(n, q) for q in range(2 * n, n, -1)]
    return Circuit(2 * n + 1, gates)


def build_final_swap(n: int) -> Circuit:
    return Circuit(2 * n + 1, [Swap(i, n + 1 + i) for i in range(n)])


@dataclass(frozen=True)
class EncodedOperator:
    n: int
    mu: float
    scaled: np.ndarray
    circuit: Circuit

    @property
    def kappa(self) -> float:
        return 2.0 ** -self.n

    @property
    def dim(self) -> int:
        return 2 ** self.n


def build_universal(u, policy: ScalingPolicy | Scaling | str = Scaling.ONE_NORM
                    ) -> EncodedOperator:
    scaled, mu = scale_matrix(u, policy)
    n = _dimension(scaled)
    ry, rz = build_formation(scaled)
    circuit = (build_input_mod(n)
               + Circuit(2 * n + 1, [ry, rz])
               + build_combination(n)
               + build_final_swap(n))
    return EncodedOperator(n, mu, scaled, circuit)


def _shift(g, offset: int):
    """Same gate with every qubit index moved down by ``offset`` wires."""
    return relabel(g, {q: q + offset for q in gate_qubits(g)})


def build_ipea_iteration(enc: EncodedOperator, w: float) -> Circuit:
    """One phase-estimation round on ``2n + 2`` qubits, phase qubit on top.

    Phase 1 runs the whole encoding; phase 0 runs Scale(N) on the first ancilla
    and Hadamards on the next n ancillas, so both branches carry ``kappa`` on the
    chosen (all-ancilla-zero) states. Then Rz(w) and H on the phase qubit.
    """
    n = enc.n
    q = 2 * n + 2
    gates = [Hadamard(0)]
    gates += [Controlled(_shift(g, 1), ((0, 1),)) for g in enc.circuit.gates]
    gates.append(Controlled(Scale(enc.dim, 1), ((0, 0),)))
    gates += [Controlled(Hadamard(a), ((0, 0),)) for a in range(2, n + 2)]
    gates += [Rz(w, 0), Hadamard(0)]
    return Circuit(q, gates)


def ancilla_qubits(n: int, offset: int = 0) -> tuple:
    """Indices of the n + 1 ancillas (post-selected on 0)."""
    return tuple(range(offset, offset + n + 1))
