"""Gate model and a small statevector engine.

Qubit 0 is the most significant bit of the basis-state index (the top wire of a
circuit diagram). States are 1-D complex numpy arrays of length ``2**q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, sin, sqrt

import numpy as np


class PostSelectionError(RuntimeError):
    """The post-selection condition has zero probability."""


# --------------------------------------------------------------------- gates

@dataclass(frozen=True)
class Hadamard:
    target: int


@dataclass(frozen=True)
class Ry:
    angle: float
    target: int


@dataclass(frozen=True)
class Rz:
    angle: float
    target: int


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


@dataclass(frozen=True)
class Swap:
    a: int
    b: int


@dataclass(frozen=True)
class Scale:
    dim: int
    target: int


@dataclass(frozen=True)
class UCR:
    """Uniformly controlled rotation.

    ``angles[i]`` is used when the control qubits, read as a binary number with
    ``controls[0]`` most significant, equal ``i``.
    """
    axis: str
    angles: tuple
    controls: tuple
    target: int

    def __post_init__(self):
        if self.axis not in ("y", "z"):
            raise ValueError(f"UCR axis must be 'y' or 'z', got {self.axis!r}")
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        object.__setattr__(self, "controls", tuple(self.controls))
        if len(self.angles) != 2 ** len(self.controls):
            raise ValueError(
                f"UCR with {len(self.controls)} controls needs {2 ** len(self.controls)} "
                f"angles, got {len(self.angles)}")


@dataclass(frozen=True)
class Controlled:
    """``inner`` applied only where every ``(qubit, polarity)`` control matches."""
    inner: object
    controls: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ctrls = tuple((int(q), int(p)) for q, p in self.controls)
        inner = self.inner
        if isinstance(inner, Controlled):
            ctrls = ctrls + inner.controls
            inner = inner.inner
        if any(p not in (0, 1) for _, p in ctrls):
            raise ValueError("control polarity must be 0 or 1")
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "controls", ctrls)


def controlled(g, *controls) -> Controlled:
    """``controlled(g, (0, 1), (3, 0))`` – shorthand constructor."""
    return Controlled(g, tuple(controls))


def gate_qubits(g) -> tuple:
    """All qubits a gate touches, controls included."""
    if isinstance(g, (Hadamard, Ry, Rz, Scale)):
        return (g.target,)
    if isinstance(g, CNOT):
        return (g.control, g.target)
    if isinstance(g, Swap):
        return (g.a, g.b)
    if isinstance(g, UCR):
        return g.controls + (g.target,)
    if isinstance(g, Controlled):
        return tuple(q for q, _ in g.controls) + gate_qubits(g.inner)
    raise TypeError(f"unknown gate {g!r}")


def validate(g, qubits: int) -> None:
    qs = gate_qubits(g)
    if len(set(qs)) != len(qs):
        raise ValueError(f"repeated qubit index in {g!r}")
    for q in qs:
        if not 0 <= q < qubits:
            raise IndexError(f"qubit {q} out of range for a {qubits}-qubit register")


# ------------------------------------------------------------- gate matrices

_H = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(0.5j * theta), 0], [0, np.exp(-0.5j * theta)]])


def scale_matrix(dim: int) -> np.ndarray:
    # (1,1) entry 1/sqrt(N); off-diagonal sqrt(1 - 1/N) keeps it unitary
    a = 1 / sqrt(dim)
    b = sqrt(1 - 1 / dim)
    return np.array([[a, b], [-b, a]], dtype=complex)


def _rotation(axis: str, theta: float) -> np.ndarray:
    return ry_matrix(theta) if axis == "y" else rz_matrix(theta)


def _local_matrix(g) -> np.ndarray:
    """Matrix of ``g`` on its own qubits in ``gate_qubits`` order."""
    if isinstance(g, Hadamard):
        return _H.copy()
    if isinstance(g, Ry):
        return ry_matrix(g.angle)
    if isinstance(g, Rz):
        return rz_matrix(g.angle)
    if isinstance(g, Scale):
        return scale_matrix(g.dim)
    if isinstance(g, CNOT):
        m = np.eye(4, dtype=complex)
        m[2:, 2:] = _X
        return m
    if isinstance(g, Swap):
        return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    if isinstance(g, UCR):
        blocks = [_rotation(g.axis, a) for a in g.angles]
        m = np.zeros((2 * len(blocks),) * 2, dtype=complex)
        for i, b in enumerate(blocks):
            m[2 * i:2 * i + 2, 2 * i:2 * i + 2] = b
        return m
    if isinstance(g, Controlled):
        inner = _local_matrix(g.inner)
        k = len(g.controls)
        d = inner.shape[0]
        m = np.eye(d * 2 ** k, dtype=complex)
        pattern = 0
        for _, pol in g.controls:
            pattern = 2 * pattern + pol
        m[pattern * d:(pattern + 1) * d, pattern * d:(pattern + 1) * d] = inner
        return m
    raise TypeError(f"unknown gate {g!r}")


def gate_matrix(g) -> np.ndarray:
    """Unitary of ``g`` in the computational basis of its own qubits.

    Qubit order is ``gate_qubits(g)``: controls first (in listed order), then the
    target(s). Single-qubit gates give their 2x2 matrix.
    """
    return _local_matrix(g)


def expand(g, qubits: int) -> np.ndarray:
    """Dense ``2**qubits`` square matrix of ``g`` acting inside a larger register."""
    dim = 2 ** qubits
    cols = np.eye(dim, dtype=complex)
    out = np.empty_like(cols)
    for j in range(dim):
        out[:, j] = apply(cols[:, j], g)
    return out


# --------------------------------------------------------------- application

def _n_qubits(state: np.ndarray) -> int:
    q = int(state.shape[0]).bit_length() - 1
    if 2 ** q != state.shape[0]:
        raise ValueError(f"state length {state.shape[0]} is not a power of two")
    return q


def _apply_local(psi: np.ndarray, matrix: np.ndarray, targets: tuple) -> np.ndarray:
    """Contract a ``2**t`` matrix into the tensor ``psi`` along ``targets``."""
    t = len(targets)
    q = psi.ndim
    moved = np.moveaxis(psi, targets, range(q - t, q))
    shape = moved.shape
    flat = moved.reshape(-1, 2 ** t) @ matrix.T
    return np.moveaxis(flat.reshape(shape), range(q - t, q), targets)


def _apply_ucr(psi: np.ndarray, g: UCR) -> np.ndarray:
    k = len(g.controls)
    q = psi.ndim
    axes = g.controls + (g.target,)
    moved = np.moveaxis(psi, axes, range(q - k - 1, q))
    shape = moved.shape
    blocks = np.stack([_rotation(g.axis, a) for a in g.angles])  # (2**k, 2, 2)
    flat = moved.reshape(-1, 2 ** k, 2)
    out = np.einsum("pij,rpj->rpi", blocks, flat)
    return np.moveaxis(out.reshape(shape), range(q - k - 1, q), axes)


def _apply_tensor(psi: np.ndarray, g) -> np.ndarray:
    if isinstance(g, Controlled):
        idx = [slice(None)] * psi.ndim
        for c, pol in g.controls:
            idx[c] = pol
        idx = tuple(idx)
        ctrl = {c for c, _ in g.controls}
        # qubit numbering inside the sliced sub-tensor
        remap = {old: new for new, old in
                 enumerate(q for q in range(psi.ndim) if q not in ctrl)}
        out = psi.copy()
        out[idx] = _apply_tensor(psi[idx], relabel(g.inner, remap))
        return out
    if isinstance(g, UCR):
        return _apply_ucr(psi, g)
    if isinstance(g, Swap):
        return np.swapaxes(psi, g.a, g.b)
    return _apply_local(psi, _local_matrix(g), gate_qubits(g))


def relabel(g, remap: dict):
    if isinstance(g, Hadamard):
        return Hadamard(remap[g.target])
    if isinstance(g, Scale):
        return Scale(g.dim, remap[g.target])
    if isinstance(g, Ry):
        return Ry(g.angle, remap[g.target])
    if isinstance(g, Rz):
        return Rz(g.angle, remap[g.target])
    if isinstance(g, CNOT):
        return CNOT(remap[g.control], remap[g.target])
    if isinstance(g, Swap):
        return Swap(remap[g.a], remap[g.b])
    if isinstance(g, UCR):
        return UCR(g.axis, g.angles, tuple(remap[c] for c in g.controls), remap[g.target])
    if isinstance(g, Controlled):
        return Controlled(relabel(g.inner, remap),
                          tuple((remap[c], p) for c, p in g.controls))
    raise TypeError(f"unknown gate {g!r}")


def apply(state, g) -> np.ndarray:
    """Return a new state with gate ``g`` applied."""
    state = np.asarray(state, dtype=complex)
    q = _n_qubits(state)
    validate(g, q)
    psi = state.reshape((2,) * q)
    return np.ascontiguousarray(_apply_tensor(psi, g)).reshape(-1)


# ------------------------------------------------------------------- circuits

@dataclass(frozen=True)
class Circuit:
    qubits: int
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            validate(g, self.qubits)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.qubits != self.qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.qubits, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)


def run(circuit: Circuit, state) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (2 ** circuit.qubits,):
        raise ValueError(
            f"state of length {state.shape} does not fit a {circuit.qubits}-qubit circuit")
    for g in circuit.gates:
        state = apply(state, g)
    return state


def circuit_matrix(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit (columns are images of basis states)."""
    dim = 2 ** circuit.qubits
    return np.stack([run(circuit, col) for col in np.eye(dim, dtype=complex)], axis=1)


def basis_state(qubits: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(2 ** qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def embed(vector, qubits: int) -> np.ndarray:
    """Place ``vector`` on the low-order (bottom) qubits with the rest in |0>."""
    v = np.asarray(vector, dtype=complex)
    psi = np.zeros(2 ** qubits, dtype=complex)
    psi[:v.shape[0]] = v
    return psi


# ---------------------------------------------------------------- measurement

@dataclass(frozen=True)
class Marginal:
    probs: np.ndarray   # normalized over the selected outcomes
    masses: np.ndarray  # unnormalized probabilities, same indexing as probs
    mass: float         # total post-selection success probability


def probabilities(state, qubits=None, condition=None) -> Marginal:
    """Born-rule marginal over ``qubits`` post-selected on ``condition``.

    ``condition`` maps qubit index to the required bit value. The outcome index
    reads ``qubits`` as a binary number with ``qubits[0]`` most significant.
    Raises PostSelectionError if the condition has zero probability.
    """
    state = np.asarray(state, dtype=complex)
    q = _n_qubits(state)
    qubits = tuple(range(q)) if qubits is None else tuple(qubits)
    condition = dict(condition or {})
    if set(qubits) & set(condition):
        raise ValueError("condition qubits must be disjoint from the measured subset")
    p = (np.abs(state) ** 2).reshape((2,) * q)
    idx = [slice(None)] * q
    for c, bit in condition.items():
        if not 0 <= c < q:
            raise IndexError(f"qubit {c} out of range")
        idx[c] = int(bit)
    sub = p[tuple(idx)]
    remaining = [i for i in range(q) if i not in condition]
    others = tuple(k for k, i in enumerate(remaining) if i not in qubits)
    masses = sub.sum(axis=others) if others else sub
    # summed axes come out in ascending qubit order; put them in `qubits` order
    ascending = sorted(qubits)
    masses = np.transpose(masses, [ascending.index(i) for i in qubits])
    masses = masses.reshape(-1)
    total = float(masses.sum())
    if total <= 0.0:
        raise PostSelectionError(f"post-selection on {condition} has zero probability")
    return Marginal(masses / total, masses, total)


def sample(state, shots: int, seed=None) -> np.ndarray:
    """Multinomial outcome counts over all ``2**q`` basis states."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = np.abs(np.asarray(state, dtype=complex)) ** 2
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, p)
