"""Plain-text gate list, one gate per line.

::

    QUBITS 4
    H q0
    RY(0.52359877559829882) q2 ctrl+ q0
    RZ(-2.5157284921041301) q0
    CNOT q1 q3
    SWAP q2 q3
    SCALE(2) q1 ctrl- q0
    UCRY(0,0,1.5,2.25) q3 by q1 q2

Angles are written with 17 significant digits so a file re-parses to the same
floating-point values. ``ctrl+``/``ctrl-`` mark positive and negative controls.
Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import re

from .circuit import CNOT, UCR, Circuit, Controlled, Hadamard, Ry, Rz, Scale, Swap


class GateListError(ValueError):
    pass


def _num(x: float) -> str:
    return f"{x:.17g}"


def _q(i: int) -> str:
    return f"q{i}"


def format_gate(g) -> str:
    controls = ()
    if isinstance(g, Controlled):
        controls = g.controls
        g = g.inner
    if isinstance(g, Hadamard):
        text = f"H {_q(g.target)}"
    elif isinstance(g, Ry):
        text = f"RY({_num(g.angle)}) {_q(g.target)}"
    elif isinstance(g, Rz):
        text = f"RZ({_num(g.angle)}) {_q(g.target)}"
    elif isinstance(g, CNOT):
        text = f"CNOT {_q(g.control)} {_q(g.target)}"
    elif isinstance(g, Swap):
        text = f"SWAP {_q(g.a)} {_q(g.b)}"
    elif isinstance(g, Scale):
        text = f"SCALE({g.dim}) {_q(g.target)}"
    elif isinstance(g, UCR):
        angles = ",".join(_num(a) for a in g.angles)
        text = f"UCR{g.axis.upper()}({angles}) {_q(g.target)}"
        if g.controls:
            text += " by " + " ".join(_q(c) for c in g.controls)
    else:
        raise TypeError(f"cannot serialize {g!r}")
    for c, pol in controls:
        text += f" ctrl{'+' if pol else '-'} {_q(c)}"
    return text


def format_gate_list(circuit: Circuit) -> str:
    lines = [f"QUBITS {circuit.qubits}"]
    lines += [format_gate(g) for g in circuit.gates]
    return "\n".join(lines) + "\n"


_HEAD = re.compile(r"^([A-Z]+)(?:\(([^)]*)\))?$")
_QUBIT = re.compile(r"^q(\d+)$")


def _qubit(tok: str, lineno: int) -> int:
    m = _QUBIT.match(tok)
    if not m:
        raise GateListError(f"line {lineno}: expected a qubit like q3, got {tok!r}")
    return int(m.group(1))


def parse_gate(line: str, lineno: int = 0):
    tokens = line.split()
    m = _HEAD.match(tokens[0])
    if not m:
        raise GateListError(f"line {lineno}: cannot parse {tokens[0]!r}")
    name, arg = m.group(1), m.group(2)
    rest = tokens[1:]

    controls = []
    while len(rest) >= 2 and rest[-2] in ("ctrl+", "ctrl-"):
        controls.insert(0, (_qubit(rest[-1], lineno), 1 if rest[-2] == "ctrl+" else 0))
        rest = rest[:-2]

    ucr_controls = ()
    if "by" in rest:
        at = rest.index("by")
        ucr_controls = tuple(_qubit(t, lineno) for t in rest[at + 1:])
        rest = rest[:at]
    qs = [_qubit(t, lineno) for t in rest]

    def need(count, has_arg):
        if len(qs) != count or (arg is not None) != has_arg:
            raise GateListError(f"line {lineno}: malformed {name} gate: {line.strip()!r}")

    try:
        if name == "H":
            need(1, False)
            g = Hadamard(qs[0])
        elif name in ("RY", "RZ"):
            need(1, True)
            g = (Ry if name == "RY" else Rz)(float(arg), qs[0])
        elif name == "CNOT":
            need(2, False)
            g = CNOT(qs[0], qs[1])
        elif name == "SWAP":
            need(2, False)
            g = Swap(qs[0], qs[1])
        elif name == "SCALE":
            need(1, True)
            g = Scale(int(arg), qs[0])
        elif name in ("UCRY", "UCRZ"):
            need(1, True)
            angles = tuple(float(a) for a in arg.split(","))
            g = UCR(name[-1].lower(), angles, ucr_controls, qs[0])
        else:
            raise GateListError(f"line {lineno}: unknown gate {name!r}")
    except ValueError as exc:
        if isinstance(exc, GateListError):
            raise
        raise GateListError(f"line {lineno}: {exc}") from exc
    if ucr_controls and not isinstance(g, UCR):
        raise GateListError(f"line {lineno}: 'by' is only valid for UCR gates")
    return Controlled(g, tuple(controls)) if controls else g


def parse_gate_list(text: str) -> Circuit:
    qubits = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("QUBITS"):
            try:
                qubits = int(line.split()[1])
            except (IndexError, ValueError) as exc:
                raise GateListError(f"line {lineno}: bad QUBITS header") from exc
            continue
        gates.append(parse_gate(line, lineno))
    if qubits is None:
        raise GateListError("missing QUBITS header")
    return Circuit(qubits, gates)
