"""Command-line front end.

    complex-ipea estimate --matrix m.json [--iterations 11] [--scale one-norm] ...
    complex-ipea export   --matrix m.json [--decompose] [--iteration] --out gates.txt
    complex-ipea example  [--out report.json]

Exit codes: 0 success, 1 usage or I/O error, 2 numerical or protocol failure
(a diagnostic JSON document is written in that case).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import linalg, resonance
from .circuit import PostSelectionError
from .decomposer import decompose_circuit, gate_counts
from .encoder import ElementTooLargeError, Scaling, ScalingPolicy, build_ipea_iteration, \
    build_universal, scale_matrix
from .gatelist import format_gate_list
from .ipea import Estimator, IPEAConfig, IPEAResult, Sign, hamiltonian_eigenvalue, run_ipea

REPORT_VERSION = 1


class UsageError(Exception):
    pass


class ProtocolError(Exception):
    pass


@dataclass
class MatrixFile:
    n: int
    matrix: np.ndarray
    eigenvector: np.ndarray | None = None
    hamiltonian: bool = False


def _pairs(rows, what: str) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.shape[-1:] != (2,):
        raise UsageError(f"{what}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_matrix_file(doc: dict) -> MatrixFile:
    if not isinstance(doc, dict) or "matrix" not in doc or "n" not in doc:
        raise UsageError("matrix file needs 'n' and 'matrix' fields")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise UsageError(f"'n' must be a positive integer, got {n!r}")
    dim = 2 ** n
    mat = _pairs(doc["matrix"], "matrix")
    if mat.shape != (dim, dim):
        raise UsageError(f"matrix must be {dim}x{dim} for n={n}, got shape {mat.shape}")
    vec = None
    if doc.get("eigenvector") is not None:
        vec = _pairs(doc["eigenvector"], "eigenvector")
        if vec.shape != (dim,):
            raise UsageError(f"eigenvector must have length {dim}, got shape {vec.shape}")
    return MatrixFile(n, mat, vec, bool(doc.get("hamiltonian", False)))


def load_matrix_file(path: str) -> MatrixFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    return parse_matrix_file(doc)


def matrix_document(matrix, eigenvector=None, hamiltonian=False) -> dict:
    """Inverse of parse_matrix_file, for writing MatrixFile JSON."""
    mat = np.asarray(matrix, dtype=complex)
    doc = {"n": int(mat.shape[0]).bit_length() - 1,
           "matrix": [[[z.real, z.imag] for z in row] for row in mat]}
    if eigenvector is not None:
        doc["eigenvector"] = [[z.real, z.imag] for z in np.asarray(eigenvector, dtype=complex)]
    if hamiltonian:
        doc["hamiltonian"] = True
    return doc


def _builtin() -> MatrixFile:
    return MatrixFile(1, resonance.HAMILTONIAN.copy(), None, True)


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _digest(mat: np.ndarray) -> str:
    canon = json.dumps([_pair(z) for z in mat.reshape(-1)], separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


def _propagator(mf: MatrixFile, sign: Sign) -> np.ndarray:
    if not mf.hamiltonian:
        return mf.matrix
    return linalg.expm((1j if sign is Sign.PLUS else -1j) * mf.matrix)


def build_report(mf: MatrixFile, source: str, cfg: IPEAConfig, eigvec: str = "oracle",
                 seed: int = 0) -> dict:
    sign = cfg.hamiltonian_sign
    u = _propagator(mf, sign)
    if eigvec == "file":
        if mf.eigenvector is None:
            raise UsageError("--eigvec file needs an 'eigenvector' entry in the matrix file")
        psi = mf.eigenvector
    else:
        try:
            psi = linalg.eig_dominant(u, seed=seed).vector
        except linalg.ConvergenceError as exc:
            raise ProtocolError(f"eigenvector oracle failed: {exc}") from exc
    psi = psi / np.linalg.norm(psi)
    oracle = complex(np.vdot(psi, u @ psi))

    result: IPEAResult = run_ipea(u, psi, cfg)
    lam = result.eigenvalue
    body = build_ipea_iteration(build_universal(u, cfg.policy), 0.0)
    report = {
        "version": REPORT_VERSION,
        "input": {"source": source, "digest": _digest(mf.matrix), "n": mf.n,
                  "hamiltonian": mf.hamiltonian},
        "scaling": {"policy": cfg.policy.kind.value,
                    "per_iteration": cfg.policy.per_iteration, "mu": result.mu},
        "mode": {"kind": "exact" if cfg.shots is None else "shots",
                 "shots": cfg.shots, "seed": cfg.seed},
        "estimator": cfg.estimator.value,
        "noise_floor": cfg.noise_floor,
        "bits": "".join(str(b) for b in result.bits),
        "phi": result.phi,
        "r": result.r,
        "r_scaled": result.r_scaled,
        "lambda": _pair(lam),
        "magnitude_flagged": result.magnitude_flagged,
        "energy": None,
        "iterations": [
            {"k": rec.k, "bit_index": rec.bit_index, "power": rec.power, "w": rec.w,
             "P0": rec.p0, "P1": rec.p1, "mass": rec.mass, "bit": rec.bit,
             "tie": rec.tie, "r_estimate": rec.r_estimate, "accepted": rec.accepted}
            for rec in result.iterations],
        "oracle": {"lambda": _pair(oracle), "abs_error": abs(lam - oracle)},
        "gate_counts": gate_counts(body),
    }
    if result.energy is not None:
        oracle_e = hamiltonian_eigenvalue(oracle, sign)
        report["energy"] = _pair(result.energy)
        report["oracle"]["energy"] = _pair(oracle_e)
        report["oracle"]["energy_abs_error"] = abs(result.energy - oracle_e)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _config(args) -> IPEAConfig:
    if args.mode == "shots" and args.shots is None:
        raise UsageError("--mode shots needs --shots")
    return IPEAConfig(
        m=args.iterations,
        policy=ScalingPolicy(Scaling(args.scale), args.per_iteration),
        shots=args.shots if args.mode == "shots" else None,
        seed=args.seed,
        estimator=Estimator(args.estimator),
        hamiltonian_sign=Sign(args.sign),
        energy=args.hamiltonian,
    )


def _source(args) -> tuple[MatrixFile, str]:
    if getattr(args, "example", False):
        return _builtin(), "builtin:resonance"
    if args.matrix is None:
        raise UsageError("--matrix is required")
    mf = load_matrix_file(args.matrix)
    return mf, args.matrix


def cmd_estimate(args) -> str:
    mf, source = _source(args)
    if mf.hamiltonian:
        args.hamiltonian = True
    return dumps(build_report(mf, source, _config(args), args.eigvec, args.seed or 0))


def cmd_example(args) -> str:
    cfg = IPEAConfig(m=11, policy=ScalingPolicy(Scaling.ONE_NORM), energy=True)
    report = build_report(_builtin(), "builtin:resonance", cfg)
    report["reference"] = {
        "reference_lambda": _pair(resonance.REPORTED_EIGENVALUE),
        "reference_energy": _pair(resonance.REPORTED_ENERGY),
        "lambda_error_vs_reference": abs(complex(*report["lambda"])
                                         - resonance.REPORTED_EIGENVALUE),
        "energy_error_vs_reference": abs(complex(*report["energy"])
                                         - resonance.REPORTED_ENERGY),
    }
    return dumps(report)


def cmd_export(args) -> str:
    mf, _ = _source(args)
    u = _propagator(mf, Sign(args.sign))
    if args.power < 1:
        raise UsageError("--power must be >= 1")
    scaled, _ = scale_matrix(u, Scaling(args.scale))
    enc = build_universal(linalg.mat_power(scaled, args.power), Scaling.NONE)
    circuit = build_ipea_iteration(enc, args.w) if args.iteration else enc.circuit
    if args.decompose:
        circuit = decompose_circuit(circuit)
    return format_gate_list(circuit)


def _add_matrix_args(p) -> None:
    p.add_argument("--matrix", help="MatrixFile JSON path")
    p.add_argument("--example", action="store_true",
                   help="use the built-in resonance Hamiltonian instead of --matrix")
    p.add_argument("--scale", default="one-norm", choices=[s.value for s in Scaling])
    p.add_argument("--sign", default="plus", choices=[s.value for s in Sign],
                   help="for Hamiltonian input: U = expm(+iH) (plus) or expm(-iH)")
    p.add_argument("--out", help="output path (default: standard output)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="complex-ipea", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    est = sub.add_parser("estimate", help="run phase estimation on a matrix")
    _add_matrix_args(est)
    est.add_argument("--iterations", type=int, default=11)
    est.add_argument("--per-iteration", action="store_true",
                     help="rescale every matrix power again with the chosen norm")
    est.add_argument("--mode", default="exact", choices=["exact", "shots"])
    est.add_argument("--shots", type=int)
    est.add_argument("--seed", type=int)
    est.add_argument("--estimator", default="paper", choices=[e.value for e in Estimator])
    est.add_argument("--hamiltonian", action="store_true",
                     help="also report E = log(lambda)/i")
    est.add_argument("--eigvec", default="oracle", choices=["oracle", "file"])
    est.set_defaults(func=cmd_estimate)

    exp = sub.add_parser("export", help="write the circuit as a gate list")
    _add_matrix_args(exp)
    exp.add_argument("--decompose", action="store_true", help="expand UCRs into CNOTs")
    exp.add_argument("--iteration", action="store_true",
                     help="export a full phase-estimation round instead of the bare encoding")
    exp.add_argument("--power", type=int, default=1,
                     help="encode (U/mu)**power (default 1)")
    exp.add_argument("--w", type=float, default=0.0, help="feedback angle for --iteration")
    exp.set_defaults(func=cmd_export)

    ex = sub.add_parser("example", help="run the built-in resonance example")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        text = args.func(args)
        _emit(text, args.out)
        return 0
    except UsageError as exc:
        print(f"complex-ipea: error: {exc}", file=sys.stderr)
        return 1
    except (ProtocolError, PostSelectionError, ElementTooLargeError,
            linalg.ConvergenceError, ValueError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        print(f"complex-ipea: {exc}", file=sys.stderr)
        sys.stdout.write(dumps(diag))
        return 2


if __name__ == "__main__":
    sys.exit(main())
