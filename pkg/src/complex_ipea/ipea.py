"""Iterative phase estimation for non-unitary matrices.

The eigenvalue is written ``lambda = r * exp(-2j*pi*phi)``. Each round runs the
encoded circuit for ``(U/mu)**p`` controlled on a phase qubit and reads the
phase-qubit statistics on the chosen (all-ancilla-zero) states. Rounds go from
the largest power ``2**(m-1)`` down to 1; the round with power ``2**(j-1)``
fixes bit ``x_j`` of ``phi = 0.x_1 x_2 ... x_m``. The magnitude ``r`` comes from
how lopsided those statistics are.
"""
from __future__ import annotations

import cmath
import logging
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from math import pi, sqrt

import numpy as np

from . import linalg
from .circuit import PostSelectionError, embed, probabilities, run, sample
from .encoder import EncodedOperator, Scaling, ScalingPolicy, build_ipea_iteration, \
    build_universal, scale_matrix

log = logging.getLogger(__name__)


class Estimator(str, Enum):
    PAPER = "paper"
    RATIO = "ratio"
    MASS_SUM = "mass-sum"


class Sign(str, Enum):
    PLUS = "plus"    # lambda = exp(+iE)
    MINUS = "minus"  # lambda = exp(-iE)


class EigenvectorWarning(UserWarning):
    pass


@dataclass(frozen=True)
class IPEAConfig:
    m: int = 11
    policy: ScalingPolicy = field(default_factory=ScalingPolicy)
    shots: int | None = None  # None: exact probabilities
    seed: int | None = None
    estimator: Estimator = Estimator.PAPER
    noise_floor: float = 1e-3
    hamiltonian_sign: Sign = Sign.PLUS
    energy: bool = False
    stop_when_flat: float | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one iteration")
        if not 0 < self.noise_floor < 1:
            raise ValueError("noise_floor must lie in (0, 1)")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        object.__setattr__(self, "hamiltonian_sign", Sign(self.hamiltonian_sign))


@dataclass(frozen=True)
class IterationRecord:
    k: int
    bit_index: int      # j in x_j
    power: int
    w: float
    p0: float
    p1: float
    mass0: float        # unnormalized chosen-state probability, phase 0
    mass1: float
    bit: int
    tie: bool
    r_estimate: float | None   # estimate of r_scaled ** power (after mu_k)
    accepted: bool
    mu_k: float = 1.0

    @property
    def mass(self) -> float:
        return self.mass0 + self.mass1


@dataclass(frozen=True)
class IPEAResult:
    bits: tuple           # x_1 .. x_m, most significant first
    phi: float
    r_scaled: float
    mu: float
    iterations: tuple
    energy: complex | None = None
    magnitude_flagged: bool = False

    @property
    def r(self) -> float:
        return self.mu * self.r_scaled

    @property
    def eigenvalue(self) -> complex:
        return self.r * cmath.exp(-2j * pi * self.phi)


# ----------------------------------------------------------- building blocks

def feedback_angle(known_bits) -> float:
    """Rz angle cancelling already-known lower bits, most recent first.

    ``[b1, b2, ...]`` gives ``-2*pi * 0.0 b1 b2 ...`` (binary).
    """
    frac = 0.0
    for t, b in enumerate(known_bits):
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")
        frac += b * 2.0 ** -(t + 2)
    return -2 * pi * frac


def decide_bit(p0: float, p1: float) -> tuple[int, bool]:
    """``(bit, tie)``; an exact tie resolves to 0."""
    if p1 > p0:
        return 1, False
    return 0, p1 == p0


def bits_to_phase(bits) -> float:
    return sum(b * 2.0 ** -(j + 1) for j, b in enumerate(bits))


def estimate_magnitude_paper(p_major: float, kappa: float, power: int = 1,
                             tol: float = 1e-9) -> float:
    """Invert ``P = (kappa/2 * (1 + r**power))**2`` for ``r``.

    ``p_major`` is the unnormalized chosen-state probability of the more likely
    phase-qubit outcome. ``2*sqrt(P)/kappa - 1`` is clamped to ``[0, 1 + 1e-9]``
    before the ``1/power`` root is taken.
    """
    if not -tol <= p_major <= kappa ** 2 + tol:
        raise ValueError(f"P = {p_major!r} outside [0, kappa**2 = {kappa ** 2!r}]")
    est = 2 * sqrt(max(p_major, 0.0)) / kappa - 1
    return min(max(est, 0.0), 1 + 1e-9) ** (1.0 / power)


def estimate_magnitude_ratio(p0: float, p1: float) -> tuple[float, bool]:
    """``(r**power, flagged)`` from ``(1+x)**2 / (1-x)**2 = P_major / P_minor``.

    A zero minority probability is the ``x -> 1`` limit and is flagged.
    """
    hi, lo = max(p0, p1), min(p0, p1)
    if lo <= 0.0:
        return 1.0, True
    s = sqrt(hi / lo)
    return (s - 1) / (s + 1), False


def estimate_magnitude_mass(mass: float, kappa: float) -> float:
    """Phase-independent: total chosen mass is ``kappa**2 (1 + r**(2p)) / 2``."""
    return sqrt(min(max(2 * mass / kappa ** 2 - 1, 0.0), 1.0 + 1e-9))


def hamiltonian_eigenvalue(lam: complex, sign: Sign | str = Sign.PLUS) -> complex:
    """E with ``lam = exp(+iE)`` (PLUS) or ``exp(-iE)`` (MINUS), principal log."""
    if lam == 0:
        raise ValueError("zero eigenvalue has no logarithm")
    log_lam = cmath.log(lam)
    return log_lam / 1j if Sign(sign) is Sign.PLUS else log_lam / -1j


# ------------------------------------------------------------------ one round

@dataclass(frozen=True)
class RoundOutcome:
    p0: float
    p1: float
    mass0: float
    mass1: float


def run_round(enc: EncodedOperator, psi, w: float, shots: int | None = None,
              seed=None) -> RoundOutcome:
    """Simulate one phase-estimation round and read the phase qubit.

    Exact mode uses Born probabilities; with ``shots`` the full register is
    sampled and the counts post-selected on the ancillas.
    """
    n = enc.n
    q = 2 * n + 2
    circuit = build_ipea_iteration(enc, w)
    state = run(circuit, embed(np.asarray(psi, dtype=complex), q))
    ancillas = {a: 0 for a in range(1, n + 2)}
    if shots is None:
        marg = probabilities(state, (0,), ancillas)
        m0, m1 = (float(x) for x in marg.masses)
    else:
        counts = sample(state, shots, seed).reshape(2, 2 ** (n + 1), 2 ** n)
        # axis 1 is the ancilla block; index 0 means every ancilla read 0
        chosen = counts[:, 0, :].sum(axis=1)
        if chosen.sum() == 0:
            raise PostSelectionError(
                f"no shot out of {shots} passed ancilla post-selection")
        m0, m1 = float(chosen[0] / shots), float(chosen[1] / shots)
    total = m0 + m1
    if total <= 0.0:
        raise PostSelectionError("chosen states have zero probability")
    return RoundOutcome(m0 / total, m1 / total, m0, m1)


# ------------------------------------------------------------------- driver

def _check_eigenvector(u: np.ndarray, psi: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("eigenvector must be non-zero")
    psi = psi / norm
    lam = np.vdot(psi, u @ psi)
    res = float(np.linalg.norm(u @ psi - lam * psi)) / max(1.0, linalg.max_abs(u))
    if res > 1e-6:
        warnings.warn(f"input vector is not an eigenvector of U (residual {res:.2e})",
                      EigenvectorWarning, stacklevel=3)
    return psi


def _powers(scaled: np.ndarray, m: int) -> list:
    """``scaled ** (2**j)`` for j = 0..m-1 by repeated squaring."""
    out = [scaled]
    for _ in range(m - 1):
        out.append(out[-1] @ out[-1])
    return out


def _magnitude(cfg: IPEAConfig, outcome: RoundOutcome, kappa: float) -> float:
    if cfg.estimator is Estimator.PAPER:
        # shot noise can push the observed mass slightly past kappa**2
        return estimate_magnitude_paper(min(max(outcome.mass0, outcome.mass1), kappa ** 2),
                                        kappa)
    if cfg.estimator is Estimator.RATIO:
        return estimate_magnitude_ratio(outcome.p0, outcome.p1)[0]
    return estimate_magnitude_mass(outcome.mass0 + outcome.mass1, kappa)


def _encode_power(power_matrix: np.ndarray, policy: ScalingPolicy):
    """Encode one power, rescaling it again when ``policy.per_iteration`` is set.

    The rescale uses the policy's own norm (one-norm when the policy is NONE), so
    the rescaled eigenvalue stays inside the unit disc for the norm policies. A
    plain largest-element rescale does not guarantee that: the spectral radius
    can exceed the largest entry, and every magnitude estimator assumes r <= 1.
    """
    if not policy.per_iteration:
        return build_universal(power_matrix, Scaling.NONE)
    kind = Scaling.ONE_NORM if policy.kind is Scaling.NONE else policy.kind
    return build_universal(power_matrix, kind)


def _round_seed(seed, k: int):
    if seed is None:
        return None
    return np.random.SeedSequence([seed, k])


def _flat_precision(powers, psi, cfg: IPEAConfig) -> int:
    """Largest m' <= m whose first (highest-power) round is not flat."""
    m = cfg.m
    while m > 1:
        enc = _encode_power(powers[m - 1], cfg.policy)
        out = run_round(enc, psi, 0.0, cfg.shots, _round_seed(cfg.seed, 10_000 + m))
        if abs(out.p1 - out.p0) >= cfg.stop_when_flat:
            break
        log.info("round with power 2**%d is flat (|P1-P0| = %.3g); dropping it",
                 m - 1, abs(out.p1 - out.p0))
        m -= 1
    return m


def run_ipea(u, psi, cfg: IPEAConfig | None = None) -> IPEAResult:
    """Estimate the eigenvalue of ``u`` belonging to eigenvector ``psi``."""
    cfg = cfg or IPEAConfig()
    u = linalg.as_matrix(u)
    psi = _check_eigenvector(u, np.asarray(psi, dtype=complex))
    scaled, mu = scale_matrix(u, cfg.policy)
    powers = _powers(scaled, cfg.m)

    m = cfg.m if cfg.stop_when_flat is None else _flat_precision(powers, psi, cfg)
    bits = [0] * m
    known = []   # bits fixed so far, most recent first
    records = []
    for k in range(1, m + 1):
        j = m - k + 1           # bit index decided this round
        power = 2 ** (j - 1)
        enc = _encode_power(powers[j - 1], cfg.policy)
        w = feedback_angle(known)
        out = run_round(enc, psi, w, cfg.shots, _round_seed(cfg.seed, k))
        bit, tie = decide_bit(out.p0, out.p1)
        bits[j - 1] = bit
        known.insert(0, bit)
        est = _magnitude(cfg, out, enc.kappa)
        accepted = bool(est > cfg.noise_floor)
        records.append(IterationRecord(
            k=k, bit_index=j, power=power, w=w, p0=out.p0, p1=out.p1,
            mass0=out.mass0, mass1=out.mass1, bit=bit, tie=tie,
            r_estimate=est * enc.mu, accepted=accepted, mu_k=enc.mu))

    roots = [rec.r_estimate ** (1.0 / rec.power) for rec in records if rec.accepted]
    flagged = not roots
    if flagged:
        best = max(records, key=lambda rec: rec.r_estimate / rec.mu_k)
        roots = [best.r_estimate ** (1.0 / best.power)]
        log.warning("every round fell below the noise floor %.3g; using power %d only",
                    cfg.noise_floor, best.power)
    r_scaled = float(np.mean(roots))
    phi = bits_to_phase(bits)
    result = IPEAResult(tuple(bits), phi, r_scaled, mu, tuple(records),
                        magnitude_flagged=flagged)
    if cfg.energy:
        result = replace(result, energy=hamiltonian_eigenvalue(result.eigenvalue,
                                                               cfg.hamiltonian_sign))
    return result
