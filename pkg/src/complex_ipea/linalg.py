"""Dense complex linear algebra and the classical eigensolver oracles.

Matrices and vectors are plain ``numpy`` complex128 arrays. Everything here is
pure: inputs are never modified in place.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative routine stopped before reaching its tolerance."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray | None
    residual: float
    converged: bool = True


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    return a


def _square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def mat_vec(m, v) -> np.ndarray:
    a = as_matrix(m)
    x = np.asarray(v, dtype=complex)
    if x.ndim != 1 or a.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {x.shape}")
    return a @ x


def one_norm(m) -> float:
    """Largest absolute column sum."""
    return float(np.abs(as_matrix(m)).sum(axis=0).max())


def inf_norm(m) -> float:
    """Largest absolute row sum."""
    return float(np.abs(as_matrix(m)).sum(axis=1).max())


def max_abs(m) -> float:
    return float(np.abs(as_matrix(m)).max())


def mat_power(m, p: int) -> np.ndarray:
    """``m**p`` by binary exponentiation.

    For ``p = 2**j`` this is exactly ``j`` successive squarings of ``m`` and no
    other multiplication, so it agrees bitwise with a hand-rolled squaring chain.
    """
    base = _square(m)
    if int(p) != p or p < 1:
        raise ValueError(f"power must be a positive integer, got {p!r}")
    p = int(p)
    result = None
    while p:
        if p & 1:
            result = base if result is None else result @ base
        p >>= 1
        if p:
            base = base @ base
    return result.copy()


_TAYLOR_ORDER = 16


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring a degree-16 Taylor series."""
    a = _square(m)
    norm = one_norm(a)
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    a = a / 2.0**s
    n = a.shape[0]
    # Horner form: I + A(I + A/2(I + A/3(...)))
    result = np.eye(n, dtype=complex)
    for k in range(_TAYLOR_ORDER, 0, -1):
        result = np.eye(n, dtype=complex) + (a @ result) / k
    for _ in range(s):
        result = result @ result
    return result


def _residual(m: np.ndarray, value: complex, vector: np.ndarray) -> float:
    return float(np.linalg.norm(m @ vector - value * vector))


def eig_dominant(m, seed: int | None = 0, tol: float = 1e-10,
                 max_iter: int = 100_000) -> EigenPair:
    """Largest-magnitude eigenpair by power iteration from a random start.

    Raises ConvergenceError (carrying the last residual) if the residual does
    not drop below ``tol`` within ``max_iter`` steps.
    """
    a = _square(m)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    res = np.inf
    value = 0j
    for _ in range(max_iter):
        w = a @ v
        value = complex(np.vdot(v, w))
        res = float(np.linalg.norm(w - value * v))
        if res <= tol:
            break
        nw = np.linalg.norm(w)
        if nw == 0:
            # v landed in the null space; the dominant eigenvalue is 0 only if a == 0
            if not np.any(a):
                return EigenPair(0j, v, 0.0)
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            v /= np.linalg.norm(v)
            continue
        v = w / nw
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} steps (residual {res:.3e})",
            res)
    return EigenPair(value, _canonical_phase(v), res)


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    # rotate so the largest-magnitude component is real and positive
    k = int(np.argmax(np.abs(v)))
    return v * np.exp(-1j * np.angle(v[k]))


def charpoly(m) -> np.ndarray:
    """Characteristic polynomial coefficients (leading 1 first) by Faddeev-LeVerrier."""
    a = _square(m)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    mk = np.zeros_like(a)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ mk) / k
    return coeffs


def durand_kerner(coeffs, tol: float = 1e-12, max_sweeps: int = 10_000) -> np.ndarray:
    """All roots of a monic polynomial by simultaneous (Weierstrass) iteration."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    bound = 1.0 + float(np.max(np.abs(c[1:])))  # Cauchy bound
    roots = bound * (0.4 + 0.9j) ** np.arange(deg) / abs(0.4 + 0.9j) ** np.arange(deg)
    for _ in range(max_sweeps):
        delta_max = 0.0
        for i in range(deg):
            diff = roots[i] - np.delete(roots, i)
            denom = np.prod(diff) if deg > 1 else 1.0
            if denom == 0:
                denom = 1e-300
            step = np.polyval(c, roots[i]) / denom
            roots[i] -= step
            delta_max = max(delta_max, abs(step) / max(1.0, abs(roots[i])))
        if delta_max <= tol:
            return roots
    raise ConvergenceError(f"Durand-Kerner did not converge in {max_sweeps} sweeps",
                           delta_max)


def _inverse_iteration(a: np.ndarray, shift: complex, rng, steps: int = 4):
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    scale = max(1.0, np.abs(a).max())
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    mu = shift
    for _ in range(steps):
        try:
            w = np.linalg.solve(a - mu * eye, v)
        except np.linalg.LinAlgError:
            w = np.linalg.solve(a - (mu + 1e-14 * scale) * eye, v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0:
            break
        v = w / nw
    return v


def eig_all_small(m, seed: int = 0) -> list[EigenPair]:
    """Full spectrum of a small (N <= 8) matrix.

    Roots of the Faddeev-LeVerrier characteristic polynomial are refined by
    Durand-Kerner, then each eigenvector comes from inverse iteration. Pairs whose
    residual stays above 1e-8 (defective or badly conditioned cases) are returned
    with ``converged=False`` rather than dropped.
    """
    a = _square(m)
    n = a.shape[0]
    if n > 8:
        raise ValueError(f"eig_all_small supports N <= 8, got {n}")
    roots = durand_kerner(charpoly(a))
    rng = np.random.default_rng(seed)
    pairs = []
    for root in sorted(roots, key=lambda z: (-abs(z), z.real, z.imag)):
        v = _inverse_iteration(a, root, rng)
        value = complex(np.vdot(v, a @ v))
        res = _residual(a, value, v)
        if res > 1e-8:
            # Rayleigh-quotient refinement starting from the polished pair
            v = _inverse_iteration(a, value, rng, steps=2)
            value = complex(np.vdot(v, a @ v))
            res = _residual(a, value, v)
        pairs.append(EigenPair(value, _canonical_phase(v), res, res <= 1e-8))
    return pairs
