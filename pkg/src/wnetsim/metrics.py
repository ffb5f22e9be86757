"""Entanglement monotones (concurrence, two-tangles, residual three-tangle)
and root-finding for the noise thresholds where they vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    DensityMatrix,
    PAULI_Y,
    PureState,
    partial_trace,
    purity,
    _as_density,
)

_YY = np.kron(PAULI_Y, PAULI_Y)

# metrics at or below this value count as vanished in threshold detection
ZERO_TOL = 1e-9


def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(mat)
    evals = np.clip(evals, 0.0, None)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def concurrence_terms(rho) -> np.ndarray:
    """Descending square roots of the eigenvalues of
    rho (Y(x)Y) rho* (Y(x)Y), computed through the Hermitian form
    sqrt(rho) (Y(x)Y) rho* (Y(x)Y) sqrt(rho) for numerical robustness."""
    rho = _as_density(rho)
    if rho.n_qubits != 2:
        raise ValueError(f"concurrence is defined for 2 qubits, got {rho.n_qubits}")
    sq = _sqrtm_psd(rho.matrix)
    herm = sq @ _YY @ rho.matrix.conj() @ _YY @ sq
    herm = (herm + herm.conj().T) / 2
    evals = np.linalg.eigvalsh(herm)
    evals = np.clip(evals, 0.0, None)
    return np.sqrt(evals)[::-1]


def concurrence_excess(rho) -> float:
    """sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4) before the max{0, .} clip.

    The clipped concurrence is identically zero past its vanishing point,
    so threshold detection brackets this signed quantity instead.
    """
    lam = concurrence_terms(rho)
    return float(lam[0] - lam[1] - lam[2] - lam[3])


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state."""
    return max(0.0, concurrence_excess(rho))


def two_tangle(rho) -> float:
    """Squared concurrence."""
    return concurrence(rho) ** 2


@dataclass(frozen=True)
class TangleReport:
    """Pairwise two-tangles of a three-qubit state, their mean, and the
    residual three-tangle when the state is pure (None otherwise).  Pair
    indices refer to register positions (1,2,3)."""

    tau_12: float
    tau_13: float
    tau_23: float
    tau_av: float
    tau_3: float | None = None

    def as_dict(self) -> dict:
        return {
            "tau_12": self.tau_12,
            "tau_13": self.tau_13,
            "tau_23": self.tau_23,
            "tau_av": self.tau_av,
            "tau_3": self.tau_3,
        }


def tangle_report(rho) -> TangleReport:
    """Two-tangles of every qubit pair of a three-qubit state."""
    rho = _as_density(rho)
    if rho.n_qubits != 3:
        raise ValueError(f"tangle report is defined for 3 qubits, got {rho.n_qubits}")
    q = rho.register
    t12 = two_tangle(partial_trace(rho, [q[0], q[1]]))
    t13 = two_tangle(partial_trace(rho, [q[0], q[2]]))
    t23 = two_tangle(partial_trace(rho, [q[1], q[2]]))
    tau3 = None
    if purity(rho) > 1.0 - 1e-10:
        evals, vecs = np.linalg.eigh(rho.matrix)
        psi = PureState(rho.register, vecs[:, int(np.argmax(evals))])
        tau3 = three_tangle_pure(psi)
    return TangleReport(t12, t13, t23, (t12 + t13 + t23) / 3.0, tau3)


def three_tangle_pure(psi) -> float:
    """Residual tangle tau_1(23) - tau_12 - tau_13 of a pure three-qubit
    state, with tau_1(23) = 4 det(rho_1); clipped to [0, 1].

    Vanishes on the whole W class and equals 1 on the GHZ state.  Not
    defined here for mixed states (that needs a convex roof).
    """
    if isinstance(psi, DensityMatrix):
        if purity(psi) < 1.0 - 1e-10:
            raise ValueError("three-tangle is implemented for pure states only")
        evals, vecs = np.linalg.eigh(psi.matrix)
        psi = PureState(psi.register, vecs[:, int(np.argmax(evals))])
    if psi.n_qubits != 3:
        raise ValueError(f"three-tangle is defined for 3 qubits, got {psi.n_qubits}")
    q = psi.register
    rho = psi.to_density_matrix()
    rho1 = partial_trace(rho, [q[0]])
    tau_1_23 = 4.0 * float(np.linalg.det(rho1.matrix).real)
    t12 = two_tangle(partial_trace(rho, [q[0], q[1]]))
    t13 = two_tangle(partial_trace(rho, [q[0], q[2]]))
    return float(np.clip(tau_1_23 - t12 - t13, 0.0, 1.0))


@dataclass(frozen=True)
class Threshold:
    """Location where a monotonically vanishing metric first reaches zero."""

    p_crit: float
    metric: str
    bracket: tuple[float, float]
    tolerance: float


def find_threshold(
    metric: Callable[[float], float],
    bracket: tuple[float, float] = (0.0, 1.0),
    tol: float = 1e-4,
    label: str = "metric",
    zero_tol: float = ZERO_TOL,
) -> Threshold:
    """Bisect for the smallest p where `metric` has vanished.

    Requires metric(lo) > zero_tol and metric(hi) <= zero_tol; the metric
    must vanish monotonically on the bracket.  Pass a signed quantity such
    as concurrence_excess when the metric itself is clipped at zero.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not metric(lo) > zero_tol:
        raise ValueError(f"metric({lo}) is not positive; bracket does not straddle the threshold")
    if not metric(hi) <= zero_tol:
        raise ValueError(f"metric({hi}) has not vanished; bracket does not straddle the threshold")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if metric(mid) > zero_tol:
            lo = mid
        else:
            hi = mid
    return Threshold(0.5 * (lo + hi), label, (float(bracket[0]), float(bracket[1])), tol)


def minimize_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-4,
) -> tuple[float, float]:
    """Golden-section minimum of a unimodal function on [lo, hi].

    Used for the non-monotone tangle curves that dip and recover instead of
    vanishing; returns (x_min, f(x_min)).
    """
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
