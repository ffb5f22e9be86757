"""Constructors for the W-class states, their preparation unitaries and the
measurement bases used by the distribution protocols.

The one-parameter family

    |W(m)> = (|100> + sqrt(m) e^{i*gamma} |010> + sqrt(m+1) e^{i*delta} |001>)
             / sqrt(2 + 2m)

carries exactly one ebit across the 12|3 bipartition for every m >= 0.  The
m = 1, zero-phase member (amplitudes 1/2, 1/2, 1/sqrt(2)) is the workhorse
resource state of the whole package.
"""

from __future__ import annotations

import numpy as np

from .core import (
    InvariantError,
    MeasurementBasis,
    PAULI_X,
    PAULI_Z,
    PureState,
    UnitaryOp,
    apply_unitary,
    ket,
    state_from_amplitudes,
)

_S2 = 1.0 / np.sqrt(2.0)


def w_m(m: float, gamma: float = 0.0, delta: float = 0.0) -> PureState:
    """General W-class state on labels (1,2,3); w_m(1) is the modified W state."""
    if m < 0:
        raise ValueError(f"amplitude parameter m must be >= 0, got {m}")
    norm = np.sqrt(2.0 + 2.0 * m)
    amps = np.zeros(8, dtype=complex)
    amps[0b100] = 1.0 / norm
    amps[0b010] = np.sqrt(m) * np.exp(1j * gamma) / norm
    amps[0b001] = np.sqrt(m + 1.0) * np.exp(1j * delta) / norm
    return PureState((1, 2, 3), amps)


def w_mod() -> PureState:
    """|100>/2 + |010>/2 + |001>/sqrt(2) on labels (1,2,3)."""
    return w_m(1.0)


def w_canonical() -> PureState:
    """Symmetric three-qubit W state (|100>+|010>+|001>)/sqrt(3)."""
    amps = np.zeros(8, dtype=complex)
    amps[0b100] = amps[0b010] = amps[0b001] = 1.0 / np.sqrt(3.0)
    return PureState((1, 2, 3), amps)


def ghz() -> PureState:
    """(|000>+|111>)/sqrt(2)."""
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = amps[0b111] = _S2
    return PureState((1, 2, 3), amps)


BELL_KINDS = ("phi+", "phi-", "psi+", "psi-")


def bell(kind: str = "phi+", register=(1, 2)) -> PureState:
    """One of the four Bell states on a two-qubit register."""
    amps = np.zeros(4, dtype=complex)
    if kind == "phi+":
        amps[0b00], amps[0b11] = _S2, _S2
    elif kind == "phi-":
        amps[0b00], amps[0b11] = _S2, -_S2
    elif kind == "psi+":
        amps[0b01], amps[0b10] = _S2, _S2
    elif kind == "psi-":
        amps[0b01], amps[0b10] = _S2, -_S2
    else:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {BELL_KINDS}")
    return PureState(tuple(register), amps)


# ---------------------------------------------------------------------------
# preparation unitaries
# ---------------------------------------------------------------------------


def u_mwm(m: float) -> UnitaryOp:
    """Two-qubit unitary turning |phi+>_13 (x) |0>_2 into |W(m)> when applied
    on qubits (1,2)."""
    if m < 0:
        raise ValueError(f"amplitude parameter m must be >= 0, got {m}")
    a = np.sqrt(m / (m + 1.0))
    b = np.sqrt(1.0 / (m + 1.0))
    mat = np.array(
        [
            [0, 0, 1, 0],
            [a, 0, 0, b],
            [b, 0, 0, -a],
            [0, 1, 0, 0],
        ],
        dtype=complex,
    )
    return UnitaryOp(mat, name=f"U_prep(m={m:g})")


def u_mwmb(m: float) -> UnitaryOp:
    """Two-qubit unitary turning |phi+>_13 (x) |0>_2 into the basis seed
    |eta+(m)> when applied on qubits (2,3)."""
    if m < 0:
        raise ValueError(f"amplitude parameter m must be >= 0, got {m}")
    a = np.sqrt(m / (m + 1.0))
    b = np.sqrt(1.0 / (m + 1.0))
    mat = np.array(
        [
            [0, 1, 0, 0],
            [a, 0, 0, b],
            [b, 0, 0, -a],
            [0, 0, 1, 0],
        ],
        dtype=complex,
    )
    return UnitaryOp(mat, name=f"U_basis(m={m:g})")


def u_mw() -> UnitaryOp:
    """m = 1 preparation unitary (entries 0, 1, ±1/sqrt(2))."""
    return u_mwm(1.0)


def u_mwb() -> UnitaryOp:
    """m = 1 basis-seed unitary."""
    return u_mwmb(1.0)


def prep_input_state() -> PureState:
    """|phi+>_13 (x) |0>_2 written on register (1,2,3): (|000>+|101>)/sqrt(2)."""
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = amps[0b101] = _S2
    return PureState((1, 2, 3), amps)


# ---------------------------------------------------------------------------
# measurement bases
# ---------------------------------------------------------------------------


def complete_basis(seed_vectors, labels=None, atol: float = 1e-10):
    """Extend an orthonormal list to a full basis with Gram-Schmidt over the
    computational basis taken in ascending index order; residuals below atol
    are skipped.  Deterministic and reproducible."""
    vecs = [np.asarray(v, dtype=complex) for v in seed_vectors]
    dim = vecs[0].size
    out = list(vecs)
    aux = 0
    extras = []
    for i in range(dim):
        if len(out) == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        for b in out:
            v = v - b * np.vdot(b, v)
        nrm = np.linalg.norm(v)
        if nrm < atol:
            continue
        v = v / nrm
        out.append(v)
        extras.append((f"aux{aux}", v))
        aux += 1
    if len(out) != dim:
        raise InvariantError("Gram-Schmidt completion failed to span the space")
    return extras


def _labeled_basis(subsystem, named_vectors) -> MeasurementBasis:
    dim = 2 ** len(subsystem)
    seeds = [v for _, v in named_vectors]
    extras = complete_basis(seeds)
    entries = [
        (lbl, state_from_amplitudes(v, register=subsystem)) for lbl, v in named_vectors
    ]
    entries += [
        (lbl, state_from_amplitudes(v, register=subsystem)) for lbl, v in extras
    ]
    assert len(entries) == dim
    return MeasurementBasis(tuple(subsystem), tuple(entries))


def eta_plus(m: float = 1.0) -> PureState:
    """Basis seed (|010> + sqrt(m)|001> + sqrt(m+1)|100>)/sqrt(2+2m)."""
    if m < 0:
        raise ValueError(f"amplitude parameter m must be >= 0, got {m}")
    norm = np.sqrt(2.0 + 2.0 * m)
    amps = np.zeros(8, dtype=complex)
    amps[0b010] = 1.0 / norm
    amps[0b001] = np.sqrt(m) / norm
    amps[0b100] = np.sqrt(m + 1.0) / norm
    return PureState((1, 2, 3), amps)


def basis_eta_xi(m: float = 1.0, subsystem=(1, 2, 3)) -> MeasurementBasis:
    """Full 8-outcome basis {eta±, xi±, aux0..aux3}.

    eta+ is the seed; eta- = Z_1 eta+, xi+ = X_1 eta+, xi- = X_1 Z_1 eta+.
    The four aux vectors complete the space and never occur in the
    protocols (asserted in the test suite).
    """
    seed = eta_plus(m)
    eta_m = apply_unitary(seed, PAULI_Z, [1])
    xi_p = apply_unitary(seed, PAULI_X, [1])
    xi_m = apply_unitary(eta_m, PAULI_X, [1])
    named = [
        ("eta+", seed.amplitudes),
        ("eta-", eta_m.amplitudes),
        ("xi+", xi_p.amplitudes),
        ("xi-", xi_m.amplitudes),
    ]
    return _labeled_basis(subsystem, named)


def basis_eta_zeta(subsystem=(3, 4, 5)) -> MeasurementBasis:
    """Joint-measurement basis for the two-source protocol.

    eta± = |010>/2 + |001>/2 ± |100>/sqrt(2)
    zeta± = |110>/2 + |101>/2 ± |000>/sqrt(2)

    written in the order of `subsystem` (default (3,4,5)), plus four aux
    completion vectors.
    """
    eta = np.zeros(8, dtype=complex)
    eta[0b010] = eta[0b001] = 0.5
    eta[0b100] = _S2
    etam = eta.copy()
    etam[0b100] = -_S2
    zeta = np.zeros(8, dtype=complex)
    zeta[0b110] = zeta[0b101] = 0.5
    zeta[0b000] = _S2
    zetam = zeta.copy()
    zetam[0b000] = -_S2
    named = [("eta+", eta), ("eta-", etam), ("zeta+", zeta), ("zeta-", zetam)]
    return _labeled_basis(subsystem, named)


def teleport_basis(subsystem=(4, 1, 2)) -> MeasurementBasis:
    """Three-qubit basis for deterministic teleportation through the modified
    W state.

    Built from the Schmidt split |W_mod> = (|psi0>_12 |0>_3 + |psi1>_12 |1>_3)
    / sqrt(2) with psi0 = (|10>+|01>)/sqrt(2) and psi1 = |00>: the four used
    vectors are (|0>|psi0> ± |1>|psi1>)/sqrt(2) and (|0>|psi1> ± |1>|psi0>)
    /sqrt(2), the first tensor slot being the unknown input qubit.
    """
    psi0 = np.zeros(4, dtype=complex)
    psi0[0b10] = psi0[0b01] = _S2
    psi1 = np.zeros(4, dtype=complex)
    psi1[0b00] = 1.0
    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    b1p = (np.kron(zero, psi0) + np.kron(one, psi1)) * _S2
    b1m = (np.kron(zero, psi0) - np.kron(one, psi1)) * _S2
    b2p = (np.kron(zero, psi1) + np.kron(one, psi0)) * _S2
    b2m = (np.kron(zero, psi1) - np.kron(one, psi0)) * _S2
    named = [("b1+", b1p), ("b1-", b1m), ("b2+", b2p), ("b2-", b2m)]
    return _labeled_basis(subsystem, named)


def bell_basis(subsystem=(1, 2)) -> MeasurementBasis:
    """The Bell basis {phi±, psi±} on a two-qubit subsystem."""
    entries = tuple(
        (kind, bell(kind, register=subsystem)) for kind in BELL_KINDS
    )
    return MeasurementBasis(tuple(subsystem), entries)


def asymptotic_limit_state() -> PureState:
    """|0>_1 (x) (|10>+|01>)_23/sqrt(2): the m -> infinity limit of w_m."""
    amps = np.zeros(8, dtype=complex)
    amps[0b010] = amps[0b001] = _S2
    return PureState((1, 2, 3), amps)
