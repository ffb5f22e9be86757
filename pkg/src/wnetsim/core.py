"""Dense state-vector / density-matrix engine for small qubit registers.

Registers are ordered tuples of 1-based integer qubit labels.  Amplitude
indexing is big-endian: the leftmost label in the register is the
highest-order bit of the basis index, so |100> on a 3-qubit register sits
at index 4.  All values are immutable after construction and every
operation is a pure function of its inputs.

The register size is capped at 8 qubits: everything here is exact dense
linear algebra, and 256x256 is the largest matrix we ever need.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 8

# construction invariants
ATOL_STATE = 1e-12
# tiny negative eigenvalues tolerated before PSD is declared violated
ATOL_PSD = 1e-10
# Kraus completeness
ATOL_KRAUS = 1e-10
# outcomes below this probability are reported without a post-state
PROB_FLOOR = 1e-12

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


class InvariantError(ValueError):
    """A numerical invariant (normalization, hermiticity, PSD, completeness,
    orthonormality) failed beyond tolerance."""


def _check_labels(labels) -> tuple[int, ...]:
    labels = tuple(int(q) for q in labels)
    if any(q < 1 for q in labels):
        raise ValueError(f"qubit labels must be positive integers, got {labels}")
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate qubit labels in register {labels}")
    if len(labels) > MAX_QUBITS:
        raise ValueError(f"register size {len(labels)} exceeds cap of {MAX_QUBITS}")
    return labels


def basis_index(bits) -> int:
    """Index of a computational basis state, big-endian (|100> -> 4)."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over an ordered qubit register."""

    register: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "register", _check_labels(self.register))
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if amps.size != 2 ** len(self.register):
            raise ValueError(
                f"amplitude length {amps.size} does not match register {self.register}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL_STATE:
            raise InvariantError(f"state norm {norm} deviates from 1 beyond {ATOL_STATE}")

    @property
    def n_qubits(self) -> int:
        return len(self.register)

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.register, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        """Inner product <self|other> (registers compared by position)."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("overlap requires equal register sizes")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def ket(bits, register=None) -> PureState:
    """Computational basis state, e.g. ket('100') = |100> on labels (1,2,3)."""
    bits = [int(b) for b in bits]
    if register is None:
        register = tuple(range(1, len(bits) + 1))
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[basis_index(bits)] = 1.0
    return PureState(tuple(register), amps)


def state_from_amplitudes(amps, register=None, normalize=False) -> PureState:
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    if normalize:
        amps = amps / np.linalg.norm(amps)
    n = int(round(np.log2(amps.size)))
    if 2**n != amps.size:
        raise ValueError(f"amplitude length {amps.size} is not a power of two")
    if register is None:
        register = tuple(range(1, n + 1))
    return PureState(tuple(register), amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, trace-1 complex matrix over an ordered qubit register.

    A 0-qubit density matrix is the 1x1 matrix [[1.0]]; it shows up as the
    post-state of a measurement on the full register.
    """

    register: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "register", _check_labels(self.register))
        mat = np.asarray(self.matrix, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        dim = 2 ** len(self.register)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match register {self.register}")
        if np.abs(mat - mat.conj().T).max() > ATOL_STATE:
            raise InvariantError("density matrix is not Hermitian within tolerance")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > ATOL_STATE:
            raise InvariantError(f"density matrix trace {tr} deviates from 1")
        evals = np.linalg.eigvalsh(mat)
        if evals.min() < -ATOL_PSD:
            raise InvariantError(f"density matrix has negative eigenvalue {evals.min()}")

    @property
    def n_qubits(self) -> int:
        return len(self.register)


def _as_density(state) -> DensityMatrix:
    return state.to_density_matrix() if isinstance(state, PureState) else state


@dataclass(frozen=True)
class UnitaryOp:
    """A k-qubit unitary matrix."""

    matrix: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        dim = mat.shape[0]
        k = int(round(np.log2(dim)))
        if mat.shape != (dim, dim) or 2**k != dim:
            raise ValueError(f"unitary shape {mat.shape} is not 2^k x 2^k")
        if np.abs(mat.conj().T @ mat - np.eye(dim)).max() > ATOL_STATE:
            raise InvariantError(f"matrix {self.name or mat.shape} is not unitary within tolerance")

    @property
    def arity(self) -> int:
        return int(round(np.log2(self.matrix.shape[0])))

    def dagger(self) -> "UnitaryOp":
        return UnitaryOp(self.matrix.conj().T, name=self.name + "^†" if self.name else "")


@dataclass(frozen=True)
class MeasurementBasis:
    """Labeled orthonormal basis spanning the full space of a subsystem."""

    subsystem: tuple[int, ...]
    vectors: tuple[tuple[str, PureState], ...]

    def __post_init__(self):
        object.__setattr__(self, "subsystem", _check_labels(self.subsystem))
        vecs = tuple((str(lbl), v) for lbl, v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        k = len(self.subsystem)
        if len(vecs) != 2**k:
            raise InvariantError(f"basis has {len(vecs)} vectors, expected {2**k}")
        mat = np.array([v.amplitudes for _, v in vecs])
        gram = mat @ mat.conj().T
        if np.abs(gram - np.eye(2**k)).max() > ATOL_STATE:
            raise InvariantError("measurement basis is not orthonormal within tolerance")

    def labels(self) -> list[str]:
        return [lbl for lbl, _ in self.vectors]


@dataclass(frozen=True)
class MeasurementRecord:
    """One measurement outcome: label, probability and the post-measurement
    state on the unmeasured qubits (None when the probability is below the
    reporting floor)."""

    outcome: str
    probability: float
    post_state: DensityMatrix | None


# ---------------------------------------------------------------------------
# tensor-index plumbing (single home of the big-endian convention)
# ---------------------------------------------------------------------------


def _positions(register, targets) -> list[int]:
    pos = []
    for q in targets:
        try:
            pos.append(register.index(q))
        except ValueError:
            raise ValueError(f"qubit {q} not in register {register}") from None
    return pos


def _apply_on_vector(vec: np.ndarray, u: np.ndarray, positions, n: int) -> np.ndarray:
    k = len(positions)
    t = vec.reshape([2] * n)
    ut = u.reshape([2] * (2 * k))
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), positions))
    t = np.moveaxis(t, list(range(k)), positions)
    return t.reshape(-1)


def _apply_on_matrix(mat: np.ndarray, u: np.ndarray, positions, n: int) -> np.ndarray:
    k = len(positions)
    t = mat.reshape([2] * (2 * n))
    ut = u.reshape([2] * (2 * k))
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), positions))
    t = np.moveaxis(t, list(range(k)), positions)
    uc = u.conj().reshape([2] * (2 * k))
    cpos = [n + p for p in positions]
    t = np.tensordot(uc, t, axes=(list(range(k, 2 * k)), cpos))
    t = np.moveaxis(t, list(range(k)), cpos)
    return t.reshape(2**n, 2**n)


def _project_out(mat: np.ndarray, vec: np.ndarray, positions, n: int) -> np.ndarray:
    """<v|rho|v> taken on the given qubit positions; returns the reduced
    (unnormalized) matrix over the remaining qubits."""
    k = len(positions)
    t = mat.reshape([2] * (2 * n))
    vt = vec.reshape([2] * k)
    t = np.tensordot(vt.conj(), t, axes=(list(range(k)), positions))
    cpos = [n - k + p for p in positions]
    t = np.tensordot(t, vt, axes=(cpos, list(range(k))))
    m = n - k
    return t.reshape(2**m, 2**m)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def tensor(a, b):
    """Tensor product of two states on disjoint registers.

    The result register is the concatenation of the operand registers.
    Mixing a PureState with a DensityMatrix promotes both to density
    matrices.
    """
    if set(a.register) & set(b.register):
        raise ValueError(
            f"label collision: registers {a.register} and {b.register} overlap"
        )
    register = a.register + b.register
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(register, np.kron(a.amplitudes, b.amplitudes))
    a, b = _as_density(a), _as_density(b)
    return DensityMatrix(register, np.kron(a.matrix, b.matrix))


def relabel(state, new_labels):
    """Rename register labels positionally; amplitudes are untouched."""
    new_labels = tuple(new_labels)
    if len(new_labels) != state.n_qubits:
        raise ValueError(f"need {state.n_qubits} labels, got {new_labels}")
    if isinstance(state, PureState):
        return PureState(new_labels, state.amplitudes)
    return DensityMatrix(new_labels, state.matrix)


def permute_qubits(state, new_order):
    """Reorder the register labels; the physical state is unchanged."""
    if sorted(new_order) != sorted(state.register):
        raise ValueError(f"{tuple(new_order)} is not a permutation of {state.register}")
    n = state.n_qubits
    perm = [state.register.index(q) for q in new_order]
    if isinstance(state, PureState):
        t = state.amplitudes.reshape([2] * n).transpose(perm)
        return PureState(tuple(new_order), t.reshape(-1))
    t = state.matrix.reshape([2] * (2 * n))
    t = t.transpose(perm + [n + p for p in perm])
    return DensityMatrix(tuple(new_order), t.reshape(2**n, 2**n))


def apply_unitary(state, u, targets):
    """Apply a unitary to the target qubits, identity elsewhere."""
    umat = u.matrix if isinstance(u, UnitaryOp) else np.asarray(u, dtype=complex)
    k = int(round(np.log2(umat.shape[0])))
    if k != len(targets):
        raise ValueError(f"unitary arity {k} does not match {len(targets)} target qubits")
    pos = _positions(state.register, targets)
    if isinstance(state, PureState):
        return PureState(state.register, _apply_on_vector(state.amplitudes, umat, pos, state.n_qubits))
    return DensityMatrix(state.register, _apply_on_matrix(state.matrix, umat, pos, state.n_qubits))


def apply_channel(rho, kraus_ops, targets) -> DensityMatrix:
    """Apply a Kraus-operator channel to the target qubits of a state.

    The operator set must satisfy sum K†K = I on the target subspace.
    """
    rho = _as_density(rho)
    kraus_ops = [np.asarray(K, dtype=complex) for K in kraus_ops]
    dim = 2 ** len(targets)
    comp = sum(K.conj().T @ K for K in kraus_ops)
    if np.abs(comp - np.eye(dim)).max() > ATOL_KRAUS:
        raise InvariantError("Kraus set does not satisfy completeness on the target subspace")
    pos = _positions(rho.register, targets)
    out = np.zeros_like(rho.matrix)
    for K in kraus_ops:
        out += _apply_on_matrix(rho.matrix, K, pos, rho.n_qubits)
    # re-symmetrize roundoff so construction invariants hold exactly
    out = (out + out.conj().T) / 2
    return DensityMatrix(rho.register, out)


def partial_trace(rho, keep) -> DensityMatrix:
    """Trace out all qubits not listed in `keep` (order of `keep` is kept).

    An empty `keep` yields the 0-qubit matrix [[1.0]].
    """
    rho = _as_density(rho)
    keep = tuple(keep)
    n = rho.n_qubits
    keep_pos = _positions(rho.register, keep)
    drop = [i for i in range(n) if i not in keep_pos]
    t = rho.matrix.reshape([2] * (2 * n))
    off = n
    for d in sorted(drop, reverse=True):
        t = np.trace(t, axis1=d, axis2=d + off)
        off -= 1
    m = n - len(drop)
    remaining = [i for i in range(n) if i not in drop]
    reduced = t.reshape(2**m, 2**m)
    out = DensityMatrix(tuple(rho.register[i] for i in remaining), reduced)
    if list(keep) != list(out.register):
        out = permute_qubits(out, keep)
    return out


def measure(state, basis: MeasurementBasis) -> list[MeasurementRecord]:
    """Projective measurement of a subsystem in a labeled orthonormal basis.

    Returns one record per basis vector: outcome probability and the
    normalized post-state with the measured qubits traced out.  Outcomes
    with probability below PROB_FLOOR carry no post-state.
    """
    rho = _as_density(state)
    pos = _positions(rho.register, basis.subsystem)
    n = rho.n_qubits
    remaining = tuple(q for q in rho.register if q not in basis.subsystem)
    records = []
    for lbl, v in basis.vectors:
        reduced = _project_out(rho.matrix, v.amplitudes, pos, n)
        prob = float(np.trace(reduced).real)
        if prob < PROB_FLOOR:
            records.append(MeasurementRecord(lbl, max(prob, 0.0), None))
            continue
        post = (reduced + reduced.conj().T) / (2 * prob)
        records.append(MeasurementRecord(lbl, prob, DensityMatrix(remaining, post)))
    total = sum(r.probability for r in records)
    if abs(total - 1.0) > 1e-10:
        raise InvariantError(f"measurement probabilities sum to {total}, not 1")
    return records


def fidelity(rho, psi: PureState) -> float:
    """<psi|rho|psi>, compared by register position."""
    rho = _as_density(rho)
    if rho.n_qubits != psi.n_qubits:
        raise ValueError("fidelity requires equal register sizes")
    val = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return float(val.real)


def purity(rho) -> float:
    rho = _as_density(rho)
    return float(np.trace(rho.matrix @ rho.matrix).real)


def von_neumann_entropy(rho) -> float:
    """Entropy in bits; eigenvalues below 1e-12 are treated as exact zeros."""
    rho = _as_density(rho)
    evals = np.linalg.eigvalsh(rho.matrix)
    evals = np.clip(evals, 0.0, None)
    evals = evals[evals > 1e-12]
    return float(-np.sum(evals * np.log2(evals)))


def equal_up_to_phase(a: PureState, b: PureState, atol: float = 1e-10) -> bool:
    """Phase-insensitive equality: |<a|b>| = 1 within atol."""
    return abs(abs(a.overlap(b)) - 1.0) <= atol
