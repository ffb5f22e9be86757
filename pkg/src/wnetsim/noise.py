"""Depolarizing-noise machinery: Kraus sets, product channels, composition
algebra, the exponential link model and repeater-chain event accounting.

Convention: the module-wide depolarizing parameter p is the Kraus-form one,

    K0 = sqrt(1 - 3p/4) I,   K_{1,2,3} = sqrt(p/4) {X, Y, Z},

under which E(rho) = (1-p) rho + p I/2, i.e. p is exactly the probability of
replacement by the maximally mixed state.  This is the convention that makes
the composition law 1 - p_eff = prod(1 - p_i) exact.  A pair of converters
to/from the "Pauli mixture" parameterization E(rho) = (1-q) rho +
q/3 (X rho X + Y rho Y + Z rho Z) is provided (q = 3p/4).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    DensityMatrix,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    apply_channel,
)


def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def depolarizing_kraus(p: float) -> list[np.ndarray]:
    """The four single-qubit Kraus operators of the depolarizing channel."""
    p = _check_prob(p)
    return [
        np.sqrt(1.0 - 0.75 * p) * PAULI_I,
        np.sqrt(0.25 * p) * PAULI_X,
        np.sqrt(0.25 * p) * PAULI_Y,
        np.sqrt(0.25 * p) * PAULI_Z,
    ]


def depolarize(rho, p: float, targets) -> DensityMatrix:
    """Apply one depolarizing event with parameter p to each target qubit."""
    out = rho
    for q in targets:
        out = apply_channel(out, depolarizing_kraus(p), [q])
    return out


def depolarize_all(rho, ps) -> DensityMatrix:
    """Independent single-qubit depolarizing noise on every register qubit.

    `ps` is one parameter per qubit (a scalar broadcasts).  Single-qubit
    depolarizing channels on distinct qubits commute, so the application
    order is irrelevant.
    """
    n = rho.n_qubits
    if np.isscalar(ps):
        ps = [float(ps)] * n
    ps = list(ps)
    if len(ps) != n:
        raise ValueError(f"got {len(ps)} noise parameters for {n} qubits")
    out = rho
    for q, p in zip(rho.register, ps):
        out = apply_channel(out, depolarizing_kraus(p), [q])
    return out


def compose_depolarizing(ps) -> float:
    """Parameter of the single channel equal to the given ones in sequence:
    1 - p_eff = prod(1 - p_i)."""
    acc = 1.0
    for p in ps:
        acc *= 1.0 - _check_prob(p)
    return 1.0 - acc


def pauli_mix_to_kraus(q: float) -> float:
    """Convert E(rho) = (1-q) rho + q/3 sum P rho P to the Kraus convention."""
    q = _check_prob(q, "q")
    if q > 0.75:
        raise ValueError(f"Pauli-mixture weight {q} exceeds 3/4; no Kraus-form equivalent")
    return 4.0 * q / 3.0


def kraus_to_pauli_mix(p: float) -> float:
    """Inverse of pauli_mix_to_kraus."""
    return 0.75 * _check_prob(p)


class EventCount(NamedTuple):
    """Depolarizing-event tally for an n-hop repeater chain."""

    link: int
    memory: int
    bsm: int
    total: int


def event_count(n: int) -> EventCount:
    """Noise events on the relayed qubit after n hops: n link transmissions,
    2n-1 memory storages and n Bell measurements, 4n-1 in total."""
    n = int(n)
    if n < 1:
        raise ValueError(f"hop count must be >= 1, got {n}")
    return EventCount(n, 2 * n - 1, n, 4 * n - 1)


def p_eff_hops(p: float, n: int) -> float:
    """Effective parameter of the 4n-1 equal-strength events of an n-hop
    chain: 1 - (1-p)^(4n-1)."""
    p = _check_prob(p)
    total = event_count(n).total
    return 1.0 - (1.0 - p) ** total


def link_noise(attenuation: float, length: float) -> float:
    """Exponential link model p = 1 - exp(-attenuation * length)."""
    if attenuation <= 0:
        raise ValueError(f"attenuation rate must be > 0, got {attenuation}")
    if length < 0:
        raise ValueError(f"link length must be >= 0, got {length}")
    return 1.0 - np.exp(-attenuation * length)


def p_eff_distance(n: int, total_length: float, attenuation: float) -> float:
    """Effective chain parameter over a total distance L split into n equal
    links: 1 - exp(-(4n-1) * attenuation * L / n)."""
    total = event_count(n).total
    if total_length < 0:
        raise ValueError(f"total length must be >= 0, got {total_length}")
    if attenuation <= 0:
        raise ValueError(f"attenuation rate must be > 0, got {attenuation}")
    return 1.0 - np.exp(-total * attenuation * total_length / n)


def rate_direct(eta: float, n_nodes: int) -> float:
    """Success rate of simultaneous direct transmission to n_nodes end nodes,
    each arriving with probability eta."""
    eta = _check_prob(eta, "eta")
    if n_nodes < 1:
        raise ValueError(f"node count must be >= 1, got {n_nodes}")
    return eta**n_nodes


@dataclass(frozen=True)
class ChainSpec:
    """Repeater-chain description: n hops with per-event link, memory and
    BSM depolarizing parameters."""

    n: int
    p_link: float = 0.0
    p_mem: float = 0.0
    p_bsm: float = 0.0

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError(f"hop count must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p_link", _check_prob(self.p_link, "p_link"))
        object.__setattr__(self, "p_mem", _check_prob(self.p_mem, "p_mem"))
        object.__setattr__(self, "p_bsm", _check_prob(self.p_bsm, "p_bsm"))

    @classmethod
    def uniform(cls, n: int, p: float) -> "ChainSpec":
        return cls(n, p, p, p)

    def p_eff(self) -> float:
        """Composition of all 4n-1 events on the relayed qubit."""
        ev = event_count(self.n)
        return compose_depolarizing(
            [self.p_link] * ev.link + [self.p_mem] * ev.memory + [self.p_bsm] * ev.bsm
        )
