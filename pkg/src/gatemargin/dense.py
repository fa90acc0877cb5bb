"""Brute-force state-vector simulation, the ground truth at small widths.

Amplitude index order matches the global convention: qubit 1 is the most
significant bit of the basis index.  Capacity is capped at M_MAX qubits.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from gatemargin.errors import CapacityError
from gatemargin.matchgates import MatchgateCircuit, Rotation, parse_bits

M_MAX = 14
"""Largest register the dense backend accepts (2**M_MAX amplitudes)."""

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_capacity(num_qubits: int) -> None:
    if num_qubits > M_MAX:
        raise CapacityError(f"dense backend is capped at {M_MAX} qubits, got {num_qubits}")


def apply_circuit(circuit: MatchgateCircuit, x: Sequence[int] | str) -> np.ndarray:
    """Return U|x> as a 2**m complex vector."""
    m = circuit.num_qubits
    _check_capacity(m)
    bits = parse_bits(x, m)
    state = np.zeros(2**m, dtype=complex)
    index = 0
    for b in bits:
        index = (index << 1) | b
    state[index] = 1.0
    for gate in circuit.gates:
        k = gate.qubit
        g4 = gate.matrix()
        # qubits (k, k+1) are adjacent axes, so they fuse into one axis of 4
        blk = state.reshape(2 ** (k - 1), 4, 2 ** (m - k - 1))
        state = np.einsum("ab,ibj->iaj", g4, blk).reshape(-1)
    return state


def measure_qubit1_prob0(state: np.ndarray) -> float:
    """Probability that a computational measurement of qubit 1 yields 0."""
    half = state.shape[0] // 2
    return float(np.sum(np.abs(state[:half]) ** 2))


def oracle_expectation_z1(circuit: MatchgateCircuit, x: Sequence[int] | str) -> float:
    """<x| U^dag Z_1 U |x> evaluated by full state evolution."""
    return 2.0 * measure_qubit1_prob0(apply_circuit(circuit, x)) - 1.0


def circuit_unitary(circuit: MatchgateCircuit) -> np.ndarray:
    """Dense 2**m x 2**m matrix of the whole circuit (small m only)."""
    m = circuit.num_qubits
    _check_capacity(m)
    dim = 2**m
    cols = []
    for index in range(dim):
        bits = [(index >> (m - 1 - j)) & 1 for j in range(m)]
        cols.append(apply_circuit(circuit, bits))
    return np.stack(cols, axis=1)


def majorana_mode(mu: int, num_qubits: int) -> np.ndarray:
    """Dense Majorana operator: X_k (odd mu) or Y_k (even mu) times Z-string."""
    if not 1 <= mu <= 2 * num_qubits:
        raise ValueError(f"mode index {mu} outside 1..{2 * num_qubits}")
    _check_capacity(num_qubits)
    k = (mu + 1) // 2
    out = np.array([[1.0 + 0j]])
    for q in range(1, num_qubits + 1):
        if q < k:
            factor = _PAULI["Z"]
        elif q == k:
            factor = _PAULI["X"] if mu % 2 == 1 else _PAULI["Y"]
        else:
            factor = _PAULI["I"]
        out = np.kron(out, factor)
    return out


def oracle_rotation(circuit: MatchgateCircuit) -> Rotation:
    """Extract the full mode rotation from the dense unitary.

    Uses the trace inner product R[mu, nu] = tr(c_nu U^dag c_mu U) / 2**m.
    Exponential in m; intended as the calibration oracle for the compiled
    rotation path.
    """
    m = circuit.num_qubits
    unitary = circuit_unitary(circuit)
    modes = [majorana_mode(mu, m) for mu in range(1, 2 * m + 1)]
    entries = np.zeros((2 * m, 2 * m))
    for a, mode in enumerate(modes):
        conj = unitary.conj().T @ mode @ unitary
        for b, other in enumerate(modes):
            coeff = np.trace(other @ conj) / 2**m
            entries[a, b] = coeff.real
    return Rotation(entries)
