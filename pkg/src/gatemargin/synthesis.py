"""Constructive synthesis: from threshold representations to circuits.

The pipeline realizes any coefficient vector a with ||a||_1 <= 1 as the
diagonal readout of a matchgate circuit:

1. factor a = u * v elementwise with ||u||_2 = 1 and ||v||_2 = ||a||_1,
2. interleave u, v (and a filler row w orthogonal to u) into the first
   two rows of a special orthogonal matrix,
3. split that matrix into adjacent-plane Givens rotations and emit one
   named gate per plane (zrot for odd planes, xxrot for even ones).

A Givens rotation by angle b in plane (p, p+1) maps to gate angle b/2
(see GIVENS_ANGLE_FACTOR); the mode plane of the last qubit has no
adjacent gate of its own, so those rotations ride between a pair of
fswaps on the last two lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gatemargin.ltg import LtgRepresentation, margin_of_representation
from gatemargin.matchgates import (
    ATOL,
    GIVENS_ANGLE_FACTOR,
    Matchgate,
    MatchgateCircuit,
    Rotation,
    compile_circuit,
    diag_coefficients,
    fswap,
    rotation_deviation,
    xxrot,
    zrot,
)

RECOMPILE_ATOL = 1e-8
"""Tolerance for the decompose-then-recompile consistency check."""


@dataclass(frozen=True)
class OneNormFactorization:
    """Elementwise split a_k = u_k * v_k with ||u||_2 = 1, ||v||_2 = ||a||_1."""

    u: tuple[float, ...]
    v: tuple[float, ...]


def factor_one_norm(a: Sequence[float], atol: float = ATOL) -> OneNormFactorization:
    """Split a vector of 1-norm at most one into unit-vector times remainder.

    u_k = sqrt(|a_k| / ||a||_1) and v_k = sign(a_k) * sqrt(|a_k| * ||a||_1).
    The all-zero vector has no such split along these formulas; it
    degenerates to u = e_1, v = 0.
    """
    a = [float(x) for x in a]
    if not a:
        raise ValueError("need at least one coefficient")
    norm = sum(abs(x) for x in a)
    if norm > 1.0 + atol:
        raise ValueError(f"coefficients have 1-norm {norm:.12f} > 1")
    if norm == 0.0:
        return OneNormFactorization((1.0,) + (0.0,) * (len(a) - 1), (0.0,) * len(a))
    u = tuple(math.sqrt(abs(x) / norm) for x in a)
    v = tuple(math.copysign(math.sqrt(abs(x) * norm), x) if x else 0.0 for x in a)
    return OneNormFactorization(u, v)


def build_rotation(a: Sequence[float], atol: float = ATOL) -> Rotation:
    """Special orthogonal matrix whose diagonal readout coefficients are a.

    Only the first two rows matter for the readout; they interleave the
    factor vectors as (u_1, 0, u_2, 0, ...) and (w_1, v_1, w_2, v_2, ...)
    with w orthogonal to u carrying the leftover row norm.  The remaining
    rows are any completion, fixed up to determinant +1.

    A single-qubit register only admits a = (1): its 2x2 rotations all
    read out a_1 = det R = 1.
    """
    a = [float(x) for x in a]
    m = len(a)
    if m == 1:
        if abs(a[0] - 1.0) <= atol:
            return Rotation(np.eye(2))
        raise ValueError("one-qubit rotations force a = (1); add an ancilla line")
    fact = factor_one_norm(a, atol)
    u = np.array(fact.u)
    v = np.array(fact.v)
    leftover = 1.0 - float(v @ v)
    if leftover < -3.0 * atol:  # ||v||^2 <= (1 + atol)^2 for admissible input
        raise ValueError(f"factor norm {float(v @ v):.12f} exceeds 1")
    if leftover <= 0.0:
        w = np.zeros(m)
    else:
        pick = int(np.abs(u).argmin())  # most orthogonal basis vector
        w = -u[pick] * u
        w[pick] += 1.0
        w /= np.linalg.norm(w)
        w *= math.sqrt(leftover)

    dim = 2 * m
    rows = np.zeros((2, dim))
    rows[0, 0::2] = u
    rows[1, 0::2] = w
    rows[1, 1::2] = v
    entries = _complete_special_orthogonal(rows, dim)

    built = diag_coefficients(Rotation(entries), atol=10 * atol)
    if max(abs(x - y) for x, y in zip(built.a, a)) > 10 * atol:
        raise RuntimeError("completed rotation lost the requested readout coefficients")
    return Rotation(entries)


def _complete_special_orthogonal(rows: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal rows to SO(dim) by Gram-Schmidt over basis vectors."""
    basis = [rows[i] for i in range(rows.shape[0])]
    for i in range(dim):
        if len(basis) == dim:
            break
        cand = np.zeros(dim)
        cand[i] = 1.0
        for vec in basis:
            cand -= (vec @ cand) * vec
        norm = np.linalg.norm(cand)
        if norm < 1e-8:  # numerically inside the current span
            continue
        cand /= norm
        for vec in basis:  # second pass tightens orthogonality
            cand -= (vec @ cand) * vec
        cand /= np.linalg.norm(cand)
        basis.append(cand)
    if len(basis) != dim:
        raise RuntimeError("orthogonal completion ran out of basis candidates")
    entries = np.array(basis)
    if np.linalg.det(entries) < 0:
        entries[-1] = -entries[-1]
    return entries


# ---------------------------------------------------------------------------
# Givens decomposition into adjacent-plane rotations


@dataclass(frozen=True)
class _Givens:
    """Left-multiplied plane rotation: rows (p, p+1), block [[c, s], [-s, c]]."""

    plane: int  # 0-based lower coordinate
    angle: float


def _eliminate_to_identity(entries: np.ndarray, atol: float) -> list[_Givens]:
    """Adjacent-plane rotations g_N ... g_1 R = I, returned in applied order."""
    work = entries.copy()
    dim = work.shape[0]
    ops: list[_Givens] = []
    for col in range(dim - 1):
        for row in range(dim - 1, col, -1):
            a, b = work[row - 1, col], work[row, col]
            if abs(b) < 1e-14:
                work[row, col] = 0.0
                continue
            r = math.hypot(a, b)
            c, s = a / r, b / r
            g = np.array([[c, s], [-s, c]])
            work[row - 1 : row + 1] = g @ work[row - 1 : row + 1]
            work[row, col] = 0.0
            ops.append(_Givens(row - 1, math.atan2(b, a)))
    # residual is diagonal +-1 with unit determinant; clear -1 pairs with
    # half-turns, walking the lower -1 up next to its partner
    diag = np.diagonal(work).copy()
    if np.abs(np.abs(diag) - 1.0).max() > atol or abs(np.prod(diag) - 1.0) > atol:
        raise ValueError("matrix is not special orthogonal (left-over after elimination)")
    negatives = [i for i in range(dim) if diag[i] < 0]
    while negatives:
        lo, hi = negatives[0], negatives[1]
        for p in range(lo, hi):
            ops.append(_Givens(p, math.pi))
        # planes lo..hi-1 flip pairwise: net effect clears both signs
        negatives = negatives[2:]
    return ops


def rotation_to_circuit(rotation: Rotation, atol: float = ATOL) -> MatchgateCircuit:
    """Decompose a mode rotation into zrot/xxrot/fswap gates.

    Emits at most one gate per Givens rotation except in the last mode
    plane (2m-1, 2m), which is reached by conjugating a zrot on the last
    two lines with fswaps.  The emitted circuit recompiles to the input
    within RECOMPILE_ATOL.
    """
    err = rotation_deviation(rotation.entries)
    if err > atol:
        raise ValueError(f"not a rotation (deviation {err:.3e})")
    dim = rotation.dim
    m = rotation.num_qubits
    ops = _eliminate_to_identity(rotation.entries, atol)
    # R = g_1^T g_2^T ... g_N^T, and a circuit [t_1..t_T] compiles to
    # R(t_T)...R(t_1): emit the transposed rotations in reverse
    gates: list[Matchgate] = []
    for op in reversed(ops):
        gates.extend(_plane_gates(op.plane, -op.angle, m))
    circuit = MatchgateCircuit(m, tuple(gates))
    recompiled = compile_circuit(circuit).entries
    drift = np.abs(recompiled - rotation.entries).max()
    if drift > RECOMPILE_ATOL:
        raise RuntimeError(f"decomposition drifted {drift:.3e} from its target")
    return circuit


def _plane_gates(plane: int, angle: float, m: int) -> list[Matchgate]:
    """Gates whose compiled rotation is the Givens rotation of the plane.

    Gate angles are half the plane angle (GIVENS_ANGLE_FACTOR).
    """
    phi = angle / GIVENS_ANGLE_FACTOR
    if plane % 2 == 0:
        k = plane // 2 + 1  # plane (2k-1, 2k): Z-rotation on qubit k
        if k < m:
            return [zrot(k, phi)]
        if m < 2:
            raise ValueError("last-plane rotation needs at least two lines")
        return [fswap(m - 1), zrot(m - 1, phi), fswap(m - 1)]
    k = (plane + 1) // 2  # plane (2k, 2k+1): XX-rotation on lines (k, k+1)
    return [xxrot(k, phi)]


def random_special_orthogonal(dim: int, rng: np.random.Generator) -> Rotation:
    """Haar-ish random SO(dim) element from a QR factorization."""
    mat = rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(mat)
    q = q * np.sign(np.diagonal(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return Rotation(q)


# ---------------------------------------------------------------------------
# end-to-end synthesis


@dataclass(frozen=True)
class SynthesisResult:
    """Circuit computing the represented function on inputs (x, ancilla 0)."""

    circuit: MatchgateCircuit
    rotation: Rotation
    promised_probability: float
    margin: float
    representation: LtgRepresentation

    @property
    def gate_count(self) -> int:
        return len(self.circuit.gates)

    def metadata(self) -> dict:
        return {
            "n": self.representation.n,
            "margin": self.margin,
            "promised_probability": self.promised_probability,
            "representation": self.representation.to_dict(),
            "gate_count": self.gate_count,
        }


def synthesize_ltg_circuit(
    rep: LtgRepresentation,
    epsilon: float | None = None,
    atol: float = ATOL,
) -> SynthesisResult:
    """Build an (n+1)-qubit circuit reading out w . xhat + theta on qubit 1.

    The ancilla line carries the threshold: its zero state contributes
    +theta to the readout.  The per-input success probability is
    (1 + |w . xhat + theta|) / 2 >= (margin + 1) / 2.
    """
    rep = rep.as_floats()
    norm = rep.one_norm()
    if abs(norm - 1.0) > atol:
        raise ValueError(
            f"representation has 1-norm {norm:.12f}; normalize it to 1 before synthesis"
        )
    if epsilon is None:
        epsilon, _ = margin_of_representation(rep)
    coeffs = list(rep.w) + [rep.theta]
    rotation = build_rotation(coeffs, atol)
    circuit = rotation_to_circuit(rotation, atol)
    return SynthesisResult(
        circuit=circuit,
        rotation=rotation,
        promised_probability=(float(epsilon) + 1.0) / 2.0,
        margin=float(epsilon),
        representation=rep,
    )
