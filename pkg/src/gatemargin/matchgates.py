"""Matchgate circuits and their Majorana-mode rotations.

Conventions fixed here and used everywhere else:

* Qubits are numbered 1..m.  Qubit 1 is the most significant bit of every
  basis-state index and truth-table row index.
* A bit b maps to the sign (-1)**b, so a bit string x maps to the sign
  vector ``xhat`` via 0 -> +1 and 1 -> -1.
* Qubit k carries the two Majorana modes 2k-1 and 2k (1-based).  A
  matchgate circuit U acts on them by a real special-orthogonal rotation R
  with  U^dag c_mu U = sum_nu R[mu, nu] c_nu.
* For a gate list [g1, ..., gT] applied in that time order, the circuit
  rotation is R(gT) @ ... @ R(g1) (later gates multiply on the left).
* The named rotation gates use half-angle bookkeeping: ``zrot(k, phi)``
  and ``xxrot(k, phi)`` turn the modes by 2*phi in the planes (2k-1, 2k)
  and (2k, 2k+1) respectively, with block [[cos, sin], [-sin, cos]].

All values are immutable after construction and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ATOL = 1e-9
"""Tolerance for unitarity, orthogonality, and coefficient checks."""

GIVENS_ANGLE_FACTOR = 2.0
"""Mode-plane rotation angle produced per unit of zrot/xxrot gate angle."""

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Two-qubit restrictions of the four Majorana modes touched by a gate on
# lines (k, k+1): the Z-strings on qubits < k commute through the gate.
_LOCAL_MODES = (
    np.kron(_X, _I2),
    np.kron(_Y, _I2),
    np.kron(_Z, _X),
    np.kron(_Z, _Y),
)
_LOCAL_MODE_NAMES = ("XI", "YI", "ZX", "ZY")

_PAULI2 = {
    n1 + n2: np.kron(p1, p2)
    for n1, p1 in (("I", _I2), ("X", _X), ("Y", _Y), ("Z", _Z))
    for n2, p2 in (("I", _I2), ("X", _X), ("Y", _Y), ("Z", _Z))
}


@dataclass(frozen=True, eq=False)
class Matchgate:
    """Two-qubit gate with block A on span{|00>,|11>} and B on span{|01>,|10>}.

    ``qubit`` is the lower of the two adjacent lines the gate acts on
    (1-based).  ``kind`` and ``angle`` are serialization metadata for the
    named constructors; they never affect the gate's action.
    """

    A: np.ndarray
    B: np.ndarray
    qubit: int
    kind: str = "matchgate"
    angle: float | None = None

    def matrix(self) -> np.ndarray:
        """Dense 4x4 matrix in the basis |00>, |01>, |10>, |11>."""
        a, b = self.A, self.B
        return np.array(
            [
                [a[0, 0], 0, 0, a[0, 1]],
                [0, b[0, 0], b[0, 1], 0],
                [0, b[1, 0], b[1, 1], 0],
                [a[1, 0], 0, 0, a[1, 1]],
            ],
            dtype=complex,
        )


@dataclass(frozen=True, eq=False)
class MatchgateCircuit:
    """Ordered matchgates on nearest-neighbor lines of an m-qubit register."""

    num_qubits: int
    gates: tuple[Matchgate, ...] = ()

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"register needs at least one qubit, got {self.num_qubits}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for idx, g in enumerate(self.gates):
            if not 1 <= g.qubit <= max(self.num_qubits - 1, 0):
                raise ValueError(
                    f"gate {idx} acts on lines ({g.qubit}, {g.qubit + 1}) "
                    f"outside the {self.num_qubits}-qubit register"
                )


@dataclass(frozen=True, eq=False)
class Rotation:
    """Real special-orthogonal matrix acting on the 2m Majorana modes."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim // 2

    @staticmethod
    def from_matrix(entries: np.ndarray, atol: float = ATOL) -> "Rotation":
        entries = np.asarray(entries, dtype=float)
        err = rotation_deviation(entries)
        if err > atol:
            raise ValueError(f"matrix is not special orthogonal (deviation {err:.3e})")
        return Rotation(entries)

    @staticmethod
    def identity(num_qubits: int) -> "Rotation":
        return Rotation(np.eye(2 * num_qubits))


@dataclass(frozen=True)
class DiagCoefficients:
    """Coefficients a with <x| U^dag Z_1 U |x> = a . xhat; always ||a||_1 <= 1."""

    a: tuple[float, ...]

    @property
    def num_qubits(self) -> int:
        return len(self.a)

    def one_norm(self) -> float:
        return float(sum(abs(v) for v in self.a))


def rotation_deviation(entries: np.ndarray) -> float:
    """Distance of a square matrix from the special orthogonal group.

    Max of the orthogonality defect ||R^T R - I||_max and |det R - 1|.
    """
    entries = np.asarray(entries, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] % 2:
        raise ValueError(f"expected an even-dimensional square matrix, got shape {entries.shape}")
    defect = np.abs(entries.T @ entries - np.eye(entries.shape[0])).max()
    return float(max(defect, abs(np.linalg.det(entries) - 1.0)))


# ---------------------------------------------------------------------------
# gate constructors


def matchgate(A: Iterable, B: Iterable, qubit: int) -> Matchgate:
    """Build a gate from explicit 2x2 blocks (validated lazily)."""
    A = np.array(A, dtype=complex)
    B = np.array(B, dtype=complex)
    if A.shape != (2, 2) or B.shape != (2, 2):
        raise ValueError("blocks A and B must be 2x2")
    return Matchgate(A, B, qubit)


def fswap(qubit: int) -> Matchgate:
    """Fermionic swap |ab> -> (-1)^(ab) |ba> on lines (qubit, qubit+1).

    The raw swap blocks have determinant -1; multiplying the whole gate by
    the global phase i puts both blocks in SU(2) without changing any
    conjugation action or measurement statistics.
    """
    return Matchgate(1j * _Z, 1j * _X, qubit, kind="fswap")


def zrot(qubit: int, angle: float) -> Matchgate:
    """exp(i*angle*Z) on line ``qubit``, as a gate on lines (qubit, qubit+1).

    Rotates the mode plane (2k-1, 2k) by 2*angle, k = qubit.
    """
    block = np.diag([np.exp(1j * angle), np.exp(-1j * angle)])
    return Matchgate(block, block.copy(), qubit, kind="zrot", angle=float(angle))


def xxrot(qubit: int, angle: float) -> Matchgate:
    """exp(i*angle*X(x)X) on lines (qubit, qubit+1).

    Rotates the mode plane (2k, 2k+1) by 2*angle, k = qubit.
    """
    c, s = np.cos(angle), np.sin(angle)
    block = np.array([[c, 1j * s], [1j * s, c]])
    return Matchgate(block, block.copy(), qubit, kind="xxrot", angle=float(angle))


# ---------------------------------------------------------------------------
# validation and compilation


def validate_matchgate(gate: Matchgate, atol: float = ATOL) -> tuple[bool, str]:
    """Check both blocks for unitarity and unit determinant.

    Returns (ok, diagnostic); the diagnostic lists every violated
    condition by name.
    """
    problems = []
    for name, block in (("A", gate.A), ("B", gate.B)):
        defect = np.abs(block.conj().T @ block - np.eye(2)).max()
        if defect > atol:
            problems.append(f"block {name} is not unitary (deviation {defect:.3e})")
        else:
            det = np.linalg.det(block)
            if abs(det - 1.0) > atol:
                problems.append(f"det({name}) = {det:.6g}, expected 1")
    if gate.qubit < 1:
        problems.append(f"line index {gate.qubit} is not positive")
    if problems:
        return False, "; ".join(problems)
    return True, "ok"


def gate_to_rotation(gate: Matchgate, num_qubits: int, atol: float = ATOL) -> Rotation:
    """Mode rotation of a single gate, embedded in a 2m x 2m identity.

    The active 4x4 block is read off by conjugating the four local mode
    operators by the gate and expanding in the two-qubit Pauli basis; any
    weight outside those four operators signals a non-matchgate and is
    rejected.
    """
    ok, diag = validate_matchgate(gate, atol)
    if not ok:
        raise ValueError(f"invalid matchgate: {diag}")
    if not 1 <= gate.qubit <= num_qubits - 1:
        raise ValueError(
            f"gate on lines ({gate.qubit}, {gate.qubit + 1}) does not fit "
            f"a {num_qubits}-qubit register"
        )
    block = _gate_block(gate, atol)
    out = np.eye(2 * num_qubits)
    lo = 2 * gate.qubit - 2
    out[lo : lo + 4, lo : lo + 4] = block
    return Rotation(out)


def _gate_block(gate: Matchgate, atol: float = ATOL) -> np.ndarray:
    g = gate.matrix()
    gd = g.conj().T
    block = np.zeros((4, 4))
    for i, mode in enumerate(_LOCAL_MODES):
        conj = gd @ mode @ g
        for name, pauli in _PAULI2.items():
            coeff = np.trace(pauli @ conj) / 4.0
            if name in _LOCAL_MODE_NAMES:
                j = _LOCAL_MODE_NAMES.index(name)
                if abs(coeff.imag) > atol:
                    raise RuntimeError(
                        f"complex mode coefficient {coeff:.3e} on {name}; "
                        "matchgate conjugation must stay real"
                    )
                block[i, j] = coeff.real
            elif abs(coeff) > atol:
                raise RuntimeError(
                    f"conjugation leaks weight {abs(coeff):.3e} onto Pauli {name}; "
                    "gate is not a matchgate"
                )
    return block


def compile_circuit(circuit: MatchgateCircuit, atol: float = ATOL) -> Rotation:
    """Compose per-gate rotations into the circuit rotation.

    Later gates multiply on the left: R = R(gT) @ ... @ R(g1).
    """
    m = circuit.num_qubits
    total = np.eye(2 * m)
    for idx, gate in enumerate(circuit.gates):
        ok, diag = validate_matchgate(gate, atol)
        if not ok:
            raise ValueError(f"gate {idx} is invalid: {diag}")
        total = gate_to_rotation(gate, m, atol).entries @ total
    return Rotation(total)


# ---------------------------------------------------------------------------
# output statistics through the rotation picture


def diag_coefficients(rotation: Rotation, atol: float = ATOL) -> DiagCoefficients:
    """Coefficients of Z_k in the diagonal part of U^dag Z_1 U.

    With rho, rho' the first two rows of R:  a_k = rho[2k-1]*rho'[2k]
    - rho[2k]*rho'[2k-1]  (1-based mode indices).
    """
    err = rotation_deviation(rotation.entries)
    if err > atol:
        raise ValueError(f"not a rotation (deviation {err:.3e})")
    rho, rhop = rotation.entries[0], rotation.entries[1]
    m = rotation.num_qubits
    a = tuple(float(rho[2 * k] * rhop[2 * k + 1] - rho[2 * k + 1] * rhop[2 * k]) for k in range(m))
    norm = sum(abs(v) for v in a)
    if norm > 1.0 + atol:
        raise RuntimeError(f"diagonal coefficients have 1-norm {norm} > 1")
    return DiagCoefficients(a)


def expectation_z1(rotation: Rotation, x: Sequence[int] | str) -> float:
    """<x| U^dag Z_1 U |x> = a . xhat for the circuit behind ``rotation``."""
    bits = parse_bits(x, rotation.num_qubits)
    a = diag_coefficients(rotation)
    return float(sum(v * (1 - 2 * b) for v, b in zip(a.a, bits)))


def success_probability(rotation: Rotation, x: Sequence[int] | str, target: int) -> float:
    """Probability that measuring qubit 1 of U|x> yields ``target``."""
    if target not in (0, 1):
        raise ValueError(f"target must be 0 or 1, got {target}")
    p0 = (1.0 + expectation_z1(rotation, x)) / 2.0
    return p0 if target == 0 else 1.0 - p0


def computes_function(rotation: Rotation, table: Sequence[int], num_inputs: int) -> float:
    """Minimum over all inputs x of P[first qubit of U|x,0...0> reads f(x)].

    ``table`` holds f row by row (row index has x_1 as its most
    significant bit); the register provides m - n ancilla zeros.
    """
    m = rotation.num_qubits
    n = num_inputs
    if len(table) != 2**n:
        raise ValueError(f"truth table needs {2 ** n} rows, got {len(table)}")
    if m < n:
        raise ValueError(f"register of {m} qubits cannot host {n} input bits")
    a = np.array(diag_coefficients(rotation).a)
    rows = np.arange(2**n)
    bits = (rows[:, None] >> (n - 1 - np.arange(n))) & 1
    xhat = np.ones((2**n, m))
    xhat[:, :n] = 1 - 2 * bits
    expect = xhat @ a
    signs = 1 - 2 * np.asarray(table, dtype=float)
    probs = (1.0 + signs * expect) / 2.0
    return float(probs.min())


# ---------------------------------------------------------------------------
# bit strings and JSON forms


def parse_bits(x: Sequence[int] | str, expected_len: int | None = None) -> tuple[int, ...]:
    """Normalize a bit string ("0110") or int sequence to a tuple of 0/1."""
    if isinstance(x, str):
        if not all(ch in "01" for ch in x):
            raise ValueError(f"bit string may contain only 0 and 1: {x!r}")
        bits = tuple(int(ch) for ch in x)
    else:
        bits = tuple(int(b) for b in x)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0 or 1: {x!r}")
    if expected_len is not None and len(bits) != expected_len:
        raise ValueError(f"expected {expected_len} bits, got {len(bits)}")
    return bits


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _block_to_json(block: np.ndarray) -> list:
    return [[_complex_pair(block[r, c]) for c in range(2)] for r in range(2)]


def _block_from_json(data) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.shape != (2, 2, 2):
        raise ValueError("matchgate block must be a 2x2 matrix of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def gate_to_dict(gate: Matchgate) -> dict:
    if gate.kind == "fswap":
        return {"kind": "fswap", "qubit": gate.qubit}
    if gate.kind in ("zrot", "xxrot"):
        return {"kind": gate.kind, "qubit": gate.qubit, "angle": gate.angle}
    return {
        "kind": "matchgate",
        "qubit": gate.qubit,
        "A": _block_to_json(gate.A),
        "B": _block_to_json(gate.B),
    }


def gate_from_dict(data: dict) -> Matchgate:
    try:
        kind = data["kind"]
        qubit = int(data["qubit"])
        if kind == "fswap":
            return fswap(qubit)
        if kind == "zrot":
            return zrot(qubit, float(data["angle"]))
        if kind == "xxrot":
            return xxrot(qubit, float(data["angle"]))
        if kind == "matchgate":
            return matchgate(_block_from_json(data["A"]), _block_from_json(data["B"]), qubit)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed gate entry: {exc}") from exc
    raise ValueError(f"unknown gate kind {kind!r}")


def circuit_to_dict(circuit: MatchgateCircuit) -> dict:
    return {
        "num_qubits": circuit.num_qubits,
        "gates": [gate_to_dict(g) for g in circuit.gates],
    }


def circuit_from_dict(data: dict) -> MatchgateCircuit:
    try:
        m = int(data["num_qubits"])
        gates = [gate_from_dict(g) for g in data["gates"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed circuit document: {exc}") from exc
    return MatchgateCircuit(m, tuple(gates))


def circuit_to_json(circuit: MatchgateCircuit) -> str:
    return json.dumps(circuit_to_dict(circuit), sort_keys=True)


def circuit_from_json(text: str) -> MatchgateCircuit:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"circuit JSON does not parse: {exc}") from exc
    return circuit_from_dict(data)


def rotation_to_lists(rotation: Rotation) -> list[list[float]]:
    """Row-major nested lists, the wire form of a rotation."""
    return [[float(v) for v in row] for row in rotation.entries]
