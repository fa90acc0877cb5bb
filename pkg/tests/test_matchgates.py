"""Gate validation, compilation to rotations, and readout statistics."""

import numpy as np
import pytest

from gatemargin import dense
from gatemargin import matchgates as mg
from gatemargin.verify import random_circuit, random_su2

RNG = np.random.default_rng(101)

FSWAP_DENSE = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]], dtype=complex
)


def test_validate_identity_gate():
    ok, diag = mg.validate_matchgate(mg.matchgate(np.eye(2), np.eye(2), 1))
    assert ok and diag == "ok"


def test_validate_rejects_raw_swap_blocks():
    # determinant -1 on both blocks: the naive fswap block assignment
    gate = mg.matchgate([[1, 0], [0, -1]], [[0, 1], [1, 0]], 1)
    ok, diag = mg.validate_matchgate(gate)
    assert not ok
    assert "det(A)" in diag and "det(B)" in diag


def test_validate_rejects_non_unitary_block():
    gate = mg.matchgate(np.eye(2), [[2, 0], [0, 0.5]], 1)
    ok, diag = mg.validate_matchgate(gate)
    assert not ok
    assert "block B is not unitary" in diag


def test_fswap_constructor_matches_action_up_to_global_phase():
    matrix = mg.fswap(1).matrix()
    # phase read off the first nonzero entry; the rest must follow exactly
    phase = matrix[0, 0] / FSWAP_DENSE[0, 0]
    assert abs(abs(phase) - 1.0) < 1e-12
    assert np.allclose(matrix, phase * FSWAP_DENSE)
    ok, _ = mg.validate_matchgate(mg.fswap(3))
    assert ok


def test_named_constructors_are_valid_gates():
    for gate in (mg.zrot(1, 0.3), mg.xxrot(2, -1.2), mg.fswap(2)):
        ok, diag = mg.validate_matchgate(gate)
        assert ok, diag


def test_identity_gate_compiles_to_identity_rotation():
    rot = mg.gate_to_rotation(mg.matchgate(np.eye(2), np.eye(2), 1), 3)
    assert np.allclose(rot.entries, np.eye(6))


def test_fswap_rotation_swaps_mode_pairs():
    rot = mg.gate_to_rotation(mg.fswap(1), 2)
    expected = np.zeros((4, 4))
    expected[0, 2] = expected[1, 3] = expected[2, 0] = expected[3, 1] = 1.0
    assert np.allclose(rot.entries, expected)
    assert np.linalg.det(rot.entries) == pytest.approx(1.0)


def test_zrot_rotation_turns_first_plane_by_twice_the_angle():
    phi = np.pi / 4
    rot = mg.gate_to_rotation(mg.zrot(1, phi), 2)
    expected = np.eye(4)
    expected[0, 0] = expected[1, 1] = np.cos(2 * phi)
    expected[0, 1] = np.sin(2 * phi)
    expected[1, 0] = -np.sin(2 * phi)
    assert np.allclose(rot.entries, expected, atol=1e-12)
    # same statement via the dense extraction oracle
    circuit = mg.MatchgateCircuit(2, (mg.zrot(1, phi),))
    assert np.allclose(dense.oracle_rotation(circuit).entries, expected, atol=1e-12)


def test_xxrot_rotation_turns_middle_plane():
    phi = 0.37
    rot = mg.gate_to_rotation(mg.xxrot(1, phi), 2)
    expected = np.eye(4)
    expected[1, 1] = expected[2, 2] = np.cos(2 * phi)
    expected[1, 2] = np.sin(2 * phi)
    expected[2, 1] = -np.sin(2 * phi)
    assert np.allclose(rot.entries, expected, atol=1e-12)


def test_gate_to_rotation_rejects_invalid_gate():
    bad = mg.Matchgate(np.eye(2) * 2.0, np.eye(2), 1)
    with pytest.raises(ValueError, match="not unitary"):
        mg.gate_to_rotation(bad, 2)


def test_gate_to_rotation_rejects_out_of_register_line():
    with pytest.raises(ValueError, match="does not fit"):
        mg.gate_to_rotation(mg.fswap(2), 2)


def test_compile_empty_circuit():
    rot = mg.compile_circuit(mg.MatchgateCircuit(3))
    assert np.array_equal(rot.entries, np.eye(6))


def test_compile_single_gate_equals_gate_rotation():
    gate = mg.xxrot(2, 0.9)
    circuit = mg.MatchgateCircuit(4, (gate,))
    assert np.allclose(
        mg.compile_circuit(circuit).entries, mg.gate_to_rotation(gate, 4).entries
    )


def test_double_fswap_compiles_to_identity():
    circuit = mg.MatchgateCircuit(2, (mg.fswap(1), mg.fswap(1)))
    assert np.allclose(mg.compile_circuit(circuit).entries, np.eye(4), atol=1e-12)
    # and the dense unitary is the identity up to global phase
    unitary = dense.circuit_unitary(circuit)
    phase = unitary[0, 0]
    assert np.allclose(unitary, phase * np.eye(4), atol=1e-12)


def test_compile_names_the_offending_gate():
    bad = mg.Matchgate(np.eye(2) * 2.0, np.eye(2), 1)
    circuit = mg.MatchgateCircuit(2, (mg.fswap(1), bad))
    with pytest.raises(ValueError, match="gate 1 is invalid"):
        mg.compile_circuit(circuit)


def test_circuit_rejects_gate_outside_register():
    with pytest.raises(ValueError, match="gate 0"):
        mg.MatchgateCircuit(2, (mg.fswap(2),))


def test_compile_matches_dense_extraction_on_random_circuits():
    for trial in range(8):
        m = 2 + trial % 4
        circuit = random_circuit(m, 12, RNG)
        compiled = mg.compile_circuit(circuit).entries
        extracted = dense.oracle_rotation(circuit).entries
        assert np.abs(compiled - extracted).max() < 1e-11


def test_compiled_rotations_are_special_orthogonal():
    for m in (2, 4, 6):
        entries = mg.compile_circuit(random_circuit(m, 20, RNG)).entries
        assert np.abs(entries.T @ entries - np.eye(2 * m)).max() < 1e-9
        assert abs(np.linalg.det(entries) - 1.0) < 1e-9


def test_concatenation_composes_with_later_circuit_on_the_left():
    m = 4
    first = random_circuit(m, 6, RNG)
    second = random_circuit(m, 6, RNG)
    combined = mg.MatchgateCircuit(m, first.gates + second.gates)
    product = mg.compile_circuit(second).entries @ mg.compile_circuit(first).entries
    assert np.abs(mg.compile_circuit(combined).entries - product).max() < 1e-9
    assert np.abs(dense.oracle_rotation(combined).entries - product).max() < 1e-9


def test_diag_coefficients_identity():
    rot = mg.Rotation.identity(4)
    assert mg.diag_coefficients(rot).a == (1.0, 0.0, 0.0, 0.0)


def test_diag_coefficients_fswap():
    rot = mg.gate_to_rotation(mg.fswap(1), 2)
    a = mg.diag_coefficients(rot).a
    assert a == pytest.approx((0.0, 1.0))


def test_diag_coefficients_commute_with_z_rotation():
    rot = mg.compile_circuit(mg.MatchgateCircuit(3, (mg.zrot(1, 0.8),)))
    assert mg.diag_coefficients(rot).a == pytest.approx((1.0, 0.0, 0.0))


def test_diag_coefficients_one_norm_bounded():
    for m in (2, 3, 5):
        rot = mg.compile_circuit(random_circuit(m, 25, RNG))
        assert mg.diag_coefficients(rot).one_norm() <= 1.0 + 1e-9


def test_diag_coefficients_reject_non_rotation():
    with pytest.raises(ValueError, match="not a rotation"):
        mg.diag_coefficients(mg.Rotation(np.ones((4, 4))))


def test_expectation_z1_trivial_inputs():
    rot = mg.Rotation.identity(3)
    assert mg.expectation_z1(rot, "000") == pytest.approx(1.0)
    assert mg.expectation_z1(rot, "100") == pytest.approx(-1.0)


def test_expectation_z1_matches_dense_on_random_five_qubit_circuit():
    circuit = random_circuit(5, 18, RNG)
    rot = mg.compile_circuit(circuit)
    for index in range(32):
        x = tuple((index >> (4 - j)) & 1 for j in range(5))
        assert abs(
            mg.expectation_z1(rot, x) - dense.oracle_expectation_z1(circuit, x)
        ) < 1e-9


def test_success_probability_trivial_and_complementary():
    rot = mg.Rotation.identity(3)
    assert mg.success_probability(rot, "000", 0) == pytest.approx(1.0)
    assert mg.success_probability(rot, "000", 1) == pytest.approx(0.0)
    rot = mg.compile_circuit(random_circuit(3, 9, RNG))
    for index in range(8):
        x = tuple((index >> (2 - j)) & 1 for j in range(3))
        total = mg.success_probability(rot, x, 0) + mg.success_probability(rot, x, 1)
        assert total == 1.0  # exact complement by construction


def test_computes_function_identity_reads_first_bit():
    rot = mg.Rotation.identity(3)
    first_bit = tuple((i >> 2) & 1 for i in range(8))
    negated = tuple(1 - b for b in first_bit)
    assert mg.computes_function(rot, first_bit, 3) == pytest.approx(1.0)
    assert mg.computes_function(rot, negated, 3) == pytest.approx(0.0)


def test_computes_function_rejects_small_register():
    with pytest.raises(ValueError, match="cannot host"):
        mg.computes_function(mg.Rotation.identity(2), (0,) * 16, 4)


def test_expectation_rejects_wrong_length():
    with pytest.raises(ValueError, match="expected 3 bits"):
        mg.expectation_z1(mg.Rotation.identity(3), "0110")


def test_circuit_json_roundtrip_preserves_action_and_kinds():
    gates = (
        mg.fswap(1),
        mg.zrot(2, 0.25),
        mg.xxrot(2, -0.75),
        mg.matchgate(random_su2(RNG), random_su2(RNG), 1),
    )
    circuit = mg.MatchgateCircuit(3, gates)
    restored = mg.circuit_from_json(mg.circuit_to_json(circuit))
    assert [g.kind for g in restored.gates] == ["fswap", "zrot", "xxrot", "matchgate"]
    assert np.allclose(
        mg.compile_circuit(restored).entries, mg.compile_circuit(circuit).entries
    )


def test_circuit_json_parse_errors():
    with pytest.raises(ValueError, match="does not parse"):
        mg.circuit_from_json("{not json")
    with pytest.raises(ValueError, match="unknown gate kind"):
        mg.circuit_from_dict({"num_qubits": 2, "gates": [{"kind": "cnot", "qubit": 1}]})
    with pytest.raises(ValueError, match="malformed"):
        mg.circuit_from_dict({"gates": []})
