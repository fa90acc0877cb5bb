"""The classical sampler and its equivalence with synthesized circuits."""

import math

import numpy as np
import pytest

from gatemargin import ltg, wms

RNG = np.random.default_rng(404)


def random_normalized_rep(n, rng):
    w = rng.normal(size=n + 1)
    w /= np.abs(w).sum()
    return ltg.LtgRepresentation(tuple(w[:n]), float(w[n]))


# ---------------------------------------------------------------------------
# program construction


def test_from_representation_majority():
    prog = wms.from_representation(ltg.LtgRepresentation((1 / 3, 1 / 3, 1 / 3), 0.0))
    assert prog.pi == pytest.approx((1 / 3, 1 / 3, 1 / 3, 0.0))
    assert prog.c == (0, 0, 0, 0)


def test_from_representation_negation():
    prog = wms.from_representation(ltg.LtgRepresentation((-1.0,), 0.0))
    assert prog.pi == (1.0, 0.0)
    assert prog.c == (1, 0)


def test_from_representation_constant():
    prog = wms.from_representation(ltg.LtgRepresentation((0.0, 0.0), 1.0))
    assert prog.pi == (0.0, 0.0, 1.0)
    assert prog.c[-1] == 0
    for x in ("00", "01", "10", "11"):
        assert wms.exact_output_expectation(prog, x) == pytest.approx(1.0)


def test_from_representation_requires_normalization():
    with pytest.raises(ValueError, match="normalize"):
        wms.from_representation(ltg.LtgRepresentation((0.9, 0.9), 0.0))


def test_roundtrip_to_representation():
    for _ in range(20):
        rep = random_normalized_rep(4, RNG)
        back = wms.to_representation(wms.from_representation(rep))
        assert back.w == pytest.approx(rep.w)
        assert back.theta == pytest.approx(rep.theta)


def test_program_validation():
    with pytest.raises(ValueError, match="sum"):
        wms.WmsProgram((0.5, 0.2), (0, 0))
    with pytest.raises(ValueError, match="nonnegative"):
        wms.WmsProgram((1.5, -0.5), (0, 0))
    with pytest.raises(ValueError, match="equal length"):
        wms.WmsProgram((0.5, 0.5), (0, 0, 0))


def test_program_json_roundtrip():
    prog = wms.from_representation(ltg.LtgRepresentation((0.25, -0.25), 0.5))
    restored = wms.WmsProgram.from_dict(prog.to_dict())
    assert restored.pi == prog.pi
    assert restored.c == prog.c


# ---------------------------------------------------------------------------
# exact statistics


def test_expectation_equals_affine_form_for_random_representations():
    for n in range(1, 11):
        rep = random_normalized_rep(n, RNG)
        prog = wms.from_representation(rep)
        for _ in range(8):
            x = tuple(int(b) for b in RNG.integers(0, 2, size=n))
            xhat = [1 - 2 * b for b in x]
            affine = sum(v * s for v, s in zip(rep.w, xhat)) + rep.theta
            assert abs(wms.exact_output_expectation(prog, x) - affine) < 1e-12


def test_expectation_majority_example():
    prog = wms.from_representation(ltg.LtgRepresentation((1 / 3, 1 / 3, 1 / 3), 0.0))
    assert wms.exact_output_expectation(prog, "001") == pytest.approx(1 / 3)


def test_complemented_mask_negates_expectation():
    for _ in range(10):
        rep = random_normalized_rep(3, RNG)
        prog = wms.from_representation(rep)
        flipped = wms.WmsProgram(prog.pi, tuple(1 - b for b in prog.c))
        x = tuple(int(b) for b in RNG.integers(0, 2, size=3))
        assert wms.exact_output_expectation(flipped, x) == pytest.approx(
            -wms.exact_output_expectation(prog, x)
        )


def test_success_probability_examples():
    f = ltg.BooleanFunction.majority(3)
    prog = wms.from_representation(ltg.LtgRepresentation((1 / 3, 1 / 3, 1 / 3), 0.0))
    assert wms.exact_success_probability(prog, f, "001") == pytest.approx(2 / 3)
    assert wms.exact_success_probability(prog, f, "000") == pytest.approx(1.0)
    const = ltg.BooleanFunction.constant(2, 0)
    const_prog = wms.from_representation(ltg.LtgRepresentation((0.0, 0.0), 1.0))
    for x in ("00", "01", "10", "11"):
        assert wms.exact_success_probability(const_prog, const, x) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# sampling


def test_concentrated_program_is_deterministic():
    prog = wms.WmsProgram((0.0, 1.0, 0.0, 0.0), (0, 0, 0, 0))
    for seed in range(5):
        assert wms.sample(prog, "010", seed) == 1  # always reads x_2
    prog = wms.WmsProgram((0.0, 0.0, 0.0, 1.0), (0, 0, 0, 1))
    for seed in range(5):
        assert wms.sample(prog, "010", seed) == 1  # always the constant bit


def test_sampling_is_seed_reproducible():
    prog = wms.from_representation(ltg.LtgRepresentation((1 / 3, 1 / 3, 1 / 3), 0.0))
    a = wms.sample_bits(prog, "001", 1000, seed=42)
    b = wms.sample_bits(prog, "001", 1000, seed=42)
    assert np.array_equal(a, b)


def test_sampling_frequency_within_three_sigma():
    f = ltg.BooleanFunction.majority(3)
    prog = wms.from_representation(ltg.LtgRepresentation((1 / 3, 1 / 3, 1 / 3), 0.0))
    samples = 100_000
    bits = wms.sample_bits(prog, "001", samples, seed=7)
    freq = float(np.mean(bits == f.value("001")))
    exact = wms.exact_success_probability(prog, f, "001")
    sigma = math.sqrt(exact * (1 - exact) / samples)
    assert abs(freq - exact) <= 3 * sigma


# ---------------------------------------------------------------------------
# equivalence with the circuit path


def test_equivalence_majority():
    report = wms.equivalence_check(ltg.BooleanFunction.majority(3))
    assert report.max_discrepancy < 1e-8
    assert sorted(report.wms_probabilities) == pytest.approx(
        sorted([1.0, 2 / 3, 2 / 3, 2 / 3, 2 / 3, 2 / 3, 2 / 3, 1.0])
    )


def test_equivalence_single_bit_and_constant():
    for f in (ltg.BooleanFunction.dictator(2, 1), ltg.BooleanFunction.constant(2, 1)):
        report = wms.equivalence_check(f)
        assert report.max_discrepancy < 1e-8
        assert min(report.wms_probabilities) >= 1.0 - 1e-9


def test_equivalence_rejects_non_ltg():
    with pytest.raises(ValueError, match="not a linear threshold gate"):
        wms.equivalence_check(ltg.BooleanFunction.parity(2))
