"""Cross-module verification checks, bundled into fast and full suites.

Every check pits one computation path against an independent one: the
compiled rotation against dense state evolution, the margin LP against
exhaustive enumeration, the synthesized circuits against their promised
probabilities, and the classical sampler against the quantum statistics.
The full suite is sized like the acceptance runs; fast trims the widths
and counts for interactive use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from gatemargin import dense, ltg, synthesis, wms
from gatemargin import matchgates as mg


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SuiteReport:
    level: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": c.details} for c in self.checks
            ],
        }


# ---------------------------------------------------------------------------
# random instances


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) block via a unit quaternion."""
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    a, b, c, d = v
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def random_circuit(num_qubits: int, num_gates: int, rng: np.random.Generator) -> mg.MatchgateCircuit:
    gates = tuple(
        mg.matchgate(random_su2(rng), random_su2(rng), int(rng.integers(1, num_qubits)))
        for _ in range(num_gates)
    )
    return mg.MatchgateCircuit(num_qubits, gates)


def random_readout_vector(length: int, rng: np.random.Generator) -> np.ndarray:
    """Random coefficients with 1-norm at most (and typically near) 1."""
    mags = rng.dirichlet(np.ones(length)) * rng.uniform(0.0, 1.0)
    return mags * rng.choice((-1.0, 1.0), size=length)


# ---------------------------------------------------------------------------
# individual checks


def check_oracle_equivalence(
    num_circuits: int = 500,
    gates_per_circuit: int = 20,
    widths: tuple[int, ...] = tuple(range(2, 11)),
    exhaustive_width: int = 6,
    sampled_inputs: int = 64,
    tol: float = 1e-9,
    seed: int = 20260801,
) -> CheckResult:
    """Rotation-path <Z_1> against dense state evolution on random circuits."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for index in range(num_circuits):
        m = widths[index % len(widths)]
        circuit = random_circuit(m, gates_per_circuit, rng)
        rotation = mg.compile_circuit(circuit)
        if m <= exhaustive_width:
            inputs = range(2**m)
        else:
            inputs = rng.integers(0, 2**m, size=sampled_inputs)
        for value in inputs:
            x = tuple((int(value) >> (m - 1 - j)) & 1 for j in range(m))
            gap = abs(mg.expectation_z1(rotation, x) - dense.oracle_expectation_z1(circuit, x))
            worst = max(worst, gap)
    return CheckResult(
        "oracle_equivalence",
        worst <= tol,
        {"circuits": num_circuits, "max_gap": worst, "tolerance": tol},
    )


def check_rotation_readout_roundtrip(
    num_vectors: int = 1000,
    max_len: int = 8,
    tol: float = 1e-9,
    seed: int = 20260802,
) -> CheckResult:
    """diag_coefficients(build_rotation(a)) must reproduce a."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_vectors):
        length = int(rng.integers(2, max_len + 1))
        a = random_readout_vector(length, rng)
        back = mg.diag_coefficients(synthesis.build_rotation(a)).a
        worst = max(worst, float(max(abs(x - y) for x, y in zip(back, a))))
    return CheckResult(
        "rotation_readout_roundtrip",
        worst <= tol,
        {"vectors": num_vectors, "max_gap": worst, "tolerance": tol},
    )


def check_circuit_recompilation(
    num_rotations: int = 100,
    widths: tuple[int, ...] = (2, 3, 4, 5, 6),
    tol: float = 1e-8,
    seed: int = 20260803,
) -> CheckResult:
    """compile_circuit(rotation_to_circuit(R)) must reproduce R entrywise."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    gate_counts = []
    for index in range(num_rotations):
        m = widths[index % len(widths)]
        rotation = synthesis.random_special_orthogonal(2 * m, rng)
        circuit = synthesis.rotation_to_circuit(rotation)
        gate_counts.append(len(circuit.gates))
        drift = float(np.abs(mg.compile_circuit(circuit).entries - rotation.entries).max())
        worst = max(worst, drift)
    return CheckResult(
        "circuit_recompilation",
        worst <= tol,
        {
            "rotations": num_rotations,
            "max_gap": worst,
            "tolerance": tol,
            "max_gates": max(gate_counts),
        },
    )


def check_majority_margins(ns: tuple[int, ...] = (3, 5, 7)) -> CheckResult:
    """The n-bit majority margin must come out exactly 1/n."""
    outcomes = {}
    passed = True
    for n in ns:
        cert = ltg.optimal_margin(ltg.BooleanFunction.majority(n))
        good = isinstance(cert, ltg.MarginCertificate) and cert.epsilon == Fraction(1, n)
        outcomes[n] = str(cert.epsilon) if isinstance(cert, ltg.MarginCertificate) else "none"
        passed = passed and good
    return CheckResult("majority_margins", passed, {"margins": outcomes})


def check_majority_synthesis(tol: float = 1e-8) -> CheckResult:
    """Dense success probability of the synthesized 3-bit majority circuit.

    Must reach 2/3 - tol on every input and touch 2/3 within tol on at
    least one (the margin witness).
    """
    f = ltg.BooleanFunction.majority(3)
    cert = ltg.optimal_margin(f)
    synth = synthesis.synthesize_ltg_circuit(
        cert.representation().as_floats(), epsilon=float(cert.epsilon)
    )
    promised = 2.0 / 3.0
    worst = 1.0
    closest = 1.0
    for i in range(8):
        x = tuple((i >> (2 - k)) & 1 for k in range(3))
        state = dense.apply_circuit(synth.circuit, x + (0,))
        p0 = dense.measure_qubit1_prob0(state)
        prob = p0 if f.bits[i] == 0 else 1.0 - p0
        worst = min(worst, prob)
        closest = min(closest, abs(prob - promised))
    passed = worst >= promised - tol and closest <= tol
    return CheckResult(
        "majority_synthesis",
        passed,
        {"min_probability": worst, "witness_gap": closest, "tolerance": tol},
    )


def check_single_bit_unit_probability(n: int = 3, tol: float = 1e-9) -> CheckResult:
    """Dictators and their negations must synthesize to probability 1."""
    worst = 1.0
    for k in range(1, n + 1):
        for negated in (False, True):
            f = ltg.BooleanFunction.dictator(n, k, negated)
            cert = ltg.optimal_margin(f)
            synth = synthesis.synthesize_ltg_circuit(
                cert.representation().as_floats(), epsilon=float(cert.epsilon)
            )
            for i in range(2**n):
                x = tuple((i >> (n - 1 - j)) & 1 for j in range(n))
                state = dense.apply_circuit(synth.circuit, x + (0,))
                p0 = dense.measure_qubit1_prob0(state)
                prob = p0 if f.bits[i] == 0 else 1.0 - p0
                worst = min(worst, prob)
    return CheckResult(
        "single_bit_unit_probability",
        worst >= 1.0 - tol,
        {"min_probability": worst, "tolerance": tol},
    )


def check_census_laws(n: int) -> CheckResult:
    """Census-wide checks: certificate soundness, margin/dependence laws.

    Every threshold gate must satisfy dep_count <= 1/margin with every
    dependent weight at least the margin; gates with margin above 1/2
    must be constant or single-bit.  Certificates are re-verified by
    exact enumeration, so the orbit bookkeeping is covered too.
    """
    entries = ltg.exhaustive_ltg_census(n)
    count = sum(e.is_ltg for e in entries)
    problems = []
    half = Fraction(1, 2)
    for e in entries:
        if not e.is_ltg:
            continue
        cert = e.certificate
        norm = sum(abs(v) for v in cert.w) + abs(cert.theta)
        if norm != 1:
            problems.append(f"{e.table.table_string()}: certificate norm {norm}")
            continue
        eps, witness = ltg.exact_signed_minimum(e.table, cert.w, cert.theta)
        if eps != cert.epsilon:
            problems.append(f"{e.table.table_string()}: margin {cert.epsilon} vs exact {eps}")
        if Fraction(e.dep_count) * cert.epsilon > 1:
            problems.append(f"{e.table.table_string()}: {e.dep_count} deps at margin {cert.epsilon}")
        if any(abs(cert.w[k - 1]) < cert.epsilon for k in e.dependent):
            problems.append(f"{e.table.table_string()}: dependent weight below margin")
        if cert.epsilon > half and e.dep_count > 1:
            problems.append(f"{e.table.table_string()}: large margin but {e.dep_count} deps")
    expected = {1: 4, 2: 14}
    if n in expected and count != expected[n]:
        problems.append(f"expected {expected[n]} threshold gates, counted {count}")
    details = {"n": n, "ltg_count": count, "problems": problems[:10]}
    return CheckResult(f"census_laws_n{n}", not problems, details)


def check_truncation_bounds(n: int) -> CheckResult:
    """Every census threshold gate truncates into the weight bracket."""
    entries = ltg.exhaustive_ltg_census(n)
    problems = []
    for e in entries:
        if not e.is_ltg:
            continue
        cert = e.certificate
        achieved = ltg.truncate_to_integer(cert.representation(), cert.epsilon)
        lower = 1 / cert.epsilon
        upper = 2 * Fraction(e.table.n + 1) / cert.epsilon
        if not lower <= achieved.weight <= upper:
            problems.append(
                f"{e.table.table_string()}: weight {achieved.weight} outside [{lower}, {upper}]"
            )
    return CheckResult(
        f"truncation_bounds_n{n}",
        not problems,
        {"n": n, "problems": problems[:10]},
    )


def check_xor_rejection() -> CheckResult:
    """Two-bit parity must be rejected with a verifiable certificate."""
    f = ltg.BooleanFunction.parity(2)
    result = ltg.optimal_margin(f)
    ok = isinstance(result, ltg.InfeasibilityCertificate) and result.verify(f)
    details = {}
    if ok:
        details["lambdas"] = [str(l) for l in result.lambdas]
    return CheckResult("xor_rejection", ok, details)


def check_wms_equivalence(max_n: int = 3, tol: float = 1e-8) -> CheckResult:
    """Sampler and circuit success probabilities agree for every census LTG."""
    worst = 0.0
    checked = 0
    for n in range(1, max_n + 1):
        for entry in ltg.exhaustive_ltg_census(n):
            if not entry.is_ltg:
                continue
            report = wms.equivalence_check(entry.table)
            worst = max(worst, report.max_discrepancy)
            checked += 1
    return CheckResult(
        "wms_equivalence",
        worst <= tol,
        {"functions": checked, "max_gap": worst, "tolerance": tol},
    )


def check_wms_sampling(samples: int = 100_000, seed: int = 7) -> CheckResult:
    """Monte Carlo frequencies against the exact Bernoulli parameter.

    Majority on input 001: the empirical frequency of the correct output
    must land within three standard errors, and a chi-square fit on the
    two outcome counts must clear significance 1e-3.
    """
    f = ltg.BooleanFunction.majority(3)
    prog = wms.from_representation(ltg.LtgRepresentation((1 / 3, 1 / 3, 1 / 3), 0.0))
    x = (0, 0, 1)
    exact = wms.exact_success_probability(prog, f, x)
    bits = wms.sample_bits(prog, x, samples, seed)
    hits = int(np.sum(bits == f.value(x)))
    freq = hits / samples
    sigma = math.sqrt(exact * (1 - exact) / samples)
    within = abs(freq - exact) <= 3 * sigma
    expected = np.array([exact * samples, (1 - exact) * samples])
    observed = np.array([hits, samples - hits])
    chi2 = float(np.sum((observed - expected) ** 2 / expected))
    p_value = math.erfc(math.sqrt(chi2 / 2.0))  # one degree of freedom
    return CheckResult(
        "wms_sampling",
        within and p_value >= 1e-3,
        {
            "exact": exact,
            "frequency": freq,
            "three_sigma": 3 * sigma,
            "chi2_p_value": p_value,
            "samples": samples,
            "seed": seed,
        },
    )


# ---------------------------------------------------------------------------
# suites


def run_suite(level: str = "fast", seed: int = 20260800) -> SuiteReport:
    """Run the named suite; "full" matches the acceptance workload."""
    if level not in ("fast", "full"):
        raise ValueError(f"unknown verification level {level!r}")
    if level == "fast":
        checks = [
            check_oracle_equivalence(
                num_circuits=60, widths=tuple(range(2, 7)), sampled_inputs=16, seed=seed
            ),
            check_rotation_readout_roundtrip(num_vectors=100, seed=seed + 1),
            check_circuit_recompilation(num_rotations=20, widths=(2, 3, 4), seed=seed + 2),
            check_majority_margins((3,)),
            check_majority_synthesis(),
            check_census_laws(2),
            check_truncation_bounds(2),
            check_xor_rejection(),
            check_wms_equivalence(max_n=2),
            check_wms_sampling(samples=20_000, seed=7),
        ]
    else:
        checks = [
            check_oracle_equivalence(seed=seed),
            check_rotation_readout_roundtrip(seed=seed + 1),
            check_circuit_recompilation(seed=seed + 2),
            check_majority_margins((3, 5, 7)),
            check_majority_synthesis(),
            check_single_bit_unit_probability(),
            check_census_laws(2),
            check_census_laws(3),
            check_census_laws(4),
            check_truncation_bounds(3),
            check_xor_rejection(),
            check_wms_equivalence(max_n=3),
            check_wms_sampling(samples=100_000, seed=7),
        ]
    return SuiteReport(level, tuple(checks))
