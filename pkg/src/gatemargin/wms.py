"""Weighted majority sampling: the classical twin of a matchgate computer.

A program is a distribution pi over the indices 1..n+1 plus a mask c of
n+1 bits.  One run draws an index k; for k <= n it outputs x_k xor c_k,
and for k = n+1 it outputs the constant bit c_{n+1}.  Programs built from
a normalized representation (w, theta) reproduce w . xhat + theta as the
expectation of the signed output, which ties their per-input success
probability to the synthesized circuit's.

Randomness comes from numpy's default PCG64 generator, seeded per call;
concurrent streams should derive distinct seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gatemargin.dense import apply_circuit, measure_qubit1_prob0
from gatemargin.ltg import (
    BooleanFunction,
    LtgRepresentation,
    MarginCertificate,
    optimal_margin,
)
from gatemargin.matchgates import parse_bits
from gatemargin.synthesis import SynthesisResult, synthesize_ltg_circuit

ATOL = 1e-9


@dataclass(frozen=True)
class WmsProgram:
    """Distribution pi over n+1 indices and the xor/constant mask c."""

    pi: tuple[float, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        if len(self.pi) != len(self.c):
            raise ValueError("pi and c must have equal length")
        if len(self.pi) < 2:
            raise ValueError("a program needs at least one input index plus the constant slot")
        if any(p < 0 for p in self.pi):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.pi) - 1.0) > ATOL:
            raise ValueError(f"probabilities sum to {sum(self.pi)}, expected 1")
        if any(b not in (0, 1) for b in self.c):
            raise ValueError("mask entries must be bits")

    @property
    def n(self) -> int:
        return len(self.pi) - 1

    def to_dict(self) -> dict:
        return {"pi": [float(p) for p in self.pi], "c": "".join(str(b) for b in self.c)}

    @staticmethod
    def from_dict(data: dict) -> "WmsProgram":
        try:
            pi = tuple(float(p) for p in data["pi"])
            c = parse_bits(data["c"], len(pi))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed program document: {exc}") from exc
        return WmsProgram(pi, c)


def from_representation(rep: LtgRepresentation) -> WmsProgram:
    """Fold signs out of a normalized (w, theta): pi holds magnitudes, c signs.

    Zero weights map to pi_k = 0 with c_k = 0 (the bit is immaterial);
    the mapping is otherwise invertible via w_k = (-1)**c_k * pi_k.
    """
    rep = rep.as_floats()
    if not rep.is_normalized(ATOL):
        raise ValueError(
            f"representation has 1-norm {rep.one_norm():.12f}; normalize it to 1 first"
        )
    pi = tuple(abs(v) for v in rep.w) + (abs(rep.theta),)
    c = tuple(1 if v < 0 else 0 for v in rep.w) + (1 if rep.theta < 0 else 0,)
    return WmsProgram(pi, c)


def to_representation(prog: WmsProgram) -> LtgRepresentation:
    w = tuple((1 - 2 * b) * p for p, b in zip(prog.pi[:-1], prog.c[:-1]))
    return LtgRepresentation(w, (1 - 2 * prog.c[-1]) * prog.pi[-1])


def exact_output_expectation(prog: WmsProgram, x: Sequence[int] | str) -> float:
    """Expected signed output: sum_k pi_k (-1)^(x_k + c_k) + pi_{n+1} (-1)^c_{n+1}."""
    bits = parse_bits(x, prog.n)
    total = prog.pi[-1] * (1 - 2 * prog.c[-1])
    for p, b, ck in zip(prog.pi, bits, prog.c):
        total += p * (1 - 2 * (b ^ ck))
    return float(total)


def exact_success_probability(
    prog: WmsProgram, f: BooleanFunction, x: Sequence[int] | str
) -> float:
    """Probability that one run outputs f(x)."""
    sign = 1 - 2 * f.value(x)
    return (1.0 + sign * exact_output_expectation(prog, x)) / 2.0


def sample(prog: WmsProgram, x: Sequence[int] | str, seed: int) -> int:
    """One output bit of the three-step procedure."""
    return int(sample_bits(prog, x, 1, seed)[0])


def sample_bits(
    prog: WmsProgram, x: Sequence[int] | str, num_samples: int, seed: int
) -> np.ndarray:
    """Vectorized repeated runs (independent draws, one shared generator)."""
    bits = np.array(parse_bits(x, prog.n), dtype=np.int64)
    rng = np.random.default_rng(seed)
    pi = np.array(prog.pi, dtype=float)
    pi = pi / pi.sum()  # remove float dust so choice() accepts it
    ks = rng.choice(prog.n + 1, size=num_samples, p=pi)
    c = np.array(prog.c, dtype=np.int64)
    outcome_by_index = np.concatenate([bits ^ c[:-1], c[-1:]])
    return outcome_by_index[ks]


@dataclass(frozen=True)
class EquivalenceReport:
    """Per-input comparison of the sampler against the synthesized circuit."""

    f: BooleanFunction
    synthesis: SynthesisResult
    program: WmsProgram
    wms_probabilities: tuple[float, ...]
    circuit_probabilities: tuple[float, ...]

    @property
    def max_discrepancy(self) -> float:
        return max(
            abs(a - b) for a, b in zip(self.wms_probabilities, self.circuit_probabilities)
        )

    def passed(self, atol: float = 1e-8) -> bool:
        return self.max_discrepancy <= atol


def equivalence_check(f: BooleanFunction) -> EquivalenceReport:
    """Drive both computers from one optimal representation and compare.

    The sampler's exact per-input success probability must match the
    dense-simulated circuit's, input by input.
    """
    cert = optimal_margin(f)
    if not isinstance(cert, MarginCertificate):
        raise ValueError("function is not a linear threshold gate")
    rep = cert.representation().as_floats()
    prog = from_representation(rep)
    synth = synthesize_ltg_circuit(rep, epsilon=float(cert.epsilon))
    n = f.n
    wms_probs = []
    circ_probs = []
    for i in range(2**n):
        x = tuple((i >> (n - 1 - k)) & 1 for k in range(n))
        wms_probs.append(exact_success_probability(prog, f, x))
        state = apply_circuit(synth.circuit, x + (0,))
        p0 = measure_qubit1_prob0(state)
        circ_probs.append(p0 if f.bits[i] == 0 else 1.0 - p0)
    return EquivalenceReport(f, synth, prog, tuple(wms_probs), tuple(circ_probs))
