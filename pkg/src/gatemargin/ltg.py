"""Linear threshold gates: membership, exact margins, integer weights.

A function f on n bits is a threshold gate when (-1)**f(x) equals
sign(w . xhat + theta) for some real (w, theta); the evaluation convention
is f(x) = 0 iff the affine form is strictly positive (a value of exactly
zero reads as 1).  Margins are computed by an exact rational linear
program, so results like 1/3 come out as true fractions rather than
floating approximations.

Truth tables index rows with x_1 as the most significant bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from gatemargin.errors import CapacityError
from gatemargin.matchgates import parse_bits
from gatemargin.simplex import solve_canonical_max

N_MAX_ENUM = 20
"""Largest n for exhaustive input enumeration of a single representation."""

N_MAX_LP = 12
"""Largest n for the margin linear program (2**n constraint rows)."""

N_MAX_CENSUS = 4
"""Largest n for whole-census operations (2**2**n functions)."""


# ---------------------------------------------------------------------------
# boolean functions


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of an n-bit function, row i = f(x) with x_1 the MSB of i."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != 2**self.n:
            raise ValueError(f"table for n={self.n} needs {2 ** self.n} rows, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("table entries must be 0 or 1")

    @staticmethod
    def from_table(text: str) -> "BooleanFunction":
        """Parse a binary row string such as "00010111" (length 2**n)."""
        bits = parse_bits(text)
        n = (len(bits)).bit_length() - 1
        if 2**n != len(bits):
            raise ValueError(f"table length {len(bits)} is not a power of two")
        return BooleanFunction(n, bits)

    @staticmethod
    def from_hex(text: str, n: int | None = None) -> "BooleanFunction":
        """Parse "0x17"-style tables; n defaults to log2(4 * digit count)."""
        digits = text[2:] if text.lower().startswith("0x") else text
        value = int(digits, 16)
        if n is None:
            width = 4 * len(digits)
            n = width.bit_length() - 1
            if 2**n != width:
                raise ValueError(
                    f"hex table of {len(digits)} digits is ambiguous; pass n explicitly"
                )
        return BooleanFunction.from_int(value, n)

    @staticmethod
    def from_int(value: int, n: int) -> "BooleanFunction":
        """Table packed into an int, row 0 in the most significant bit."""
        rows = 2**n
        if not 0 <= value < 2**rows:
            raise ValueError(f"table value {value} does not fit {rows} rows")
        return BooleanFunction(n, tuple((value >> (rows - 1 - i)) & 1 for i in range(rows)))

    @staticmethod
    def from_callable(fn: Callable[[tuple[int, ...]], int], n: int) -> "BooleanFunction":
        rows = []
        for i in range(2**n):
            x = tuple((i >> (n - 1 - k)) & 1 for k in range(n))
            rows.append(int(fn(x)) & 1)
        return BooleanFunction(n, tuple(rows))

    @staticmethod
    def majority(n: int) -> "BooleanFunction":
        """0 when the input holds more zeros than ones (n odd)."""
        if n % 2 == 0:
            raise ValueError("majority needs an odd number of inputs")
        return BooleanFunction.from_callable(lambda x: int(sum(x) > n // 2), n)

    @staticmethod
    def parity(n: int) -> "BooleanFunction":
        return BooleanFunction.from_callable(lambda x: sum(x) % 2, n)

    @staticmethod
    def constant(n: int, value: int) -> "BooleanFunction":
        return BooleanFunction(n, (int(value) & 1,) * 2**n)

    @staticmethod
    def dictator(n: int, k: int, negated: bool = False) -> "BooleanFunction":
        """f(x) = x_k, or 1 - x_k when negated (k is 1-based)."""
        if not 1 <= k <= n:
            raise ValueError(f"bit index {k} outside 1..{n}")
        return BooleanFunction.from_callable(lambda x: x[k - 1] ^ int(negated), n)

    def value(self, x: Sequence[int] | str | int) -> int:
        if isinstance(x, int):
            return self.bits[x]
        bits = parse_bits(x, self.n)
        index = 0
        for b in bits:
            index = (index << 1) | b
        return self.bits[index]

    def table_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def table_int(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out


def dependent_variables(f: BooleanFunction) -> frozenset[int]:
    """Indices k (1-based) whose flip changes f(x) for some x."""
    arr = np.array(f.bits, dtype=np.uint8)
    idx = np.arange(2**f.n)
    deps = set()
    for k in range(1, f.n + 1):
        if np.any(arr != arr[idx ^ (1 << (f.n - k))]):
            deps.add(k)
    return frozenset(deps)


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class LtgRepresentation:
    """Affine form (w, theta); entries may be floats or exact Fractions."""

    w: tuple
    theta: object

    @property
    def n(self) -> int:
        return len(self.w)

    def one_norm(self):
        return sum(abs(v) for v in self.w) + abs(self.theta)

    def is_normalized(self, atol: float = 1e-9) -> bool:
        return abs(self.one_norm() - 1) <= atol

    def as_floats(self) -> "LtgRepresentation":
        return LtgRepresentation(tuple(float(v) for v in self.w), float(self.theta))

    def to_dict(self) -> dict:
        return {"w": [float(v) for v in self.w], "theta": float(self.theta)}

    @staticmethod
    def from_dict(data: dict) -> "LtgRepresentation":
        try:
            return LtgRepresentation(tuple(float(v) for v in data["w"]), float(data["theta"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed representation document: {exc}") from exc


def eval_ltg(rep: LtgRepresentation, x: Sequence[int] | str) -> int:
    """0 iff w . xhat + theta is strictly positive; exact zero reads as 1."""
    bits = parse_bits(x, rep.n)
    value = sum(v * (1 - 2 * b) for v, b in zip(rep.w, bits)) + rep.theta
    return 0 if value > 0 else 1


def function_of_representation(rep: LtgRepresentation) -> BooleanFunction:
    return BooleanFunction.from_callable(lambda x: eval_ltg(rep, x), rep.n)


def normalize_representation(rep: LtgRepresentation) -> LtgRepresentation:
    norm = rep.one_norm()
    if norm == 0:
        raise ValueError("cannot normalize the zero representation")
    return LtgRepresentation(tuple(v / norm for v in rep.w), rep.theta / norm)


def margin_of_representation(rep: LtgRepresentation) -> tuple[float, tuple[int, ...]]:
    """Exhaustive min over inputs of |w . xhat + theta|, with a witness.

    The raw value is reported without normalizing the representation.
    """
    n = rep.n
    if n > N_MAX_ENUM:
        raise CapacityError(f"enumeration is capped at n={N_MAX_ENUM}, got {n}")
    w = np.array([float(v) for v in rep.w])
    values = np.abs(_affine_values(w, float(rep.theta), n))
    best = int(values.argmin())
    witness = tuple((best >> (n - 1 - k)) & 1 for k in range(n))
    return float(values[best]), witness


def _affine_values(w: np.ndarray, theta: float, n: int) -> np.ndarray:
    rows = np.arange(2**n)
    xhat = 1 - 2 * ((rows[:, None] >> (n - 1 - np.arange(n))) & 1)
    return xhat @ w + theta


# ---------------------------------------------------------------------------
# optimal margins by exact linear programming


@dataclass(frozen=True)
class MarginCertificate:
    """Optimal normalized representation with its exact margin.

    epsilon, w, theta are Fractions; |w . xhat + theta| >= epsilon on all
    inputs with equality at witness_input.
    """

    epsilon: Fraction
    w: tuple
    theta: Fraction
    witness_input: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.w)

    def representation(self) -> LtgRepresentation:
        return LtgRepresentation(self.w, self.theta)

    def optimal_probability(self) -> Fraction:
        return (self.epsilon + 1) / 2


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Convex weights on signed inputs witnessing that no hyperplane works.

    lambdas[i] >= 0 sum to 1 and sum_i lambdas[i] * s_i * (xhat_i, 1) = 0,
    where s_i = (-1)**f(x_i): every affine form therefore takes a
    non-positive signed value on at least one input.
    """

    lambdas: tuple

    def verify(self, f: BooleanFunction) -> bool:
        n = f.n
        total = sum(self.lambdas)
        if total != 1 or any(l < 0 for l in self.lambdas):
            return False
        sums = [Fraction(0)] * (n + 1)
        for i, lam in enumerate(self.lambdas):
            if lam == 0:
                continue
            sign = 1 - 2 * f.bits[i]
            for k in range(n):
                xhat_k = 1 - 2 * ((i >> (n - 1 - k)) & 1)
                sums[k] += lam * sign * xhat_k
            sums[n] += lam * sign
        return all(v == 0 for v in sums)


def optimal_margin(f: BooleanFunction) -> MarginCertificate | InfeasibilityCertificate:
    """Maximize the margin over normalized representations, exactly.

    Decision variables are the split signs (w+, w-, theta+, theta-) and
    the margin itself; the 1-norm bound linearizes as their plain sum.
    Returns an InfeasibilityCertificate when the optimum is zero, which
    happens exactly when f is not a threshold gate.
    """
    n = f.n
    if n > N_MAX_LP:
        raise CapacityError(f"margin LP is capped at n={N_MAX_LP}, got {n}")
    rows_count = 2**n
    nvars = 2 * n + 3  # w+ | w- | theta+ | theta- | eps
    zero = Fraction(0)
    rows = []
    for i in range(rows_count):
        sign = 1 - 2 * f.bits[i]
        row = [zero] * nvars
        for k in range(n):
            xhat_k = 1 - 2 * ((i >> (n - 1 - k)) & 1)
            row[k] = Fraction(-sign * xhat_k)
            row[n + k] = Fraction(sign * xhat_k)
        row[2 * n] = Fraction(-sign)
        row[2 * n + 1] = Fraction(sign)
        row[2 * n + 2] = Fraction(1)
        rows.append(row)
    rows.append([Fraction(1)] * (2 * n + 2) + [zero])
    rhs = [zero] * rows_count + [Fraction(1)]
    cost = [zero] * (2 * n + 2) + [Fraction(1)]

    sol = solve_canonical_max(rows, rhs, cost)

    if sol.objective <= 0:
        margin_duals = sol.duals[:rows_count]
        total = sum(margin_duals)
        if total <= 0:
            raise RuntimeError("degenerate dual certificate from the margin LP")
        cert = InfeasibilityCertificate(tuple(l / total for l in margin_duals))
        if not cert.verify(f):
            raise RuntimeError("margin LP produced an invalid infeasibility certificate")
        return cert

    w = tuple(sol.x[k] - sol.x[n + k] for k in range(n))
    theta = sol.x[2 * n] - sol.x[2 * n + 1]
    norm = sum(abs(v) for v in w) + abs(theta)
    if norm != 1:  # harmless degeneracy: rescale to the normalized form
        w = tuple(v / norm for v in w)
        theta = theta / norm
    epsilon, witness = exact_signed_minimum(f, w, theta)
    if epsilon <= 0:
        raise RuntimeError("margin LP solution violates its own sign constraints")
    if epsilon < sol.objective:
        raise RuntimeError("exact margin check came out below the LP optimum")
    return MarginCertificate(epsilon, w, theta, witness)


def exact_signed_minimum(f, w, theta) -> tuple[Fraction, tuple[int, ...]]:
    n = f.n
    best = None
    witness = None
    for i in range(2**n):
        sign = 1 - 2 * f.bits[i]
        value = theta
        for k in range(n):
            xhat_k = 1 - 2 * ((i >> (n - 1 - k)) & 1)
            value += w[k] * xhat_k
        value *= sign
        if best is None or value < best:
            best = value
            witness = tuple((i >> (n - 1 - k)) & 1 for k in range(n))
    return best, witness


def is_ltg(f: BooleanFunction) -> bool:
    return isinstance(optimal_margin(f), MarginCertificate)


# ---------------------------------------------------------------------------
# integer representations


@dataclass(frozen=True)
class IntegerRepresentation:
    """All-integer (v, phi) with sign(v . xhat + phi) = (-1)**f(x), never 0."""

    v: tuple[int, ...]
    phi: int

    @property
    def weight(self) -> int:
        return sum(abs(c) for c in self.v) + abs(self.phi)

    def representation(self) -> LtgRepresentation:
        return LtgRepresentation(tuple(Fraction(c) for c in self.v), Fraction(self.phi))

    def agrees_with(self, f: BooleanFunction) -> bool:
        n = f.n
        for i in range(2**n):
            value = self.phi
            for k in range(n):
                value += self.v[k] * (1 - 2 * ((i >> (n - 1 - k)) & 1))
            if value == 0 or (value > 0) != (f.bits[i] == 0):
                return False
        return True


def truncate_to_integer(rep: LtgRepresentation, epsilon) -> IntegerRepresentation:
    """Binary-truncate a normalized representation into integer weights.

    Picks the smallest d >= 1 with (n+1) * 2**-d < epsilon, keeps d
    fractional bits of each |w_k| and |theta| (signs preserved), and
    scales by 2**d.  The result is a valid representation of the same
    function with weight at most 2**d <= 2(n+1)/epsilon.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError(f"need a positive margin, got {epsilon}")
    w = tuple(Fraction(v) for v in rep.w)
    theta = Fraction(rep.theta)
    n = len(w)
    norm = sum(abs(v) for v in w) + abs(theta)
    if norm > 1 + Fraction(1, 10**9):
        raise ValueError(f"representation must be normalized, 1-norm is {float(norm):.12f}")

    d = 1
    while (n + 1) * Fraction(1, 2**d) >= epsilon:
        d += 1
    scale = 2**d

    def trunc(value: Fraction) -> int:
        sign = -1 if value < 0 else 1
        return sign * int(abs(value) * scale)  # int() floors the magnitude

    result = IntegerRepresentation(tuple(trunc(v) for v in w), trunc(theta))
    if result.weight > scale:
        raise RuntimeError("truncation exceeded the 2**d weight budget")
    exact_rep = LtgRepresentation(w, theta)
    if not result.agrees_with(function_of_representation(exact_rep)):
        raise RuntimeError("truncated representation disagrees with its source function")
    return result


@dataclass(frozen=True)
class IntegerWeightBounds:
    lower: Fraction
    upper: Fraction
    achieved: IntegerRepresentation


def integer_weight_bounds(f: BooleanFunction) -> IntegerWeightBounds:
    """Margin-derived bracket 1/eps <= weight <= 2(n+1)/eps plus a witness."""
    cert = optimal_margin(f)
    if not isinstance(cert, MarginCertificate):
        raise ValueError("function is not a linear threshold gate")
    achieved = truncate_to_integer(cert.representation(), cert.epsilon)
    lower = 1 / cert.epsilon
    upper = 2 * Fraction(f.n + 1) / cert.epsilon
    if not lower <= achieved.weight <= upper:
        raise RuntimeError(
            f"achieved weight {achieved.weight} escapes [{lower}, {upper}]"
        )
    return IntegerWeightBounds(lower, upper, achieved)


def minimal_integer_weight(f: BooleanFunction, max_weight: int = 64) -> IntegerRepresentation:
    """Smallest-weight integer representation by exhaustive search.

    Search cost grows quickly with the weight; intended for small n as an
    independent check on the truncation construction.
    """
    n = f.n
    rows = np.arange(2**n)
    xhat = 1 - 2 * ((rows[:, None] >> (n - 1 - np.arange(n))) & 1)
    target = 1 - 2 * np.array(f.bits)
    for weight in range(1, max_weight + 1):
        for magnitudes in _compositions(weight, n + 1):
            nonzero = [i for i, mag in enumerate(magnitudes) if mag]
            for signs in itertools.product((1, -1), repeat=len(nonzero)):
                coeffs = list(magnitudes)
                for pos, sign in zip(nonzero, signs):
                    coeffs[pos] *= sign
                values = xhat @ np.array(coeffs[:n]) + coeffs[n]
                if np.all(values * target > 0):
                    return IntegerRepresentation(tuple(coeffs[:n]), coeffs[n])
    raise ValueError(f"no integer representation with weight <= {max_weight}")


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# whole-census enumeration


@dataclass(frozen=True)
class CensusEntry:
    table: BooleanFunction
    is_ltg: bool
    margin: Fraction
    dependent: frozenset[int]
    certificate: MarginCertificate | None

    @property
    def dep_count(self) -> int:
        return len(self.dependent)


def exhaustive_ltg_census(n: int) -> list[CensusEntry]:
    """Classify every n-bit function by margin and dependent-variable set.

    Functions related by permuting inputs, flipping inputs, or flipping
    the output share their margin and dependence count, so the exact LP
    runs once per equivalence class and the certificate is carried to the
    other class members by the corresponding signed permutation.
    """
    if n > N_MAX_CENSUS:
        raise CapacityError(f"census is capped at n={N_MAX_CENSUS}, got {n}")
    rows = 2**n
    transforms = _index_transforms(n)
    entries: dict[int, CensusEntry] = {}
    for t in range(2 ** (2**n)):
        if t in entries:
            continue
        f = BooleanFunction.from_int(t, n)
        result = optimal_margin(f)
        dep = dependent_variables(f)
        if isinstance(result, MarginCertificate):
            base = CensusEntry(f, True, result.epsilon, dep, result)
        else:
            base = CensusEntry(f, False, Fraction(0), dep, None)
        for perm, flips, index_map in transforms:
            mapped = [f.bits[index_map[i]] for i in range(rows)]
            for out_flip in (0, 1):
                bits = tuple(b ^ out_flip for b in mapped)
                t2 = 0
                for b in bits:
                    t2 = (t2 << 1) | b
                if t2 in entries:
                    continue
                entries[t2] = _transform_entry(base, n, bits, perm, flips, out_flip)
    return [entries[t] for t in sorted(entries)]


def _index_transforms(n: int):
    """All (perm, flips, index_map) with map[i] = row of the transformed input.

    The transform reads f'(x) = f(y) with y_j = x[perm[j]] ^ flips[j]
    (0-based positions).
    """
    out = []
    for perm in itertools.permutations(range(n)):
        for mask in range(2**n):
            flips = tuple((mask >> (n - 1 - j)) & 1 for j in range(n))
            index_map = []
            for i in range(2**n):
                x = [(i >> (n - 1 - k)) & 1 for k in range(n)]
                y = [x[perm[j]] ^ flips[j] for j in range(n)]
                idx = 0
                for b in y:
                    idx = (idx << 1) | b
                index_map.append(idx)
            out.append((perm, flips, tuple(index_map)))
    return out


def _transform_entry(base, n, bits, perm, flips, out_flip) -> CensusEntry:
    f2 = BooleanFunction(n, bits)
    # position j of the source reads input position perm[j] of the image
    dep2 = frozenset(perm[j - 1] + 1 for j in base.dependent)
    if not base.is_ltg:
        return CensusEntry(f2, False, Fraction(0), dep2, None)
    cert = base.certificate
    out_sign = 1 - 2 * out_flip
    # w'_k picks up the input flip sign and the output sign; theta only the latter
    w2 = tuple(out_sign * (1 - 2 * flips[perm.index(k)]) * cert.w[perm.index(k)] for k in range(n))
    theta2 = out_sign * cert.theta
    witness2 = [0] * n
    for j in range(n):
        witness2[perm[j]] = cert.witness_input[j] ^ flips[j]
    cert2 = MarginCertificate(cert.epsilon, w2, theta2, tuple(witness2))
    return CensusEntry(f2, True, cert.epsilon, dep2, cert2)


def census_csv(entries: Iterable[CensusEntry]) -> str:
    """Render census rows as table,is_ltg,margin_num,margin_den,dep_count."""
    lines = ["table,is_ltg,margin_num,margin_den,dep_count"]
    for e in entries:
        lines.append(
            f"{e.table.table_string()},{str(e.is_ltg).lower()},"
            f"{e.margin.numerator},{e.margin.denominator},{e.dep_count}"
        )
    return "\n".join(lines) + "\n"
