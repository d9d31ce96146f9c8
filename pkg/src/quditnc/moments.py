"""Normally ordered moments <a^dagger^k a^l> of finite Fock superpositions."""
from __future__ import annotations

import math
import threading
from fractions import Fraction

import mpmath
import numpy as np

from .errors import DomainError
from .fock import QuditState
from .specfun import falling_factorial, log_factorial, stirling2

ORACLE_MAX_DIM = 64


def _ladder_factor(n: int, l: int, m: int, k: int) -> float:
    """sqrt(n!/(n-l)! * m!/(m-k)!), exact integers where they fit in a double."""
    prod = falling_factorial(n, l) * falling_factorial(m, k)
    if prod.bit_length() < 1000:
        return math.sqrt(prod)
    log_val = log_factorial(n) - log_factorial(n - l) + log_factorial(m) - log_factorial(m - k)
    return math.exp(0.5 * log_val)


def moment(state: QuditState, k: int, l: int) -> complex:
    """<psi| a^dagger^k a^l |psi>."""
    if k < 0 or l < 0:
        raise DomainError(f"moment orders must be >= 0, got ({k}, {l})")
    amps, off, top = state.amplitudes, state.offset, state.max_index
    total = 0j
    for n in range(max(off, l), top + 1):
        m = n - l + k
        if m < off or m > top:
            continue
        cn, cm = amps[n - off], amps[m - off]
        if cn == 0 or cm == 0:
            continue
        total += np.conj(cm) * cn * _ladder_factor(n, l, m, k)
    if k == l:
        return complex(total.real, 0.0)
    return complex(total)


def factorial_moment(state: QuditState, m: int) -> float:
    """<a^dagger^m a^m> = <N(N-1)...(N-m+1)>."""
    return moment(state, m, m).real


def antinormal_moment(state: QuditState, l: int) -> float:
    """<a^l a^dagger^l>, i.e. the squared norm of a^dagger^l |psi>."""
    if l < 0:
        raise DomainError(f"order must be >= 0, got {l}")
    ladder = np.array([float(falling_factorial(n + l, l)) for n in state.indices])
    return float(np.sum(state.probabilities * ladder))


def number_moment(state: QuditState, m: int) -> float:
    """<N^m> from factorial moments through Stirling numbers."""
    if m < 0:
        raise DomainError(f"order must be >= 0, got {m}")
    return float(sum(stirling2(m, j) * factorial_moment(state, j) for j in range(m + 1)))


def mean_photon_number(state: QuditState) -> float:
    return factorial_moment(state, 1)


class MomentTable:
    """Memoized moments of one state. Safe for concurrent readers; inserts are serialized."""

    def __init__(self, state: QuditState):
        self.state = state
        self.fingerprint = state.fingerprint()
        self._entries: dict[tuple[int, int], complex] = {}
        self._lock = threading.Lock()

    def get(self, k: int, l: int) -> complex:
        key = (k, l)
        value = self._entries.get(key)
        if value is None:
            value = moment(self.state, k, l)
            with self._lock:
                value = self._entries.setdefault(key, value)
        return value

    def factorial(self, m: int) -> float:
        return self.get(m, m).real

    def __len__(self):
        return len(self._entries)

    def __contains__(self, key):
        return key in self._entries


# --- exact oracle ---------------------------------------------------------------
# Matrix entries and amplitudes are kept as (sign, squared magnitude) pairs of
# Fractions. a and a^dagger have one nonzero per column, so every product of
# them does too and no sums of unlike square roots arise until the final
# expectation, which is evaluated with mpmath at high precision.

class _SqrtMatrix:
    def __init__(self, dim: int, entries: dict):
        self.dim = dim
        self.entries = entries  # (row, col) -> (sign, Fraction square)

    @classmethod
    def lowering(cls, dim):
        return cls(dim, {(n - 1, n): (1, Fraction(n)) for n in range(1, dim)})

    @classmethod
    def raising(cls, dim):
        return cls(dim, {(n + 1, n): (1, Fraction(n + 1)) for n in range(dim - 1)})

    @classmethod
    def identity(cls, dim):
        return cls(dim, {(n, n): (1, Fraction(1)) for n in range(dim)})

    def __matmul__(self, other: "_SqrtMatrix") -> "_SqrtMatrix":
        by_row = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, []).append((j, v))
        out = {}
        for (i, j), (s1, q1) in self.entries.items():
            for col, (s2, q2) in by_row.get(j, []):
                if (i, col) in out:
                    raise ArithmeticError("sum of unlike radicals in ladder product")
                out[(i, col)] = (s1 * s2, q1 * q2)
        return _SqrtMatrix(self.dim, out)


def _word_matrix(word: str, dim: int) -> _SqrtMatrix:
    ops = {"a": _SqrtMatrix.lowering(dim), "A": _SqrtMatrix.raising(dim)}
    mat = _SqrtMatrix.identity(dim)
    for ch in word:
        if ch == "N":
            mat = mat @ ops["A"] @ ops["a"]
        else:
            mat = mat @ ops[ch]
    return mat


def exact_expectation(weights, offset: int, word: str, dps: int = 40) -> mpmath.mpf:
    """<psi|word|psi> for psi = sum_j sqrt(weights[j]) |offset + j>.

    ``weights`` are nonnegative rationals (need not sum to one; the result is
    divided by their sum). ``word`` is read left to right as an operator
    product over the letters ``a`` (lowering), ``A`` (raising), ``N`` (number).
    """
    weights = [Fraction(w) for w in weights]
    raises = sum(1 for ch in word if ch in "AN")
    dim = offset + len(weights) + raises + 1
    if dim > ORACLE_MAX_DIM:
        raise DomainError(f"oracle dimension {dim} exceeds {ORACLE_MAX_DIM}")
    norm = sum(weights)
    if norm == 0:
        raise DomainError("oracle state has zero norm")
    amp_sq = {offset + j: w / norm for j, w in enumerate(weights) if w != 0}
    mat = _word_matrix(word, dim)
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for (i, j), (sign, q) in sorted(mat.entries.items()):
            if i in amp_sq and j in amp_sq:
                sq = amp_sq[i] * amp_sq[j] * q
                total += sign * mpmath.sqrt(mpmath.mpf(sq.numerator) / sq.denominator)
        return +total


def exact_moment_oracle(weights, offset: int, k: int, l: int, dps: int = 40) -> mpmath.mpf:
    """Exact <a^dagger^k a^l> for a state with rational squared amplitudes."""
    return exact_expectation(weights, offset, "A" * k + "a" * l, dps=dps)


def exact_ngbs_weights(M: int, p: Fraction, q: Fraction) -> list:
    """Eq.-exact NGBS squared amplitudes for rational p, q."""
    p, q = Fraction(p), Fraction(q)
    d = 1 + M * q
    out = []
    for n in range(M + 1):
        f = (p + n * q) / d
        out.append(p / d * math.comb(M, n) * f ** (n - 1) * (1 - f) ** (M - n))
    return out


def exact_add(weights, offset: int, r: int):
    return [w * math.perm(offset + j + r, r) for j, w in enumerate(weights)], offset + r


def exact_subtract(weights, offset: int, t: int):
    start = max(offset, t)
    kept = weights[start - offset:]
    return [w * math.perm(start + j, t) for j, w in enumerate(kept)], start - t


def oracle_decimal(value, digits: int = 25) -> str:
    """Decimal string of an oracle result, ``digits`` significant digits."""
    with mpmath.workdps(digits + 5):
        return mpmath.nstr(value, digits, strip_zeros=False)
