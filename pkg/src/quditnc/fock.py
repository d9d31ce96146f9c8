"""Finite Fock-basis superpositions, the NGBS family, photon addition and subtraction."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ZeroStateError
from .specfun import falling_factorial

NORM_TOL = 1e-12
# round-off slack on the [0, 1] range of (p + n q)/(1 + M q)
RANGE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class QuditState:
    """Pure state sum_j amplitudes[j] |offset + j>.

    Instances are immutable; ``amplitudes`` is a read-only complex array.
    ``prenorm_deviation`` records |sum |C_n|^2 - 1| of the raw amplitudes a
    constructor was handed (zero when not tracked).
    """

    amplitudes: np.ndarray
    offset: int = 0
    prenorm_deviation: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.size == 0:
            raise ZeroStateError("amplitude list is empty")
        if self.offset < 0:
            raise DomainError(f"offset must be >= 0, got {self.offset}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "offset", int(self.offset))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def max_index(self) -> int:
        return self.offset + self.dim - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.dim)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.probabilities)))

    def dense(self, size: int | None = None) -> np.ndarray:
        """Amplitudes zero-padded from |0>, length ``size`` (default max_index + 1)."""
        size = self.max_index + 1 if size is None else size
        if size <= self.max_index:
            raise DomainError(f"dense size {size} truncates support up to |{self.max_index}>")
        out = np.zeros(size, dtype=complex)
        out[self.offset:self.offset + self.dim] = self.amplitudes
        return out

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.offset.to_bytes(8, "little"))
        h.update(np.ascontiguousarray(self.amplitudes).tobytes())
        return h.hexdigest()

    def to_record(self) -> dict:
        return {
            "offset": self.offset,
            "amplitudes": [[float(c.real), float(c.imag)] for c in self.amplitudes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_record(cls, record: dict) -> "QuditState":
        amps = [complex(re, im) for re, im in record["amplitudes"]]
        return cls(np.array(amps, dtype=complex), int(record["offset"]))

    @classmethod
    def from_json(cls, text: str) -> "QuditState":
        return cls.from_record(json.loads(text))

    def __repr__(self):
        return f"QuditState(offset={self.offset}, dim={self.dim})"


def make_qudit(amplitudes, offset: int = 0) -> QuditState:
    """Normalize ``amplitudes`` and place the first one on |offset>."""
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    if amps.size == 0:
        raise ZeroStateError("amplitude list is empty")
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise ZeroStateError("all amplitudes are zero")
    return QuditState(amps / norm, offset, prenorm_deviation=abs(norm**2 - 1.0))


def fock(n: int) -> QuditState:
    return QuditState(np.array([1.0 + 0j]), n)


@dataclass(frozen=True)
class NGBSParams:
    """Truncation ``M`` and the (p, q) pair of the new generalized binomial state."""

    M: int
    p: float
    q: float = 0.0

    def __post_init__(self):
        if self.M < 0:
            raise DomainError(f"M must be >= 0, got {self.M}")
        if self.p == 0:
            raise DomainError("p = 0 gives the zero state (leading factor p)")
        if 1 + self.M * self.q <= 0:
            raise DomainError(f"need 1 + M*q > 0, got {1 + self.M * self.q}")
        for n in range(self.M + 1):
            f = self.success(n)
            if not -RANGE_SLACK <= f <= 1.0 + RANGE_SLACK:
                raise DomainError(
                    f"(p + n q)/(1 + M q) = {f} outside [0, 1] at n={n} "
                    f"(M={self.M}, p={self.p}, q={self.q})"
                )
            if f <= 0.0 and n == 0:
                raise DomainError("(p + n q)/(1 + M q) vanishes at n=0; reciprocal undefined")

    def success(self, n: int) -> float:
        f = (self.p + n * self.q) / (1 + self.M * self.q)
        return min(max(f, 0.0), 1.0) if -RANGE_SLACK <= f <= 1.0 + RANGE_SLACK else f

    def weights(self) -> np.ndarray:
        """Raw squared amplitudes C_n^2, n = 0..M, before any renormalization."""
        M = self.M
        lead = self.p / (1 + M * self.q)
        out = np.empty(M + 1)
        for n in range(M + 1):
            f = self.success(n)
            out[n] = lead * math.comb(M, n) * f ** (n - 1) * (1.0 - f) ** (M - n)
        if np.any(out < 0):
            bad = int(np.argmax(out < 0))
            raise DomainError(f"negative NGBS weight at n={bad}")
        return out


def ngbs(params: NGBSParams) -> QuditState:
    w = params.weights()
    total = float(w.sum())
    if total == 0.0:
        raise ZeroStateError(f"NGBS weights vanish for {params}")
    return QuditState(np.sqrt(w / total).astype(complex), 0, prenorm_deviation=abs(total - 1.0))


def binomial_state(M: int, p: float) -> QuditState:
    return ngbs(NGBSParams(M, p, 0.0))


def _check_closed_form_norm(raw_norm_sq: float, ladder_sum: float, what: str):
    # closed-form N^-2 (sum |C_n|^2 * ladder factor) against the explicit vector norm
    if not math.isclose(raw_norm_sq, ladder_sum, rel_tol=NORM_TOL, abs_tol=0.0):
        raise AssertionError(f"{what}: closed-form normalization {ladder_sum} != explicit {raw_norm_sq}")


def add_photons(state: QuditState, r: int) -> QuditState:
    """Normalized a^dagger^r |state>."""
    if r < 0:
        raise DomainError(f"photon count must be >= 0, got {r}")
    if r == 0:
        return state
    ladder = np.array([falling_factorial(n + r, r) for n in state.indices], dtype=float)
    raw = state.amplitudes * np.sqrt(ladder)
    norm_sq = float(np.sum(np.abs(raw) ** 2))
    _check_closed_form_norm(norm_sq, float(np.sum(state.probabilities * ladder)), "add_photons")
    return QuditState(raw / math.sqrt(norm_sq), state.offset + r)


def subtract_photons(state: QuditState, t: int) -> QuditState:
    """Normalized a^t |state>; raises ZeroStateError when all support lies below |t>."""
    if t < 0:
        raise DomainError(f"photon count must be >= 0, got {t}")
    if t == 0:
        return state
    if state.max_index < t:
        raise ZeroStateError(f"a^{t} annihilates a state supported on |{state.offset}>..|{state.max_index}>")
    start = max(state.offset, t)
    kept = state.amplitudes[start - state.offset:]
    ladder = np.array([falling_factorial(n, t) for n in range(start, state.max_index + 1)], dtype=float)
    raw = kept * np.sqrt(ladder)
    norm_sq = float(np.sum(np.abs(raw) ** 2))
    if norm_sq == 0.0:
        raise ZeroStateError(f"a^{t} annihilates the state")
    _check_closed_form_norm(norm_sq, float(np.sum(np.abs(kept) ** 2 * ladder)), "subtract_photons")
    return QuditState(raw / math.sqrt(norm_sq), start - t)


def prepare(M: int, p: float, q: float, add: int = 0, sub: int = 0) -> QuditState:
    """NGBS(M, p, q) followed by ``add`` photon additions or ``sub`` subtractions."""
    if add and sub:
        raise DomainError("photon addition and subtraction are not composed in one state")
    state = ngbs(NGBSParams(M, p, q))
    if add:
        state = add_photons(state, add)
    if sub:
        state = subtract_photons(state, sub)
    return state
