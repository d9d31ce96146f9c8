"""Higher-order nonclassicality witnesses. Negative values flag nonclassicality."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .fock import QuditState
from .moments import MomentTable, antinormal_moment
from .specfun import stirling2


class WitnessKind(str, enum.Enum):
    HOA = "HOA"
    HOS_HILLERY = "HOS_HILLERY"
    HOSPS_LITERAL = "HOSPS_LITERAL"
    HOSPS_DEFINITION = "HOSPS_DEFINITION"


@dataclass(frozen=True)
class WitnessResult:
    kind: WitnessKind
    order: int
    value: float

    @property
    def nonclassical(self) -> bool:
        return self.value < 0


def _table(state, table):
    if table is None:
        return MomentTable(state)
    if table.fingerprint != state.fingerprint():
        raise ValueError("moment table belongs to a different state")
    return table


def _poisson_gap(table: MomentTable, k: int) -> float:
    """D(k-1) = <a^dagger^k a^k> - <N>^k; zero for k = 0."""
    return table.factorial(k) - table.factorial(1) ** k


def hoa(state: QuditState, l: int = 3, table: MomentTable | None = None) -> WitnessResult:
    """D(l) = <a^dagger^(l+1) a^(l+1)> - <N>^(l+1)."""
    if l < 1:
        raise DomainError(f"HOA order must be >= 1, got {l}")
    t = _table(state, table)
    return WitnessResult(WitnessKind.HOA, l, _poisson_gap(t, l + 1))


def hos_hillery(state: QuditState, l: int = 2, quadrature: int = 1,
                table: MomentTable | None = None) -> WitnessResult:
    """Amplitude-powered quadrature squeezing (Delta Y)^2 - |<[Y1, Y2]>|/2.

    Y1 = (a^l + a^dagger^l)/2, Y2 = -i(a^l - a^dagger^l)/2; ``quadrature``
    picks which of the two variances is tested.
    """
    if l < 1:
        raise DomainError(f"HOS order must be >= 1, got {l}")
    if quadrature not in (1, 2):
        raise DomainError(f"quadrature must be 1 or 2, got {quadrature}")
    t = _table(state, table)
    a_l = t.get(0, l)
    a_2l = t.get(0, 2 * l)
    normal = t.factorial(l)
    anti = antinormal_moment(state, l)
    if quadrature == 1:
        variance = (2 * a_2l.real + normal + anti) / 4 - a_l.real ** 2
    else:
        variance = (-2 * a_2l.real + normal + anti) / 4 - a_l.imag ** 2
    commutator = anti - normal
    return WitnessResult(WitnessKind.HOS_HILLERY, l, variance - abs(commutator) / 4)


def hosps_literal(state: QuditState, l: int = 4, table: MomentTable | None = None) -> WitnessResult:
    """Double Stirling sum with (-1)^e weights, evaluated term by term as written."""
    if l < 2:
        raise DomainError(f"HOSPS order must be >= 2, got {l}")
    t = _table(state, table)
    mean = t.factorial(1)
    total = 0.0
    for e in range(l + 1):
        for k in range(e + 1):
            s = stirling2(e, k)
            if s == 0:
                continue
            total += s * math.comb(l, e) * (-1) ** e * _poisson_gap(t, k) * mean ** (l - e)
    return WitnessResult(WitnessKind.HOSPS_LITERAL, l, total)


def poisson_central_moment(l: int, lam: float) -> float:
    """l-th central moment of Poisson(lam), via Touchard raw moments."""
    raw = [sum(stirling2(e, k) * lam ** k for k in range(e + 1)) for e in range(l + 1)]
    return sum(math.comb(l, e) * raw[e] * (-lam) ** (l - e) for e in range(l + 1))


def central_number_moment(state: QuditState, l: int, table: MomentTable | None = None) -> float:
    """<(N - <N>)^l>."""
    t = _table(state, table)
    mean = t.factorial(1)
    raw = [sum(stirling2(e, k) * t.factorial(k) for k in range(e + 1)) for e in range(l + 1)]
    return sum(math.comb(l, e) * raw[e] * (-mean) ** (l - e) for e in range(l + 1))


def hosps_definition(state: QuditState, l: int = 4, table: MomentTable | None = None) -> WitnessResult:
    """<(Delta N)^l> minus the Poissonian value at the same mean."""
    if l < 2:
        raise DomainError(f"HOSPS order must be >= 2, got {l}")
    t = _table(state, table)
    value = central_number_moment(state, l, t) - poisson_central_moment(l, t.factorial(1))
    return WitnessResult(WitnessKind.HOSPS_DEFINITION, l, value)


DEFAULT_ORDER = {"hoa": 3, "hos": 2, "hosps": 4}


def evaluate(kind: str, state: QuditState, l: int | None = None,
             convention: str = "definition") -> WitnessResult:
    """Dispatch by CLI name: ``hoa``, ``hos`` or ``hosps``."""
    l = DEFAULT_ORDER[kind] if l is None else l
    if kind == "hoa":
        return hoa(state, l)
    if kind == "hos":
        return hos_hillery(state, l)
    if kind == "hosps":
        if convention == "literal":
            return hosps_literal(state, l)
        if convention == "definition":
            return hosps_definition(state, l)
        raise DomainError(f"unknown HOSPS convention {convention!r}")
    raise DomainError(f"unknown witness {kind!r}")
