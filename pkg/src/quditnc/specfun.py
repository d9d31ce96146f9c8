"""Special functions: factorials, Stirling numbers, Hermite and Laguerre polynomials.

Combinatorial results are exact Python integers. Polynomial evaluators accept
scalars or numpy arrays and use three-term recurrences.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError

_EXACT_FACTORIAL_MAX = 20


def log_factorial(n: int) -> float:
    """Return ln(n!)."""
    if n < 0:
        raise DomainError(f"log_factorial needs n >= 0, got {n}")
    if n <= _EXACT_FACTORIAL_MAX:
        return math.log(math.factorial(n))
    return math.lgamma(n + 1)


def falling_factorial(n: int, k: int) -> int:
    """n!/(n-k)! as an exact integer; zero when k > n."""
    if k < 0 or n < 0:
        raise DomainError(f"falling_factorial needs n, k >= 0, got ({n}, {k})")
    if k > n:
        return 0
    return math.perm(n, k)


@lru_cache(maxsize=None)
def stirling2(r: int, k: int) -> int:
    """Stirling number of the second kind S2(r, k)."""
    if r < 0 or k < 0 or k > r:
        raise DomainError(f"stirling2 needs 0 <= k <= r, got ({r}, {k})")
    if r == 0:
        return 1
    if k == 0:
        return 0
    s = k * stirling2(r - 1, k) if k <= r - 1 else 0
    return s + stirling2(r - 1, k - 1)


def bell(r: int) -> int:
    return sum(stirling2(r, k) for k in range(r + 1))


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x)."""
    if n < 0:
        raise DomainError(f"hermite degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for j in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * j * h_prev
    return h if h.ndim else float(h)


def assoc_laguerre(n: int, alpha: int, z):
    """Generalized Laguerre polynomial L_n^alpha(z) for real or complex z.

    Negative integer ``alpha`` is allowed as long as ``n + alpha >= 0``.
    """
    if n < 0:
        raise DomainError(f"assoc_laguerre degree must be >= 0, got {n}")
    if n + alpha < 0:
        raise DomainError(f"assoc_laguerre needs n + alpha >= 0, got n={n}, alpha={alpha}")
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        z = z.astype(float)
    l_prev = np.ones_like(z)
    if n == 0:
        out = l_prev
    else:
        out = 1.0 + alpha - z
        for k in range(1, n):
            l_prev, out = out, ((2 * k + 1 + alpha - z) * out - (k + alpha) * l_prev) / (k + 1)
    return out if out.ndim else out[()]


def laguerre_table(n_max: int, alpha: int, z) -> list:
    """[L_0^alpha(z), ..., L_{n_max}^alpha(z)] from a single recurrence pass."""
    z = np.asarray(z)
    table = [np.ones_like(z, dtype=float if not np.iscomplexobj(z) else complex)]
    if n_max >= 1:
        table.append(1.0 + alpha - z)
    for k in range(1, n_max):
        table.append(((2 * k + 1 + alpha - z) * table[k] - (k + alpha) * table[k - 1]) / (k + 1))
    return table
