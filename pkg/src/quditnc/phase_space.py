"""Wigner function, optical tomogram and the nonclassical volume.

Convention: a = (x + i p)/sqrt(2), <X|n> = (2^n n! sqrt(pi))^(-1/2) H_n(X) exp(-X^2/2),
W(x, p) = (1/pi) int exp(2 i p y) psi*(x + y) psi(x - y) dy, so that the
tomogram w(X, theta) is the marginal of W along X = x cos(theta) + p sin(theta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from .errors import DomainError
from .fock import QuditState
from .specfun import assoc_laguerre, hermite, laguerre_table, log_factorial

ENVELOPE_CUTOFF = 1e-12


@dataclass(frozen=True)
class PhaseSpaceGrid:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"need x_min < x_max, got {self.x_min}, {self.x_max}")
        if not self.p_min < self.p_max:
            raise DomainError(f"need p_min < p_max, got {self.p_min}, {self.p_max}")
        if self.nx < 2 or self.np < 2:
            raise DomainError(f"need at least 2 samples per axis, got {self.nx}x{self.np}")

    @classmethod
    def square(cls, half_width: float, n: int) -> "PhaseSpaceGrid":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.x_min, self.x_max, self.nx),
                np.linspace(self.p_min, self.p_max, self.np))


@dataclass(frozen=True)
class QuadratureReport:
    value: float
    error_estimate: float
    radius: float
    nodes_per_axis: int
    converged: bool
    tolerance: float


@dataclass(frozen=True)
class TomogramSample:
    X: float
    theta: float
    w: float


def _pair_weight(n: int, m: int) -> float:
    # sqrt(2^(m-n) n!/m!)
    return math.exp(0.5 * ((m - n) * math.log(2.0) + log_factorial(n) - log_factorial(m)))


def wigner(state: QuditState, x, p):
    """W(x, p) by the Laguerre closed form; ``x`` and ``p`` broadcast."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    x, p = np.broadcast_arrays(x, p)
    r2 = x * x + p * p
    z = x - 1j * p
    two_r2 = 2.0 * r2
    amps, off, top = state.amplitudes, state.offset, state.max_index
    total = np.zeros(x.shape)
    z_pow = np.ones(x.shape, dtype=complex)
    for alpha in range(state.dim):
        if alpha:
            z_pow = z_pow * z
        lag = laguerre_table(top - alpha, alpha, two_r2)
        acc = np.zeros(x.shape)
        for n in range(off, top - alpha + 1):
            m = n + alpha
            coef = np.conj(amps[n - off]) * amps[m - off]
            if coef == 0:
                continue
            sign = -1.0 if n % 2 else 1.0
            if alpha == 0:
                acc += sign * coef.real * lag[n]
            else:
                acc += 2.0 * sign * _pair_weight(n, m) * (coef * z_pow).real * lag[n]
        total += acc
    out = total * np.exp(-r2) / np.pi
    return out if out.ndim else float(out)


def position_wavefunction(state: QuditState, X):
    X = np.asarray(X, dtype=float)
    psi = np.zeros(X.shape, dtype=complex)
    for j, c in enumerate(state.amplitudes):
        n = state.offset + j
        norm = math.exp(-0.5 * (n * math.log(2.0) + log_factorial(n) + 0.5 * math.log(math.pi)))
        psi = psi + c * norm * hermite(n, X) * np.exp(-X * X / 2)
    return psi


def wigner_integral_oracle(state: QuditState, x: float, p: float, limit: float = 12.0) -> float:
    """W(x, p) from the defining overlap integral of the position wavefunction."""
    def integrand(y):
        prod = np.conj(position_wavefunction(state, x + y)) * position_wavefunction(state, x - y)
        return float((np.exp(2j * p * y) * prod).real)

    val, _ = integrate.quad(integrand, -limit, limit, limit=400, epsabs=1e-14, epsrel=1e-12)
    return val / math.pi


def wigner_grid(state: QuditState, grid: PhaseSpaceGrid) -> np.ndarray:
    """W sampled on the grid, shape (nx, np); entry [i, j] is W(x_i, p_j)."""
    xs, ps = grid.axes()
    X, P = np.meshgrid(xs, ps, indexing="ij")
    return wigner(state, X, P)


def envelope_radius(state: QuditState, cutoff: float = ENVELOPE_CUTOFF,
                    start: float = 3.0, step: float = 0.25) -> float:
    """Smallest radius (on a ``step`` lattice) where a pointwise bound on |W| drops below ``cutoff``.

    The bound replaces each Laguerre polynomial by L(-z), which majorizes
    |L(z)| coefficientwise, and each amplitude product by its modulus.
    """
    mods = np.abs(state.amplitudes)
    off = state.offset

    def bound(r):
        two_r2 = 2.0 * r * r
        s = 0.0
        for j, cn in enumerate(mods):
            for i in range(j, state.dim):
                n, m = off + j, off + i
                f = 1.0 if i == j else 2.0
                s += f * cn * mods[i] * _pair_weight(n, m) * r ** (m - n) * assoc_laguerre(n, m - n, -two_r2)
        return s * math.exp(-r * r) / math.pi

    r = start
    while bound(r) >= cutoff:
        r += step
        if r > 60:
            raise DomainError("envelope radius search diverged")
    return r


def wigner_normalization(state: QuditState, nodes: int = 256, radius: float | None = None) -> float:
    """Tensor Gauss-Legendre estimate of the integral of W over the plane."""
    R = envelope_radius(state) if radius is None else radius
    t, w = leggauss(nodes)
    t, w = t * R, w * R
    X, P = np.meshgrid(t, t, indexing="ij")
    return float(np.sum(wigner(state, X, P) * np.outer(w, w)))


def _abs_integral_polar(state: QuditState, R: float, n_angles: int, n_samples: int, n_radial: int) -> float:
    """Integral of |W| over the disk of radius R.

    Along every ray the sign changes of W are bracketed on a uniform sample
    grid and bisected to machine precision, each sign-definite segment is
    integrated with Gauss-Legendre (W is smooth there) and the periodic
    angular integral uses the trapezoid rule.
    """
    phi = 2.0 * np.pi * np.arange(n_angles) / n_angles
    cs, sn = np.cos(phi), np.sin(phi)
    rs = np.linspace(0.0, R, n_samples)
    samples = wigner(state, np.outer(cs, rs), np.outer(sn, rs))
    sign = np.sign(samples)
    ray, j = np.nonzero(sign[:, :-1] * sign[:, 1:] < 0)
    lo, hi = rs[j].copy(), rs[j + 1].copy()
    f_lo = samples[ray, j]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f_mid = wigner(state, cs[ray] * mid, sn[ray] * mid)
        same = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, f_mid, f_lo)
        hi = np.where(same, hi, mid)
    roots = 0.5 * (lo + hi)

    # nonzero() yields rays in order and roots ascending within a ray
    starts, ends, seg_ray = [], [], []
    cursor = 0
    for k in range(n_angles):
        edges = [0.0]
        while cursor < ray.size and ray[cursor] == k:
            edges.append(roots[cursor])
            cursor += 1
        edges.append(R)
        starts.extend(edges[:-1])
        ends.extend(edges[1:])
        seg_ray.extend([k] * (len(edges) - 1))
    a, b, seg_ray = np.array(starts), np.array(ends), np.array(seg_ray)

    t, w = leggauss(n_radial)
    half, centre = 0.5 * (b - a), 0.5 * (b + a)
    rr = centre[:, None] + half[:, None] * t[None, :]
    vals = wigner(state, cs[seg_ray][:, None] * rr, sn[seg_ray][:, None] * rr) * rr
    seg = np.abs((vals @ w) * half)
    per_ray = np.zeros(n_angles)
    np.add.at(per_ray, seg_ray, seg)
    return float(np.sum(per_ray) * 2.0 * np.pi / n_angles)


def nonclassical_volume(state: QuditState, tolerance: float = 1e-6, radius: float | None = None,
                        start_angles: int = 32, max_angles: int = 1024) -> QuadratureReport:
    """delta = int |W| - 1, refined by doubling until successive estimates agree to ``tolerance``."""
    if tolerance <= 0:
        raise DomainError(f"tolerance must be > 0, got {tolerance}")
    R = envelope_radius(state) if radius is None else radius
    n_angles, n_samples, n_radial = start_angles, 1024, 32
    prev = _abs_integral_polar(state, R, n_angles, n_samples, n_radial) - 1.0
    while n_angles < max_angles:
        n_angles, n_samples, n_radial = 2 * n_angles, min(2 * n_samples, 4096), min(2 * n_radial, 128)
        value = _abs_integral_polar(state, R, n_angles, n_samples, n_radial) - 1.0
        err = abs(value - prev)
        if err < tolerance:
            return QuadratureReport(value, err, R, n_angles, True, tolerance)
        prev = value
    return QuadratureReport(prev, err, R, n_angles, False, tolerance)


def tomogram(state: QuditState, X, theta):
    """Homodyne quadrature density w(X, theta), evaluated term by term."""
    X = np.asarray(X, dtype=float)
    theta = np.asarray(theta, dtype=float)
    X, theta = np.broadcast_arrays(X, theta)
    mods = np.abs(state.amplitudes)
    phases = np.angle(state.amplitudes)
    idx = state.indices
    herm = [hermite(int(n), X) for n in idx]
    log_norm = [int(n) * math.log(2.0) + log_factorial(int(n)) for n in idx]
    diag = np.zeros(X.shape)
    cross = np.zeros(X.shape)
    for i in range(state.dim):
        if mods[i] == 0:
            continue
        diag += mods[i] ** 2 * herm[i] ** 2 * math.exp(-log_norm[i])
        for k in range(i + 1, state.dim):
            if mods[k] == 0:
                continue
            n, kk = idx[i], idx[k]
            denom = math.exp(0.5 * (log_norm[i] + log_norm[k] - 2 * math.log(2.0)))
            cross += (mods[i] * mods[k] * np.cos((n - kk) * theta - (phases[i] - phases[k]))
                      * herm[i] * herm[k] / denom)
    out = np.exp(-X * X) / math.sqrt(math.pi) * (diag + cross)
    return out if out.ndim else float(out)


def tomogram_normalization(state: QuditState, theta: float, nodes: int = 256,
                           radius: float | None = None) -> float:
    R = envelope_radius(state) if radius is None else radius
    t, w = leggauss(nodes)
    return float(np.sum(tomogram(state, t * R, theta) * w) * R)


def radon_projection(state: QuditState, X, theta: float, quad_nodes: int = 128,
                     radius: float | None = None) -> np.ndarray:
    """Line integrals of W along eta at fixed X_theta = X."""
    R = envelope_radius(state) if radius is None else radius
    X = np.atleast_1d(np.asarray(X, dtype=float))
    t, w = leggauss(quad_nodes)
    eta = t * R
    xs = X[:, None] * math.cos(theta) - eta[None, :] * math.sin(theta)
    ps = X[:, None] * math.sin(theta) + eta[None, :] * math.cos(theta)
    return wigner(state, xs, ps) @ w * R


RADON_X_GRID = np.linspace(-5.0, 5.0, 41)


def radon_check(state: QuditState, theta: float, quad_nodes: int = 128, X=None) -> float:
    """Max |Radon(W)(X, theta) - w(X, theta)| over a fixed X grid."""
    if quad_nodes < 64:
        raise DomainError(f"quad_nodes must be >= 64, got {quad_nodes}")
    X = RADON_X_GRID if X is None else np.asarray(X, dtype=float)
    proj = radon_projection(state, X, theta, quad_nodes)
    return float(np.max(np.abs(proj - tomogram(state, X, theta))))


def _fmt(v: float) -> str:
    return repr(float(v))


def write_wigner_csv(path, xs, ps, values) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,p,W\n")
        for i, x in enumerate(xs):
            for j, p in enumerate(ps):
                fh.write(f"{_fmt(x)},{_fmt(p)},{_fmt(values[i, j])}\n")


def write_tomogram_csv(path, Xs, thetas, values) -> None:
    """``values[i, j]`` is w(Xs[i], thetas[j])."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("X,theta,w\n")
        for i, X in enumerate(Xs):
            for j, th in enumerate(thetas):
                fh.write(f"{_fmt(X)},{_fmt(th)},{_fmt(values[i, j])}\n")
