"""Periodic-grid spectral engine.

Fields are sampled complex functions on an n-dimensional torus of period L
(n <= 3), stored in FFT layout: physical coordinates and frequencies both run
0, h, 2h, ..., then wrap to the negative half.  The forward transform uses
the continuum normalization

    F f(xi) = h^n * fftn(f),      f(x) = ifftn(F f) / h^n,

so that Fourier data approximates the integral transform of a function
concentrated inside the box, and norms computed with the quadrature weight
h^n carry their usual scaling laws.

The dyadic cutoff psi equals 1 on |xi| <= 1, vanishes for |xi| >= 3/2, and
phi = psi - psi(2 .) telescopes to an exact partition of unity.  With the
support radius 3/2 (rather than 2), phi is identically 1 on the closed band
[3/4, 1] and dyadically separated frequency bumps fall in exactly one shell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np


class Domain(Enum):
    PHYSICAL = "physical"
    FOURIER = "fourier"


@dataclass(frozen=True)
class Grid:
    """Periodic grid: n dimensions, points_per_dim samples per axis, period L."""

    n: int
    points_per_dim: int
    box_length: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError("dimension n must be 1, 2, or 3")
        m = self.points_per_dim
        if m < 8 or (m & (m - 1)) != 0:
            raise ValueError("points_per_dim must be a power of two >= 8")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_dim,) * self.n

    @property
    def spacing(self) -> float:
        return self.box_length / self.points_per_dim

    @property
    def freq_spacing(self) -> float:
        return 2.0 * math.pi / self.box_length

    @property
    def nyquist(self) -> float:
        """Largest axis frequency magnitude on the lattice."""
        return self.freq_spacing * (self.points_per_dim // 2)

    @property
    def quadrature_weight(self) -> float:
        return self.spacing ** self.n

    # Shells with support fully inside the resolved band.  One guard shell on
    # each side is still usable: its lattice intersection is nonempty and any
    # band-limited content there projects exactly.
    @property
    def k_max(self) -> int:
        return int(math.floor(math.log2(self.nyquist))) - 1

    @property
    def k_min(self) -> int:
        return int(math.ceil(math.log2(self.freq_spacing))) + 1

    @property
    def shell_bounds(self) -> Tuple[int, int]:
        return (self.k_min - 1, self.k_max + 1)

    def axis_coords(self) -> np.ndarray:
        return _axis_coords(self.points_per_dim, self.box_length)

    def axis_freqs(self) -> np.ndarray:
        return _axis_freqs(self.points_per_dim, self.box_length)

    def freq_radius(self) -> np.ndarray:
        """|xi| on the full lattice, shape == grid.shape."""
        return _freq_radius(self.n, self.points_per_dim, self.box_length)

    def coord_radius2(self) -> np.ndarray:
        """|x|^2 on the full lattice (FFT layout)."""
        return _coord_radius2(self.n, self.points_per_dim, self.box_length)


@lru_cache(maxsize=32)
def _axis_coords(m: int, length: float) -> np.ndarray:
    x = np.fft.fftfreq(m, d=1.0 / m) * (length / m)
    x.flags.writeable = False
    return x


@lru_cache(maxsize=32)
def _axis_freqs(m: int, length: float) -> np.ndarray:
    xi = 2.0 * math.pi * np.fft.fftfreq(m, d=length / m)
    xi.flags.writeable = False
    return xi


@lru_cache(maxsize=16)
def _freq_radius(n: int, m: int, length: float) -> np.ndarray:
    axis = _axis_freqs(m, length)
    r2 = np.zeros((m,) * n)
    for ax in range(n):
        shape = [1] * n
        shape[ax] = m
        r2 = r2 + (axis.reshape(shape)) ** 2
    r = np.sqrt(r2)
    r.flags.writeable = False
    return r


@lru_cache(maxsize=16)
def _coord_radius2(n: int, m: int, length: float) -> np.ndarray:
    axis = _axis_coords(m, length)
    r2 = np.zeros((m,) * n)
    for ax in range(n):
        shape = [1] * n
        shape[ax] = m
        r2 = r2 + (axis.reshape(shape)) ** 2
    r2.flags.writeable = False
    return r2


def make_grid(n: int, points_per_dim: int, box_length: float) -> Grid:
    return Grid(n, points_per_dim, float(box_length))


@dataclass(frozen=True)
class Field:
    """Immutable sampled field tagged with its current domain."""

    grid: Grid
    domain: Domain
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.complex128)
        if arr.shape != self.grid.shape:
            raise ValueError(f"data shape {arr.shape} != grid shape {self.grid.shape}")
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    def with_data(self, data: np.ndarray, domain: Optional[Domain] = None) -> "Field":
        return Field(self.grid, domain or self.domain, data)


def field_from_array(grid: Grid, data: np.ndarray, domain: Domain = Domain.PHYSICAL) -> Field:
    return Field(grid, domain, data)


def zero_field(grid: Grid, domain: Domain = Domain.PHYSICAL) -> Field:
    return Field(grid, domain, np.zeros(grid.shape, dtype=np.complex128))


def transform(field: Field, direction: Domain) -> Field:
    """Transform to `direction`; errors if the field is already there."""
    if field.domain == direction:
        raise ValueError(f"field already in {direction.value} domain")
    w = field.grid.quadrature_weight
    if direction is Domain.FOURIER:
        out = np.fft.fftn(field.data) * w
    else:
        out = np.fft.ifftn(field.data) / w
    return Field(field.grid, direction, out)


def to_fourier(field: Field) -> Field:
    return field if field.domain is Domain.FOURIER else transform(field, Domain.FOURIER)


def to_physical(field: Field) -> Field:
    return field if field.domain is Domain.PHYSICAL else transform(field, Domain.PHYSICAL)


# ---------------------------------------------------------------------------
# dyadic cutoff


def _bump_h(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


@dataclass(frozen=True)
class CutoffProfile:
    """Radial cutoff pair (psi, phi) generating the dyadic decomposition."""

    inner: float = 1.0
    outer: float = 1.5

    def psi(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        a = _bump_h(self.outer - t)
        b = _bump_h(t - self.inner)
        mid = np.zeros_like(t)
        band = (t > self.inner) & (t < self.outer)
        mid[band] = a[band] / (a[band] + b[band])
        return np.where(t <= self.inner, 1.0, mid)

    def phi(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.psi(t) - self.psi(2.0 * t)


DEFAULT_PROFILE = CutoffProfile()


def shell_multiplier(grid: Grid, k: int, profile: CutoffProfile = DEFAULT_PROFILE) -> np.ndarray:
    """phi(2^-k |xi|) on the lattice."""
    return profile.phi(grid.freq_radius() * (2.0 ** (-k)))


def lowpass_multiplier(grid: Grid, profile: CutoffProfile = DEFAULT_PROFILE) -> np.ndarray:
    """psi(|xi|) on the lattice (the inhomogeneous low block)."""
    return profile.psi(grid.freq_radius())


def _check_shell(grid: Grid, k: int) -> None:
    lo, hi = grid.shell_bounds
    if not (lo <= k <= hi):
        raise ValueError(
            f"shell k={k} outside resolved range [{grid.k_min}, {grid.k_max}] "
            f"(guard shells allow [{lo}, {hi}])"
        )


def dyadic_project(field: Field, k: int, profile: CutoffProfile = DEFAULT_PROFILE) -> Field:
    """Frequency-shell projection; output in the same domain as the input."""
    _check_shell(field.grid, k)
    hat = to_fourier(field)
    out = hat.with_data(hat.data * shell_multiplier(field.grid, k, profile))
    return out if field.domain is Domain.FOURIER else to_physical(out)


def lowpass_project(field: Field, profile: CutoffProfile = DEFAULT_PROFILE) -> Field:
    hat = to_fourier(field)
    out = hat.with_data(hat.data * lowpass_multiplier(field.grid, profile))
    return out if field.domain is Domain.FOURIER else to_physical(out)


@dataclass(frozen=True)
class PartitionReport:
    max_deviation: float
    origin_value: float
    max_deviation_inhomog: float


def partition_check(grid: Grid, profile: CutoffProfile = DEFAULT_PROFILE) -> PartitionReport:
    """Deviation of the shell sums from 1.

    Homogeneous: sum of phi_k over the resolved range, maximized over the
    lattice annulus 2^k_min <= |xi| <= 2^k_max (xi = 0 is excluded by the
    homogeneous calculus and reported separately).  Inhomogeneous: psi plus
    the shells k >= 1, over the whole lattice including 0.
    """
    r = grid.freq_radius()
    total = np.zeros_like(r)
    for k in range(grid.k_min, grid.k_max + 1):
        total += profile.phi(r * 2.0 ** (-k))
    annulus = (r >= 2.0 ** grid.k_min) & (r <= 2.0 ** grid.k_max)
    if not annulus.any():
        raise ValueError("grid resolves no complete annulus")
    dev = float(np.max(np.abs(total[annulus] - 1.0)))
    origin = float(total.flat[0])

    inhom = profile.psi(r)
    for k in range(1, grid.k_max + 1):
        inhom += profile.phi(r * 2.0 ** (-k))
    inside = r <= 2.0 ** grid.k_max
    dev_inhom = float(np.max(np.abs(inhom[inside] - 1.0)))
    return PartitionReport(dev, origin, dev_inhom)


# ---------------------------------------------------------------------------
# Fourier multipliers


@dataclass(frozen=True)
class FracLaplacian:
    """(-Laplacian)^(s/2): multiplication by |xi|^s, zero mode mapped to 0."""

    s: float


@dataclass(frozen=True)
class Bessel:
    """(m^2 - Laplacian)^(s/2): multiplication by (m^2 + |xi|^2)^(s/2)."""

    s: float
    m2: float = 1.0


@dataclass(frozen=True)
class RieszPotential:
    """(-Laplacian)^(-beta/2): multiplication by |xi|^-beta, zero mode -> 0.

    The convolution kernel |x|^-(n-beta) equals riesz_constant(n, beta)
    times this operator.
    """

    beta: float


Symbol = Union[FracLaplacian, Bessel, RieszPotential]

ZERO_MODE_TOLERANCE = 1e-10


def zero_mode_fraction(field: Field) -> float:
    """|mean mode| relative to the total Fourier mass (0 for the zero field)."""
    hat = to_fourier(field)
    total = float(np.sum(np.abs(hat.data)))
    if total == 0.0:
        return 0.0
    return float(np.abs(hat.data.flat[0])) / total

def symbol_values(grid: Grid, symbol: Symbol) -> np.ndarray:
    r = grid.freq_radius()
    if isinstance(symbol, FracLaplacian):
        s = float(symbol.s)
        if s == 0:
            return np.ones_like(r)
        with np.errstate(divide="ignore"):
            vals = np.where(r > 0, r, 1.0) ** s
        vals.flat[0] = 0.0
        return vals
    if isinstance(symbol, Bessel):
        if symbol.m2 < 0:
            raise ValueError("Bessel symbol needs m^2 >= 0")
        if symbol.m2 == 0:
            return symbol_values(grid, FracLaplacian(symbol.s))
        return (symbol.m2 + r ** 2) ** (float(symbol.s) / 2.0)
    if isinstance(symbol, RieszPotential):
        beta = float(symbol.beta)
        if not (0 < beta < grid.n):
            raise ValueError(f"beta must lie in (0, n); got {beta} with n={grid.n}")
        vals = np.where(r > 0, r, 1.0) ** (-beta)
        vals.flat[0] = 0.0
        return vals
    raise TypeError(f"unknown symbol {symbol!r}")


def apply_symbol(field: Field, symbol: Symbol) -> Field:
    """Apply a Fourier multiplier; output in the same domain as the input."""
    hat = to_fourier(field)
    out = hat.with_data(hat.data * symbol_values(field.grid, symbol))
    return out if field.domain is Domain.FOURIER else to_physical(out)


def riesz_constant(n: int, beta: float) -> float:
    """c(n, beta) with  F[|x|^-(n-beta)] = c(n, beta) |xi|^-beta.

    c(n, beta) = 2^beta pi^(n/2) Gamma(beta/2) / Gamma((n-beta)/2).
    """
    if not (0 < beta < n):
        raise ValueError("beta must lie in (0, n)")
    return (
        2.0 ** beta
        * math.pi ** (n / 2.0)
        * math.gamma(beta / 2.0)
        / math.gamma((n - beta) / 2.0)
    )


# ---------------------------------------------------------------------------
# dyadic dilation


def dilate(field: Field, log2_lambda: int, l2_normalized: bool = False) -> Field:
    """Dyadic dilation u(x) -> lambda^a u(lambda x), lambda = 2^log2_lambda.

    a = n/2 when l2_normalized (mass-preserving), else a = 0.  Implemented by
    strided resampling with the off-box region masked to zero, so the result
    is the dilation of the field read as a function on R^n concentrated in
    the box, not the torus rewrap (which would create periodic images).
    Enlarging dilations (log2_lambda > 0) resample in physical space and
    require the field to be smooth at stride 2^m; shrinking dilations
    resample in Fourier space under the mirrored condition.
    """
    m = int(log2_lambda)
    grid = field.grid
    n, M = grid.n, grid.points_per_dim
    lam = 2.0 ** m
    a = (grid.n / 2.0) if l2_normalized else 0.0
    if m == 0:
        return field
    if m > 0:
        stride = 2 ** m
        if stride >= M:
            raise ValueError("dilation stride exceeds grid size")
        phys = to_physical(field)
        idx = (np.arange(M) * stride) % M
        out = phys.data
        for ax in range(n):
            out = np.take(out, idx, axis=ax)
        mask = np.ones(grid.shape, dtype=bool)
        half = grid.box_length / (2.0 * stride)
        coords = grid.axis_coords()
        for ax in range(n):
            shape = [1] * n
            shape[ax] = M
            mask &= np.abs(coords.reshape(shape)) < half
        out = np.where(mask, out, 0.0) * (lam ** a)
        res = Field(grid, Domain.PHYSICAL, out)
        return res if field.domain is Domain.PHYSICAL else to_fourier(res)
    stride = 2 ** (-m)
    if stride >= M:
        raise ValueError("dilation stride exceeds grid size")
    hat = to_fourier(field)
    idx = (np.arange(M) * stride) % M
    out = hat.data
    for ax in range(n):
        out = np.take(out, idx, axis=ax)
    mask = np.ones(grid.shape, dtype=bool)
    kk = np.fft.fftfreq(M, d=1.0 / M)  # integer lattice indices
    for ax in range(n):
        shape = [1] * n
        shape[ax] = M
        mask &= np.abs(kk.reshape(shape)) < (M / (2.0 * stride))
    out = np.where(mask, out, 0.0) * (lam ** (a - n))
    res = Field(grid, Domain.FOURIER, out)
    return res if field.domain is Domain.FOURIER else to_physical(res)
