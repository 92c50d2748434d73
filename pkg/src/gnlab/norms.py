"""Lebesgue, Besov, Triebel-Lizorkin, and Sobolev norms of sampled fields.

Homogeneous shell sums run over the grid's resolved dyadic range unless a
NormSpec narrows or widens it (guard shells included); test families are
band-limited, so the truncation is exact for them.  Quasi-norm exponents
0 < p, q < 1 use the same formulas; q = infinity takes the sup over shells.
Shells are always reduced in a fixed ascending order, so results are
bit-stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .spectral import (
    DEFAULT_PROFILE,
    CutoffProfile,
    Domain,
    Field,
    FracLaplacian,
    Bessel,
    apply_symbol,
    lowpass_multiplier,
    shell_multiplier,
    to_fourier,
    to_physical,
    zero_mode_fraction,
    ZERO_MODE_TOLERANCE,
)


class NormFamily(Enum):
    LEBESGUE = "Lebesgue"
    HOMOG_BESOV = "HomogBesov"
    INHOMOG_BESOV = "InhomogBesov"
    HOMOG_TRIEBEL = "HomogTriebel"
    INHOMOG_TRIEBEL = "InhomogTriebel"
    HOMOG_SOBOLEV = "HomogSobolev"
    BESSEL_SOBOLEV = "BesselSobolev"


_BESOV = (NormFamily.HOMOG_BESOV, NormFamily.INHOMOG_BESOV)
_TRIEBEL = (NormFamily.HOMOG_TRIEBEL, NormFamily.INHOMOG_TRIEBEL)
_SOBOLEV = (NormFamily.HOMOG_SOBOLEV, NormFamily.BESSEL_SOBOLEV)


@dataclass(frozen=True)
class NormSpec:
    family: NormFamily
    s: float = 0.0
    p: float = 2.0
    q: float = math.inf
    m2: float = 0.0
    shell_range: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.family is NormFamily.BESSEL_SOBOLEV and self.m2 < 0:
            raise ValueError("m2 must be nonnegative")


@dataclass(frozen=True)
class NormResult:
    family: NormFamily
    s: float
    p: float
    q: float
    value: float
    shell_range: Optional[Tuple[int, int]]
    warnings: Tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "family": self.family.value,
            "s": self.s,
            "p": self.p,
            "q": self.q if self.q != math.inf else "inf",
            "value": self.value,
            "shell_range": list(self.shell_range) if self.shell_range else None,
            "warnings": list(self.warnings),
        }


def lp_norm(field: Field, p: float) -> float:
    """(sum |f|^p w)^(1/p) with w = spacing^n; p = inf is the grid max."""
    if not p > 0:
        raise ValueError("p must be positive")
    phys = to_physical(field)
    mag = np.abs(phys.data)
    if math.isinf(p):
        return float(mag.max())
    w = field.grid.quadrature_weight
    return float((np.sum(mag ** p) * w) ** (1.0 / p))


def _resolve_shells(field: Field, spec: NormSpec) -> List[int]:
    grid = field.grid
    lo, hi = grid.shell_bounds
    inhomog = spec.family in (NormFamily.INHOMOG_BESOV, NormFamily.INHOMOG_TRIEBEL)
    if spec.shell_range is not None:
        klo, khi = spec.shell_range
        if klo > khi:
            raise ValueError("empty shell range")
        if (klo < lo and not inhomog) or khi > hi:
            raise ValueError(
                f"shell_range [{klo}, {khi}] outside the representable window [{lo}, {hi}]"
            )
    else:
        # the inhomogeneous sum starts at shell 1 by definition (the low-pass
        # block covers everything below), independent of the resolved range
        klo = 1 if inhomog else grid.k_min
        khi = grid.k_max
    if inhomog:
        klo = max(klo, 1)
    return list(range(klo, khi + 1))


def _shell_lp(hat: Field, k: int, p: float, profile: CutoffProfile) -> float:
    piece = hat.with_data(hat.data * shell_multiplier(hat.grid, k, profile))
    return lp_norm(to_physical(piece), p)


def _lq_reduce(terms: List[float], q: float) -> float:
    if math.isinf(q):
        return max(terms) if terms else 0.0
    acc = 0.0
    for t in terms:
        acc += t ** q
    return acc ** (1.0 / q)


def besov_norm(field: Field, spec: NormSpec, profile: CutoffProfile = DEFAULT_PROFILE) -> float:
    """l^q over shells of 2^(ks) ||shell_k f||_p.

    The inhomogeneous variant replaces shells k <= 0 by the single low-pass
    block, which enters with weight 1.
    """
    if spec.family not in _BESOV:
        raise ValueError(f"besov_norm got family {spec.family}")
    hat = to_fourier(field)
    if not np.any(hat.data):
        return 0.0
    shells = _resolve_shells(field, spec)
    terms = [2.0 ** (k * spec.s) * _shell_lp(hat, k, spec.p, profile) for k in shells]
    if spec.family is NormFamily.INHOMOG_BESOV:
        low = hat.with_data(hat.data * lowpass_multiplier(field.grid, profile))
        terms.insert(0, lp_norm(to_physical(low), spec.p))
    return _lq_reduce(terms, spec.q)


def triebel_norm(field: Field, spec: NormSpec, profile: CutoffProfile = DEFAULT_PROFILE) -> float:
    """L^p norm of the pointwise l^q aggregate over shells; p < inf only."""
    if spec.family not in _TRIEBEL:
        raise ValueError(f"triebel_norm got family {spec.family}")
    if math.isinf(spec.p):
        raise ValueError("triebel_norm requires p < inf")
    hat = to_fourier(field)
    if not np.any(hat.data):
        return 0.0
    grid = field.grid
    shells = _resolve_shells(field, spec)
    mults = [shell_multiplier(grid, k, profile) for k in shells]
    weights = [2.0 ** (k * spec.s) for k in shells]
    if spec.family is NormFamily.INHOMOG_TRIEBEL:
        mults.insert(0, lowpass_multiplier(grid, profile))
        weights.insert(0, 1.0)
    agg = np.zeros(grid.shape)
    for wk, mult in zip(weights, mults):
        piece = np.abs(to_physical(hat.with_data(hat.data * mult)).data) * wk
        if math.isinf(spec.q):
            agg = np.maximum(agg, piece)
        else:
            agg += piece ** spec.q
    if not math.isinf(spec.q):
        agg = agg ** (1.0 / spec.q)
    return lp_norm(Field(grid, Domain.PHYSICAL, agg), spec.p)


def sobolev_norm(field: Field, spec: NormSpec) -> float:
    """||(-Lap)^(s/2) f||_p, or the (m^2 + |xi|^2)^(s/2)-weighted L^2 norm."""
    if spec.family not in _SOBOLEV:
        raise ValueError(f"sobolev_norm got family {spec.family}")
    grid = field.grid
    hat = to_fourier(field)
    if spec.family is NormFamily.BESSEL_SOBOLEV:
        symbol = Bessel(spec.s, spec.m2)
    else:
        symbol = FracLaplacian(spec.s)
    if spec.p == 2.0:
        from .spectral import symbol_values

        vals = symbol_values(grid, symbol)
        total = float(np.sum((vals * np.abs(hat.data)) ** 2))
        return math.sqrt(total / grid.box_length ** grid.n)
    return lp_norm(to_physical(apply_symbol(hat, symbol)), spec.p)


def compute_norm(field: Field, spec: NormSpec) -> NormResult:
    """Facade returning the value plus shell range and warning flags."""
    warnings = []
    negative_order = spec.s < 0 or (
        spec.family is NormFamily.BESSEL_SOBOLEV and spec.m2 == 0 and spec.s < 0
    )
    if spec.family in _SOBOLEV and spec.s < 0 and spec.m2 == 0:
        if zero_mode_fraction(field) > ZERO_MODE_TOLERANCE:
            warnings.append("zero-mode dropped under a negative-order symbol")
    if spec.family is NormFamily.LEBESGUE:
        value = lp_norm(field, spec.p)
        rng = None
    elif spec.family in _BESOV:
        value = besov_norm(field, spec)
        rng = spec.shell_range or (field.grid.k_min, field.grid.k_max)
    elif spec.family in _TRIEBEL:
        value = triebel_norm(field, spec)
        rng = spec.shell_range or (field.grid.k_min, field.grid.k_max)
    else:
        value = sobolev_norm(field, spec)
        rng = None
    return NormResult(spec.family, spec.s, spec.p, spec.q, value, rng, tuple(warnings))
