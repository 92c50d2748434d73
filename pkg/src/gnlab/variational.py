"""Constrained minimization of the generalized boson-star energy.

The energy of an L-component nonnegative field u = (u_1, ..., u_L) is

    E(u) = 1/2 sum_i <(m^2 + |xi|^2)^s u_i^, u_i^>  -  <G(u), V * G(u)>,

with V(x) = |x|^-(n-beta) realized spectrally as riesz_constant(n, beta)
times the |xi|^-beta multiplier (zero mode dropped: on a torus that mode is
a periodization artifact, and the mean-field constant it carries cancels in
all reported comparisons).  Minimization runs projected gradient descent on
the mass spheres ||u_i||_2^2 = c_i with optional Schwarz rearrangement; the
rearrangement step is kept only when it does not increase the energy, so
traces stay monotone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .spectral import (
    Bessel,
    Domain,
    Field,
    FracLaplacian,
    Grid,
    RieszPotential,
    riesz_constant,
    symbol_values,
    to_physical,
)
from .testfuncs import positive_random_field

NEGATIVE_TOLERANCE = -1e-12


# ---------------------------------------------------------------------------
# nonlinearities


@dataclass(frozen=True)
class ProductPowers:
    """G(v) = v_1^a1 ... v_L^aL (vanishes whenever a component does)."""

    alphas: Tuple[float, ...]

    def __post_init__(self):
        if not self.alphas or any(a <= 0 for a in self.alphas):
            raise ValueError("ProductPowers needs positive exponents")


@dataclass(frozen=True)
class SumPowers:
    """G(v) = v_1^mu + ... + v_L^mu, mu >= 2."""

    mu: float = 2.0

    def __post_init__(self):
        if self.mu < 2:
            raise ValueError("SumPowers needs mu >= 2")


NonlinearityG = Union[ProductPowers, SumPowers]


def sum_squares() -> SumPowers:
    return SumPowers(2.0)


def g_degree(G: NonlinearityG) -> float:
    """Homogeneity degree: G(t v) = t^degree G(v)."""
    if isinstance(G, ProductPowers):
        return float(sum(G.alphas))
    return float(G.mu)


def g_value(G: NonlinearityG, comps: Sequence[np.ndarray]) -> np.ndarray:
    vs = [np.maximum(v, 0.0) for v in comps]
    if isinstance(G, ProductPowers):
        if len(G.alphas) != len(vs):
            raise ValueError("component count does not match ProductPowers")
        out = np.ones_like(vs[0])
        for v, a in zip(vs, G.alphas):
            out = out * v ** a
        return out
    out = np.zeros_like(vs[0])
    for v in vs:
        out += v ** G.mu
    return out


def g_partial(G: NonlinearityG, comps: Sequence[np.ndarray], i: int) -> np.ndarray:
    vs = [np.maximum(v, 0.0) for v in comps]
    if isinstance(G, SumPowers):
        return G.mu * vs[i] ** (G.mu - 1.0)
    out = np.full_like(vs[0], G.alphas[i])
    for j, (v, a) in enumerate(zip(vs, G.alphas)):
        if j == i:
            if a != 1.0:
                out = out * np.where(v > 0, v, 1.0) ** (a - 1.0)
                out = np.where(vs[i] > 0, out, 0.0 if a > 1.0 else out)
        else:
            out = out * v ** a
    return out


# ---------------------------------------------------------------------------
# multi-component fields


@dataclass(frozen=True)
class MultiField:
    """L real nonnegative components on one grid, with target masses c_i."""

    components: Tuple[Field, ...]
    masses: Tuple[float, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("need at least one component")
        grid = self.components[0].grid
        comps = []
        for f in self.components:
            if f.grid != grid:
                raise ValueError("components must share one grid")
            phys = to_physical(f)
            vals = phys.data.real
            if vals.min() < NEGATIVE_TOLERANCE:
                raise ValueError("components must be nonnegative up to round-off")
            comps.append(Field(grid, Domain.PHYSICAL, np.maximum(vals, 0.0).astype(np.complex128)))
        if len(self.masses) != len(comps):
            raise ValueError("one target mass per component")
        if any(c <= 0 for c in self.masses):
            raise ValueError("target masses must be positive")
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "masses", tuple(float(c) for c in self.masses))

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    def arrays(self) -> List[np.ndarray]:
        return [f.data.real for f in self.components]


@dataclass(frozen=True)
class EnergyParams:
    s: float
    m2: float
    beta: float
    G: NonlinearityG

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("s must be positive")
        if self.m2 < 0:
            raise ValueError("m^2 must be nonnegative")


def _check_beta(grid: Grid, beta: float) -> None:
    if not (0 < beta < grid.n):
        raise ValueError(f"beta must lie in (0, n); got {beta} with n={grid.n}")


def _inner(grid: Grid, f: np.ndarray, g: np.ndarray) -> float:
    return float(np.sum(f * g).real * grid.quadrature_weight)


def mass(grid: Grid, f: np.ndarray) -> float:
    return _inner(grid, f, f)


def _quad_form(grid: Grid, arr: np.ndarray, s: float, m2: float) -> float:
    """(1/L^n) sum (m^2 + |xi|^2)^s |f^|^2 (the squared s-energy norm)."""
    hat = np.fft.fftn(arr) * grid.quadrature_weight
    w = symbol_values(grid, Bessel(2.0 * s, m2))
    return float(np.sum(w * np.abs(hat) ** 2) / grid.box_length ** grid.n)


def _riesz_quadform(grid: Grid, density: np.ndarray, beta: float) -> float:
    """<rho, V * rho> via the Fourier identity, zero mode dropped."""
    _check_beta(grid, beta)
    hat = np.fft.fftn(density) * grid.quadrature_weight
    w = symbol_values(grid, RieszPotential(beta))
    raw = float(np.sum(w * np.abs(hat) ** 2) / grid.box_length ** grid.n)
    return riesz_constant(grid.n, beta) * raw


def _riesz_convolve(grid: Grid, density: np.ndarray, beta: float) -> np.ndarray:
    """V * rho as a physical array."""
    _check_beta(grid, beta)
    hat = np.fft.fftn(density)
    out = np.fft.ifftn(hat * symbol_values(grid, RieszPotential(beta)))
    return riesz_constant(grid.n, beta) * out.real


def upsilon_beta(u: MultiField, beta: float) -> float:
    """Interaction functional of the total density |u|^2 = sum u_i^2."""
    grid = u.grid
    rho = np.zeros(grid.shape)
    for arr in u.arrays():
        rho += arr ** 2
    return _riesz_quadform(grid, rho, beta)


def energy(u: MultiField, params: EnergyParams) -> float:
    grid = u.grid
    quad = 0.0
    for arr in u.arrays():
        quad += _quad_form(grid, arr, params.s, params.m2)
    inter = _riesz_quadform(grid, g_value(params.G, u.arrays()), params.beta)
    return 0.5 * quad - inter


def energy_gradient(u: MultiField, params: EnergyParams) -> List[Field]:
    """L^2 gradient: (m^2 - Lap)^s u_i - 2 (V * G(u)) dG/dv_i."""
    grid = u.grid
    arrs = u.arrays()
    conv = _riesz_convolve(grid, g_value(params.G, arrs), params.beta)
    w = symbol_values(grid, Bessel(2.0 * params.s, params.m2))
    out = []
    for i, arr in enumerate(arrs):
        quad_part = np.fft.ifftn(w * np.fft.fftn(arr)).real
        grad = quad_part - 2.0 * conv * g_partial(params.G, arrs, i)
        out.append(Field(grid, Domain.PHYSICAL, grad))
    return out


def project_spheres(u: MultiField) -> MultiField:
    """Rescale each component onto its mass sphere ||u_i||_2^2 = c_i."""
    grid = u.grid
    comps = []
    for arr, c in zip(u.arrays(), u.masses):
        norm2 = mass(grid, arr)
        if norm2 <= 0:
            raise ValueError("cannot project a zero component onto its sphere")
        comps.append(Field(grid, Domain.PHYSICAL, arr * math.sqrt(c / norm2)))
    return MultiField(tuple(comps), u.masses)


@lru_cache(maxsize=16)
def _radial_order(n: int, m: int, length: float) -> np.ndarray:
    grid = Grid(n, m, length)
    r2 = grid.coord_radius2().ravel()
    axes = []
    axis = grid.axis_coords()
    for ax in range(n):
        shape = [1] * n
        shape[ax] = m
        axes.append(np.broadcast_to(axis.reshape(shape), grid.shape).ravel())
    keys = tuple(reversed(axes)) + (r2,)
    order = np.lexsort(keys)
    order.flags.writeable = False
    return order


def schwarz_rearrange(field: Field) -> Field:
    """Grid Schwarz symmetrization: |values| sorted decreasingly along the
    distance-from-origin order (lexicographic tie-break)."""
    grid = field.grid
    phys = to_physical(field)
    vals = np.sort(np.abs(phys.data.real).ravel())[::-1]
    order = _radial_order(grid.n, grid.points_per_dim, grid.box_length)
    out = np.empty(vals.size)
    out[order] = vals
    return Field(grid, Domain.PHYSICAL, out.reshape(grid.shape))


def radially_nonincreasing(field: Field, tol: float = 1e-8) -> bool:
    """Strict check in the sorted-distance order (exact for rearrangement
    outputs; grid anisotropy makes converged minimizers fail it at the
    sub-percent level, use monotone_along_rays for those)."""
    grid = field.grid
    order = _radial_order(grid.n, grid.points_per_dim, grid.box_length)
    vals = to_physical(field).data.real.ravel()[order]
    peak = float(np.abs(vals).max()) or 1.0
    return bool(np.all(np.diff(vals) <= tol * peak))


def monotone_along_rays(field: Field, tol: float = 1e-8) -> bool:
    """Values nonincreasing outward from the origin along the axis and main
    diagonal rays."""
    grid = field.grid
    v = to_physical(field).data.real
    n, m = grid.n, grid.points_per_dim
    peak = float(np.abs(v).max()) or 1.0
    dirs = []
    for ax in range(n):
        for sign in (1, -1):
            d = [0] * n
            d[ax] = sign
            dirs.append(tuple(d))
    if n > 1:
        for signs in ((1,) * n, (-1,) * n):
            dirs.append(signs)
    steps = np.arange(m // 2)
    for d in dirs:
        idx = tuple((steps * di) % m if di else np.zeros_like(steps) for di in d)
        vals = v[idx]
        if np.any(np.diff(vals) > tol * peak):
            return False
    return True


# ---------------------------------------------------------------------------
# minimization


@dataclass(frozen=True)
class MinimizeOptions:
    max_iters: int = 2000
    tol: float = 1e-9
    rearrange_every: int = 1
    armijo: float = 1e-4
    initial_step: float = 1.0
    window: int = 10


@dataclass
class MinimizeResult:
    u_final: MultiField
    energy_trace: List[float]
    multipliers: List[float]
    el_residual: float
    converged: bool
    iterations: int
    message: str = ""


class DivergenceError(RuntimeError):
    """Raised when the descent produces NaN or the line search cannot make
    progress while the gradient is still large."""


def _tangent(grid: Grid, g: np.ndarray, uarr: np.ndarray, c: float) -> np.ndarray:
    return g - (_inner(grid, g, uarr) / c) * uarr


def minimize(u0: MultiField, params: EnergyParams, options: MinimizeOptions = MinimizeOptions()) -> MinimizeResult:
    """Projected gradient descent with backtracking line search.

    The search direction is the constraint-tangent gradient preconditioned by
    (max(m^2, 1) + |xi|^2)^-s, which removes the stiffness of the quadratic
    term; descent is still measured against the true L^2 gradient.  Every
    rearrange_every iterations the iterate is replaced by its componentwise
    Schwarz rearrangement (re-projected), kept only if the energy does not
    increase.  Terminates once the relative energy decrease over the trailing
    window drops below tol.
    """
    grid = u0.grid
    _check_beta(grid, params.beta)
    u = project_spheres(u0)
    e = energy(u, params)
    if math.isnan(e):
        raise DivergenceError("initial energy is NaN")
    trace = [e]
    pre = symbol_values(grid, Bessel(-2.0 * params.s, max(params.m2, 1.0)))
    converged = False
    message = ""
    it = 0
    for it in range(1, options.max_iters + 1):
        grads = [g.data.real for g in energy_gradient(u, params)]
        arrs = u.arrays()
        tangents = [
            _tangent(grid, g, a, c) for g, a, c in zip(grads, arrs, u.masses)
        ]
        dirs = [np.fft.ifftn(pre * np.fft.fftn(t)).real for t in tangents]
        slope = sum(_inner(grid, t, d) for t, d in zip(tangents, dirs))
        if slope <= 0:
            dirs = tangents
            slope = sum(_inner(grid, t, t) for t in tangents)
        if slope <= 0:
            converged = True
            message = "stationary (zero tangent gradient)"
            break

        step = options.initial_step
        accepted = False
        for _ in range(40):
            cand_arrays = [np.maximum(a - step * d, 0.0) for a, d in zip(arrs, dirs)]
            try:
                cand = project_spheres(MultiField(
                    tuple(Field(grid, Domain.PHYSICAL, ca) for ca in cand_arrays),
                    u.masses,
                ))
            except ValueError:
                step *= 0.5
                continue
            e_cand = energy(cand, params)
            if math.isnan(e_cand):
                raise DivergenceError(f"energy NaN at iteration {it}")
            if e_cand <= e - options.armijo * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            grad_scale = math.sqrt(sum(_inner(grid, t, t) for t in tangents))
            if grad_scale < 1e-8 * max(1.0, abs(e)):
                converged = True
                message = "line search exhausted at a stationary point"
                break
            raise DivergenceError(
                f"line search failed at iteration {it} with energy {e:.6g}"
            )
        u, e = cand, e_cand

        if options.rearrange_every > 0 and it % options.rearrange_every == 0:
            rearranged = MultiField(
                tuple(schwarz_rearrange(f) for f in u.components), u.masses
            )
            rearranged = project_spheres(rearranged)
            e_r = energy(rearranged, params)
            if e_r <= e:
                u, e = rearranged, e_r
        trace.append(e)

        if len(trace) > options.window:
            prev = trace[-options.window - 1]
            scale = max(abs(prev), abs(e), 1e-30)
            if (prev - e) / scale < options.tol:
                converged = True
                message = "energy plateau"
                break

    grads = [g.data.real for g in energy_gradient(u, params)]
    multipliers = []
    residual = 0.0
    for g, arr, c in zip(grads, u.arrays(), u.masses):
        r_i = -_inner(grid, g, arr) / c
        multipliers.append(r_i)
        num = math.sqrt(mass(grid, g + r_i * arr))
        den = math.sqrt(mass(grid, arr))
        residual = max(residual, num / den)
    return MinimizeResult(u, trace, multipliers, residual, converged, it, message)


# ---------------------------------------------------------------------------
# sharp-constant estimation


@dataclass
class CStarEstimate:
    value: float
    argmax: Field
    starts: int


def _quotient(grid: Grid, arr: np.ndarray, beta: float, s: float) -> float:
    a = mass(grid, arr)
    b = _quad_form(grid, arr, s, 0.0)
    if a <= 0 or b <= 0:
        return 0.0
    return _riesz_quadform(grid, arr ** 2, beta) / (a * b)


def estimate_cstar(
    n: int,
    beta: float,
    grid: Grid,
    max_iters: int = 200,
    seeds: Sequence[int] = (0, 1),
    extra_starts: Sequence[Field] = (),
) -> CStarEstimate:
    """Lower-bound estimate of sup Upsilon(u) / (||u||_2^2 ||u||_{Hs}^2),
    s = (n - beta)/2, by multi-start normalized gradient ascent.

    Returns the best quotient found; the true supremum can only be larger.
    """
    if grid.n != n:
        raise ValueError("grid dimension mismatch")
    _check_beta(grid, beta)
    s = (n - beta) / 2.0
    starts: List[np.ndarray] = []
    r2 = grid.coord_radius2()
    for frac in (8.0, 12.0, 20.0):
        width = max(grid.box_length / frac, 2.0 * grid.spacing)
        starts.append(np.exp(-r2 / (2.0 * width ** 2)))
    for seed in seeds:
        starts.append(positive_random_field(grid, seed).data.real)
    for f in extra_starts:
        starts.append(to_physical(f).data.real)

    best_val = -1.0
    best_arr = None
    for arr0 in starts:
        arr = arr0 / math.sqrt(mass(grid, arr0))
        q = _quotient(grid, arr, beta, s)
        for _ in range(max_iters):
            ups = _riesz_quadform(grid, arr ** 2, beta)
            a = mass(grid, arr)
            b = _quad_form(grid, arr, s, 0.0)
            if ups <= 0 or b <= 0:
                break
            conv = _riesz_convolve(grid, arr ** 2, beta)
            grad_ups = 4.0 * conv * arr
            grad_b = 2.0 * np.fft.ifftn(
                symbol_values(grid, FracLaplacian(2.0 * s)) * np.fft.fftn(arr)
            ).real
            d = grad_ups / ups - (2.0 / a) * arr - grad_b / b
            dn = math.sqrt(mass(grid, d))
            if dn < 1e-14:
                break
            d /= dn
            step = 0.5
            improved = False
            for _ in range(25):
                cand = np.maximum(arr + step * d, 0.0)
                mcand = mass(grid, cand)
                if mcand > 0:
                    cand = cand / math.sqrt(mcand)
                    qc = _quotient(grid, cand, beta, s)
                    if qc > q * (1.0 + 1e-12):
                        arr, q = cand, qc
                        improved = True
                        break
                step *= 0.5
            if not improved:
                break
        if q > best_val:
            best_val = q
            best_arr = arr
    if best_arr is None or best_val <= 0:
        raise DivergenceError("all ascent starts degenerated")
    return CStarEstimate(best_val, Field(grid, Domain.PHYSICAL, best_arr), len(starts))


# ---------------------------------------------------------------------------
# scaling profiles and regime classification


@dataclass
class ScalingProfile:
    lambdas: List[float]
    energies: List[float]
    fitted_exponent: Optional[float]


def scaling_profile(u: MultiField, params: EnergyParams, lambdas: Sequence[float]) -> ScalingProfile:
    """Energies of the mass-preserving dilates u_lambda = lambda^(n/2) u(lambda x).

    Evaluated by exact Fourier-side reindexing: the quadratic form becomes
    (m^2 + |lambda xi|^2)^s against the undilated spectrum, and the
    interaction picks up the factor lambda^(d n - n - beta) for a
    homogeneity-d nonlinearity, so arbitrary lambda > 0 are admissible.
    """
    grid = u.grid
    _check_beta(grid, params.beta)
    d = g_degree(params.G)
    inter = _riesz_quadform(grid, g_value(params.G, u.arrays()), params.beta)
    r = grid.freq_radius()
    hats = [np.abs(np.fft.fftn(a) * grid.quadrature_weight) ** 2 for a in u.arrays()]
    vol = grid.box_length ** grid.n
    energies = []
    for lam in lambdas:
        if lam <= 0:
            raise ValueError("lambda must be positive")
        w = (params.m2 + (lam * r) ** 2) ** params.s
        quad = sum(float(np.sum(w * h)) for h in hats) / vol
        energies.append(0.5 * quad - lam ** (d * grid.n - grid.n - params.beta) * inter)
    exponent = _tail_exponent(list(lambdas), energies)
    return ScalingProfile(list(lambdas), energies, exponent)


def _tail_exponent(lambdas: List[float], energies: List[float]) -> Optional[float]:
    if len(lambdas) < 3:
        return None
    tail = energies[-3:]
    lam = lambdas[-3:]
    if any(e == 0 for e in tail):
        return None
    signs = {math.copysign(1.0, e) for e in tail}
    if len(signs) > 1:
        return None
    x = np.log2(np.asarray(lam))
    y = np.log2(np.abs(np.asarray(tail)))
    return float(np.polyfit(x, y, 1)[0])


class Regime(Enum):
    MINIMIZER_EXISTS = "MinimizerExists"
    MINIMIZER_EXISTS_IFF = "MinimizerExistsIff"
    NO_MINIMIZER = "NoMinimizer"
    MINUS_INFINITY = "MinusInfinity"
    NOT_ACHIEVED = "NotAchieved"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    case: str
    critical_mass: Optional[float] = None
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "case": self.case,
            "critical_mass": self.critical_mass,
            "note": self.note,
        }


_REL_TOL = 1e-9


def regime_classify(
    n: int,
    beta: float,
    s: float,
    m2: float,
    c: float,
    cstar: float,
    G: NonlinearityG,
) -> RegimeReport:
    """Exact case analysis of minimizer existence for the given parameters.

    cstar is the (estimated) sharp interaction constant; the mass threshold
    is 1/(2 cstar).  Comparisons against the threshold use a 1e-9 relative
    tolerance, and reports near the threshold are flagged as
    estimate-limited.
    """
    if not (0 < beta < n):
        return RegimeReport(Regime.OUT_OF_SCOPE, "invalid", note="beta outside (0, n)")
    if s <= 0 or c <= 0 or cstar <= 0 or m2 < 0:
        return RegimeReport(Regime.OUT_OF_SCOPE, "invalid", note="parameters out of range")
    s_crit = (n - beta) / 2.0

    if isinstance(G, ProductPowers):
        alpha = sum(G.alphas)
        margin = n + beta - n * alpha + 2.0 * s
        if margin < 0:
            return RegimeReport(
                Regime.MINUS_INFINITY,
                "supercritical-growth",
                note="concentration drives the energy to -infinity (n*alpha > n + beta + 2s)",
            )
        if s > s_crit and margin > 0:
            return RegimeReport(
                Regime.MINIMIZER_EXISTS,
                "supercritical-smoothness",
                note="assumes the structural conditions on G (vanishing on zero components, supermodular pair, scaling bound)",
            )
        if s == s_crit or margin == 0:
            return RegimeReport(
                Regime.OUT_OF_SCOPE,
                "borderline-growth",
                note="borderline product nonlinearity is not classified",
            )
        return RegimeReport(Regime.MINUS_INFINITY, "subcritical-smoothness",
                            note="s < (n - beta)/2")

    # sum-of-powers kinds
    if s > s_crit:
        if G.mu < 1.0 + (2.0 * s + beta) / n:
            return RegimeReport(Regime.MINIMIZER_EXISTS, "supercritical-smoothness")
        return RegimeReport(
            Regime.OUT_OF_SCOPE, "supercritical-growth",
            note="mu outside [2, 1 + (2s + beta)/n)",
        )
    if s < s_crit:
        return RegimeReport(Regime.MINUS_INFINITY, "subcritical-smoothness",
                            note="s < (n - beta)/2")
    if G.mu != 2.0:
        return RegimeReport(
            Regime.OUT_OF_SCOPE, "critical-growth",
            note="critical smoothness requires the quadratic nonlinearity",
        )

    crit = 1.0 / (2.0 * cstar)
    near = abs(c - crit) <= _REL_TOL * crit
    if m2 == 0:
        if near:
            return RegimeReport(
                Regime.MINIMIZER_EXISTS_IFF, "critical-massless", crit,
                note="boundary, estimate-limited",
            )
        if c > crit:
            return RegimeReport(Regime.MINUS_INFINITY, "critical-massless", crit)
        return RegimeReport(
            Regime.NO_MINIMIZER, "critical-massless", crit,
            note="infimum 0 is not attained below the critical mass",
        )
    if n > 2 + beta:
        return RegimeReport(
            Regime.NOT_ACHIEVED, "critical-massive-high-dim", crit,
            note="infimum c m^(2s)/2 is never attained",
        )
    if n == 2 + beta:
        state = "attained" if near else ("collapses" if c > crit else "not attained")
        return RegimeReport(
            Regime.MINIMIZER_EXISTS_IFF, "critical-massive-borderline", crit,
            note=f"exists exactly at the critical mass; supplied c is {state}",
        )
    # n < 2 + beta
    if near:
        return RegimeReport(
            Regime.NOT_ACHIEVED, "critical-massive-low-dim", crit,
            note="boundary, estimate-limited",
        )
    if c > crit:
        return RegimeReport(Regime.MINUS_INFINITY, "critical-massive-low-dim", crit)
    return RegimeReport(Regime.MINIMIZER_EXISTS, "critical-massive-low-dim", crit)


# ---------------------------------------------------------------------------
# structural checks on G


@dataclass
class GConditionsReport:
    growth_constant: float
    zero_component_ok: bool
    scaling_mode: str
    scaling_failures: int
    supermodular_failures: int
    samples: int

    @property
    def passed(self) -> bool:
        return (
            self.zero_component_ok
            and self.scaling_failures == 0
            and self.supermodular_failures == 0
        )


def g_conditions_check(
    G: NonlinearityG,
    sample_count: int = 1000,
    seed: int = 0,
    components: int = 2,
) -> GConditionsReport:
    """Numerically spot-check the structural conditions on G.

    Growth: reports the largest observed G(v) / (|v|^2 + |v|^mu).  Zero
    components: G must vanish when any component does (product kinds).
    Scaling: G(t v) >= t_max G(v) for t_i >= 1, sampled componentwise for
    product kinds and with a common t for sum kinds (sum kinds live under a
    single joint mass constraint).  Supermodularity is sampled on the pair
    function G(u) G(v) via mixed second differences.
    """
    L = len(G.alphas) if isinstance(G, ProductPowers) else components
    mu = g_degree(G)
    rng = np.random.default_rng(seed)

    vs = rng.uniform(0.0, 0.1, size=(sample_count, L))
    gv = g_value(G, [vs[:, i] for i in range(L)])
    norm = np.sqrt(np.sum(vs ** 2, axis=1))
    growth = float(np.max(gv / (norm ** 2 + norm ** mu + 1e-300)))

    zero_ok = True
    probe = rng.uniform(0.5, 1.5, size=L)
    for i in range(L):
        v = probe.copy()
        v[i] = 0.0
        if float(g_value(G, [np.array([x]) for x in v])[0]) != 0.0:
            zero_ok = False
    if isinstance(G, SumPowers):
        zero_ok = L == 1  # sums do not vanish on a single zero component

    mode = "componentwise" if isinstance(G, ProductPowers) else "common"
    scaling_failures = 0
    base = rng.uniform(0.0, 2.0, size=(sample_count, L))
    if mode == "componentwise":
        ts = rng.uniform(1.0, 5.0, size=(sample_count, L))
    else:
        ts = np.repeat(rng.uniform(1.0, 5.0, size=(sample_count, 1)), L, axis=1)
    g0 = g_value(G, [base[:, i] for i in range(L)])
    g1 = g_value(G, [(ts * base)[:, i] for i in range(L)])
    tmax = np.max(ts, axis=1)
    scaling_failures = int(np.sum(g1 < tmax * g0 * (1.0 - 1e-12)))

    super_failures = 0
    y = rng.uniform(0.0, 2.0, size=(sample_count, 2 * L))
    hs = rng.uniform(0.01, 1.0, size=sample_count)
    ks = rng.uniform(0.01, 1.0, size=sample_count)
    pair = lambda z: g_value(G, [z[:, i] for i in range(L)]) * g_value(
        G, [z[:, L + i] for i in range(L)]
    )
    for trial in range(sample_count):
        i, j = rng.choice(2 * L, size=2, replace=False)
        zi = y[trial : trial + 1].copy()
        z_h = zi.copy(); z_h[0, i] += hs[trial]
        z_k = zi.copy(); z_k[0, j] += ks[trial]
        z_hk = z_h.copy(); z_hk[0, j] += ks[trial]
        lhs = pair(z_hk)[0] + pair(zi)[0]
        rhs = pair(z_h)[0] + pair(z_k)[0]
        if lhs < rhs - 1e-10 * max(1.0, abs(rhs)):
            super_failures += 1

    return GConditionsReport(growth, zero_ok, mode, scaling_failures, super_failures, sample_count)
