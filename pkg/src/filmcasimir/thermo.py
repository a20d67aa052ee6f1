"""Thermodynamic derivatives and the thermal part of the free energy.

The thermal correction ΔF = F(T) - E(0) is computed without forming the
catastrophically cancelling difference of the two large numbers. Writing
F as the primed Matsubara sum and E as the corresponding integral, the
difference of a trapezoid-like sum and its integral is exactly the Gregory
end-correction series, which only needs finite differences of phi at the
two ends of the lattice. Concretely, with h = tau/m a refinement of the
Matsubara spacing,

    sum'_tau phi - (1/tau) int phi =
        [sum'_tau phi - (1/m) sum'_h phi]
        + (1/m) sum_k g_k [Delta_h^k phi(0) + (-1)^k nabla_h^k phi(zL)]

where g_k are the Gregory coefficients. Both bracketed pieces are small and
numerically benign; below tau ~ 0.03 the lattice sums are accumulated in
extended precision because the bracket shrinks like tau^2 relative to the
sums themselves.

The Drude correction cannot use the lattice bracket directly (its phi varies
on the scale of the relaxation frequency, far below the lattice spacing at
low T); it is assembled as the plasma correction plus the zero-frequency
jump plus the l >= 1 model-difference sum, which is an identity.

Entropy differentiates the thermal part only (the T = 0 energy is constant
in T, so this is the same derivative), and pressure differentiates the full
free energy in thickness; both use central differences with Richardson
extrapolation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import KB
from .dielectric import DielectricModel, FilmState, Kind, dimensionless_params
from .lifshitz_core import (
    DEFAULT_QUAD,
    ConvergenceError,
    QuadratureConfig,
    _l1_difference_sum,
    _lattice_contraction,
    _phi_lattice,
    _phi_rule,
    _umax_for,
    free_energy,
)
from .specialfn import ZETA3

# Gregory end-correction coefficients g_k, k = 1..8:
# (1/h) int_0^{zL} f = trap_h f - sum_k g_k [Delta^k f(0) + (-1)^k nabla^k f(zL)]
_GREGORY_FRAC = (
    (-1, 12),
    (1, 24),
    (-19, 720),
    (3, 160),
    (-863, 60480),
    (275, 24192),
    (-33953, 3628800),
    (8183, 1036800),
)
GREGORY = tuple(p / q for p, q in _GREGORY_FRAC)

_LONGDOUBLE_TAU = 0.03


@dataclass(frozen=True)
class DiffConfig:
    rel_step: float = 1e-3
    richardson_levels: int = 3

    def __post_init__(self) -> None:
        if not self.rel_step > 0:
            raise ValueError("rel_step must be positive")
        if self.richardson_levels < 1:
            raise ValueError("richardson_levels must be >= 1")


DEFAULT_DIFF = DiffConfig()


@dataclass(frozen=True)
class ThermoResult:
    free_energy: float          # J/m^2
    pressure: float             # Pa
    entropy: float              # J/(m^2 K)
    thermal_correction: float   # J/m^2
    model: Kind
    err_free_energy: float
    err_pressure: float
    err_entropy: float
    err_thermal_correction: float


def _gregory_bracket(
    w: float,
    tau: float,
    quad: QuadratureConfig,
) -> tuple[float, float]:
    """Dimensionless D = sum'_{l>=0} phi_p(tau l) - (1/tau) int_0^inf phi_p.

    Returns (D, err). Plasma model only.

    Assembled from three benign pieces:
      * the coarse-minus-fine trapezoid defect on [0, z_A], regrouped as one
        small O(h^2 phi'') term per coarse cell so no large totals cancel;
      * Gregory end corrections of the fine trapezoid at 0 and z_A;
      * the coarse tail beyond z_A, whose sum-minus-integral defect is the
        Gregory forward-difference series at z_A (residual O(tau^{K+1})).
    z_A is pushed out until tau^{K+1} phi(z_A) is negligible against the
    tau^3-scale result, which matters only for tau near 1.

    The whole combination is one linear functional of phi on the lattice, so
    it is evaluated through a single integrand-level contraction; summing
    phi values first would lose the tau^3-small result in their roundoff."""
    del quad
    k_max = len(_GREGORY_FRAC)
    # lattice: fine step h = tau/m resolves phi's unit curvature scale
    m = min(64, max(2, math.ceil(tau / 0.01)))
    ds_a = min(42.0, max(8.0, 21.0 + 6.0 * math.log(tau)))
    l_a = max(int(math.ceil(_umax_for(w, ds_a) / tau)), k_max + 2, 10)
    n_fine = m * l_a
    dtype = np.longdouble if tau < _LONGDOUBLE_TAU else np.float64
    if n_fine + 1 > 80_000_000:
        raise ConvergenceError(
            f"thermal-correction lattice needs {n_fine} points; tau too small"
        )
    tau_d = dtype(tau)
    h_d = tau_d / dtype(m)
    rule = _phi_rule(w, float(h_d))
    zs = np.concatenate(
        [
            h_d * np.arange(0, n_fine + 1, dtype=dtype),
            tau_d * (l_a + np.arange(1, k_max + 1, dtype=dtype)),
        ]
    )
    gregory = tuple(dtype(p) / dtype(q) for p, q in _GREGORY_FRAC)
    inv_m = dtype(1) / dtype(m)

    c = np.zeros(zs.shape[0], dtype=dtype)
    # coarse-minus-(1/m)*fine trapezoid weights on [0, z_A]
    c[1:n_fine] = -inv_m
    c[m:n_fine:m] = dtype(1) - inv_m
    c[0] = (dtype(1) - inv_m) * dtype(0.5)
    c[n_fine] = (dtype(1) - inv_m) * dtype(0.5)
    # Gregory end corrections of the fine trapezoid at 0 and z_A,
    # and of the coarse tail sum at z_A (forward, toward the extension points)
    for k in range(1, k_max + 1):
        gk = gregory[k - 1]
        sign_k = dtype(-1) if k % 2 else dtype(1)
        for j in range(0, k + 1):
            binom = dtype(math.comb(k, j))
            sign_j = dtype(-1) if (k - j) % 2 else dtype(1)
            c[j] += inv_m * gk * sign_j * binom
            c[n_fine - (k - j)] += inv_m * gk * sign_k * sign_j * binom
            c[n_fine if j == 0 else n_fine + j] += gk * sign_j * binom
    d = _lattice_contraction(zs, c, w, rule, kind=Kind.PLASMA, dtype=dtype)

    # error: magnitude of the last two Gregory orders plus the roundoff floor
    ends = np.concatenate([zs[: k_max + 1], zs[n_fine - k_max :]])
    phi_ends = _phi_lattice(ends, w, rule, kind=Kind.PLASMA, dtype=dtype)
    fwd0 = phi_ends[: k_max + 1].copy()
    bwd_a = phi_ends[k_max + 1 : 2 * (k_max + 1)].copy()
    fwd_a = phi_ends[2 * k_max + 1 :].copy()
    tail_terms = 0.0
    for k in range(1, k_max + 1):
        fwd0 = np.diff(fwd0)
        bwd_a = np.diff(bwd_a)
        fwd_a = np.diff(fwd_a)
        if k > k_max - 2:
            tail_terms += float(
                gregory[k - 1]
                * ((fwd0[0] + (-1) ** k * bwd_a[-1]) * inv_m + fwd_a[0])
            )
    eps = float(np.finfo(dtype).eps)
    phi0 = abs(float(phi_ends[0]))
    err = abs(tail_terms) + eps * phi0 * (2.0 + math.sqrt(n_fine) / 4.0)
    return d, err


def _thermal_correction_impl(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig,
) -> tuple[float, float]:
    params = dimensionless_params(model.material, s)
    w = params.omega_p_tilde
    pref = KB * s.T / (8.0 * math.pi * s.a * s.a)
    if w == 0.0:
        return 0.0, 0.0
    d, err = _gregory_bracket(w, params.tau, quad)
    if model.kind is Kind.PLASMA:
        return pref * d, pref * err
    # Drude: add the zero-frequency jump and the l >= 1 model difference
    rule = _phi_rule(w, 1.0)
    phi_p0 = float(_phi_lattice(np.array([0.0]), w, rule, kind=Kind.PLASMA)[0])
    jump0 = 0.5 * (-ZETA3 - phi_p0)
    diff_sum, _ = _l1_difference_sum(params, quad)
    value = pref * (d + jump0 + diff_sum)
    err_total = pref * (err + 1e-10 * abs(diff_sum) + 1e-15 * abs(jump0))
    return value, err_total


def thermal_correction(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """Thermal part of the free energy, ΔF = F(a,T) - E(a), J/m^2.

    Equal by definition to free_energy(model, s) - zero_T_energy(model, s),
    but evaluated through the lattice end-correction form above, which stays
    accurate when the two terms agree to many digits. See
    abel_plana_correction for an independent cross-check path.
    """
    if not s.T > 0:
        raise ValueError("thermal_correction requires T > 0")
    return _thermal_correction_impl(model, s, quad)[0]


def abel_plana_correction(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """ΔF via the sum-minus-integral contour form, J/m^2. Plasma model only.

    ΔF = -(kB T/8 pi a^2) * 2 int_0^inf Im phi(i tau t) / (e^{2 pi t} - 1) dt,
    with phi continued to imaginary frequency along y = i*theta + u. This is
    a verification path for small tau, not the production path.
    """
    if model.kind is not Kind.PLASMA:
        raise ValueError("the contour form is implemented for the plasma model only")
    if not s.T > 0:
        raise ValueError("abel_plana_correction requires T > 0")
    params = dimensionless_params(model.material, s)
    w = params.omega_p_tilde
    tau = params.tau
    if w == 0.0:
        return 0.0
    if tau > 0.5:
        warnings.warn(
            f"contour cross-check used at tau={tau:.3g}; intended for small tau",
            stacklevel=2,
        )
    xg, wg = np.polynomial.legendre.leggauss(48)
    edges = np.array([0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 7.0, 10.0])
    lo, hi = edges[:-1, None], edges[1:, None]
    t = (0.5 * (hi - lo) * xg[None, :] + 0.5 * (hi + lo)).ravel()
    tw = (0.5 * (hi - lo) * np.repeat(wg[None, :], len(edges) - 1, axis=0)).ravel()
    rule = _phi_rule(w, min(1.0, tau))
    phis = _phi_lattice(1j * tau * t, w, rule, kind=Kind.PLASMA)
    integral = float(np.imag(phis) / np.expm1(2.0 * math.pi * t) @ tw)
    pref = KB * s.T / (8.0 * math.pi * s.a * s.a)
    return -2.0 * pref * integral


def _richardson_derivative(
    f,
    x0: float,
    h0: float,
    levels: int,
) -> tuple[float, float]:
    """Central-difference derivative with Richardson extrapolation.

    Returns (derivative, error estimate from the last tableau increment)."""
    table = []
    h = h0
    for i in range(levels):
        d0 = (f(x0 + h) - f(x0 - h)) / (2.0 * h)
        row = [d0]
        for j in range(1, i + 1):
            fac = 4.0**j
            row.append((fac * row[j - 1] - table[i - 1][j - 1]) / (fac - 1.0))
        table.append(row)
        h *= 0.5
    best = table[-1][-1]
    if levels == 1:
        return best, abs(best) * 1e-3
    err = abs(table[-1][-1] - table[-1][-2]) + abs(table[-1][-1] - table[-2][-1])
    return best, err


def _pressure_impl(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig,
    diff: DiffConfig,
) -> tuple[float, float]:
    h0 = diff.rel_step * s.a
    if s.a - h0 <= 0:
        raise ValueError("differentiation step collapses the thickness to <= 0")

    def f(a: float) -> float:
        return free_energy(model, FilmState(a, s.T), quad).value

    d, err = _richardson_derivative(f, s.a, h0, diff.richardson_levels)
    return -d, err


def pressure(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
    diff: DiffConfig = DEFAULT_DIFF,
) -> float:
    """Casimir pressure P = -dF/da, Pa. Requires T > 0."""
    if not (s.a > 0 and s.T > 0):
        raise ValueError("pressure requires a > 0 and T > 0")
    return _pressure_impl(model, s, quad, diff)[0]


def _entropy_step(mat, T: float, rel_step: float, levels: int) -> float:
    """Largest step keeping all Richardson evaluations on one gamma(T) branch
    and above T = 0."""
    h0 = rel_step * T
    t_x = mat.T_debye / 20.0
    for join in (t_x, mat.T_debye / 4.0):
        dist = abs(T - join)
        if dist > 0:
            h0 = min(h0, 0.49 * dist)
    h0 = min(h0, 0.49 * T)
    return max(h0, 1e-9 * T)


def _entropy_impl(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig,
    diff: DiffConfig,
) -> tuple[float, float]:
    h0 = (
        _entropy_step(model.material, s.T, diff.rel_step, diff.richardson_levels)
        if model.kind is Kind.DRUDE
        else min(diff.rel_step * s.T, 0.49 * s.T)
    )

    def f(T: float) -> float:
        return thermal_correction(model, FilmState(s.a, T), quad)

    d, err = _richardson_derivative(f, s.T, h0, diff.richardson_levels)
    return -d, err


def entropy(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
    diff: DiffConfig = DEFAULT_DIFF,
) -> float:
    """Casimir entropy S = -dF/dT, J/(m^2 K). Requires T > 0.

    The T = 0 energy is constant in T, so only the thermal part is
    differentiated; that avoids losing the small thermal signal inside the
    full free energy at low T. For the Drude model the step is shrunk near
    the relaxation-model branch joins so all evaluations stay on one branch.
    """
    if not s.T > 0:
        raise ValueError("entropy requires T > 0; the T = 0 limit has closed forms")
    return _entropy_impl(model, s, quad, diff)[0]


def thermo_point(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
    diff: DiffConfig = DEFAULT_DIFF,
) -> ThermoResult:
    """Free energy, pressure, entropy and thermal correction at one state."""
    fe = free_energy(model, s, quad)
    p, p_err = _pressure_impl(model, s, quad, diff)
    sv, s_err = _entropy_impl(model, s, quad, diff)
    dv, d_err = _thermal_correction_impl(model, s, quad)
    if model.kind is Kind.PLASMA and sv < -s_err:
        warnings.warn(
            f"plasma-model entropy negative beyond its error bar "
            f"(S={sv:.3e}, err={s_err:.3e}) at a={s.a}, T={s.T}",
            stacklevel=2,
        )
    return ThermoResult(
        free_energy=fe.value,
        pressure=p,
        entropy=sv,
        thermal_correction=dv,
        model=model.kind,
        err_free_energy=fe.err_estimate,
        err_pressure=p_err,
        err_entropy=s_err,
        err_thermal_correction=d_err,
    )
