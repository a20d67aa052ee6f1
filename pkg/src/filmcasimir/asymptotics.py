"""Closed-form low-temperature results and the Drude free-energy decomposition.

The plasma-model thermal corrections to free energy, pressure and entropy
admit elementary closed forms at low temperature, all governed by the Bose
factor 1/(e^w - 1) with w = 2 a omega_p / c.  The Drude free energy splits
exactly into the plasma result plus a zero-frequency mismatch plus a
relaxation remainder F_gamma; the remainder has a first-order kernel form
and an analytic upper bound X(a, T) whose temperature scaling settles the
Nernst question for the Drude film.

Conventions: I1 and I2 denote the TM and TE zero-frequency integrals of the
plasma model (both negative), so the plasma l = 0 half term is
(kB T / 16 pi a^2) (I1 + I2) and the Drude one is -(kB T / 16 pi a^2) zeta(3).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR, KB
from .dielectric import (
    DielectricModel,
    DimensionlessParams,
    FilmState,
    Kind,
    Material,
    asymptotic_window_ok,
    dimensionless_params,
    gamma_of_T,
)
from .lifshitz_core import (
    DEFAULT_QUAD,
    ConvergenceError,
    QuadratureConfig,
    _l1_difference_sum,
    _phi_point,
    _phi_rule,
    _umax_for,
    free_energy,
)
from .specialfn import ZETA3, bessel_k, polylog

# beyond this, e^w handling switches to the explicitly underflowing form
_OVERFLOW_W = 700.0


@dataclass(frozen=True)
class FGammaResult:
    """Relaxation part of the Drude free energy, J/m^2, by both routes.

    exact: difference of the full Drude and plasma l >= 1 Matsubara sums.
    first_order: kernel form, first order in delta_l = gamma(T)/xi_l.
    difference: first_order - exact (consistency metric, O(delta_1^2)).
    """

    exact: float
    first_order: float
    difference: float


@dataclass(frozen=True)
class DrudeDecomposition:
    """F_D = f_plasma + f0_drude - f0_plasma + f_gamma, all J/m^2.

    total is assembled from that identity, never recomputed, so the
    decomposition is exact by construction; agreement with the directly
    summed Drude free energy is a property of the parts.
    """

    f_plasma: float
    f0_drude: float
    f0_plasma: float
    f_gamma: float
    total: float


@dataclass(frozen=True)
class EntropyAtZero:
    """Zero-temperature Drude entropy s0 = kB (zeta(3) + I1 + I2) / (16 pi a^2)."""

    i1: float
    i2: float
    c_bracket: float
    s0: float


def _bose(w: float) -> float:
    # 1/(e^w - 1); switches to the pure-underflow form before expm1 overflows
    if w > _OVERFLOW_W:
        return math.exp(-w)
    return 1.0 / math.expm1(w)


def _warn_outside_window(s: FilmState) -> None:
    if s.T > 0 and not asymptotic_window_ok(s):
        warnings.warn(
            "kB T exceeds 0.1 hbar c / (2a); low-temperature closed forms are "
            "outside their validity window here",
            stacklevel=3,
        )


def delta_f_plasma(s: FilmState, mat: Material) -> float:
    """Low-temperature thermal correction to the plasma free energy, J/m^2.

    -2 pi^2 (kB T)^4 / [15 hbar^3 c^2 omega_p (e^w - 1)]. Warns outside the
    kB T <= 0.1 hbar c / (2a) window; underflows to exact 0 for huge w.
    """
    if s.T < 0:
        raise ValueError("T must be >= 0")
    if s.T == 0.0:
        return 0.0
    _warn_outside_window(s)
    w = 2.0 * s.a * mat.omega_p / C
    kt = KB * s.T
    return -2.0 * math.pi**2 * kt**4 / (15.0 * HBAR**3 * C**2 * mat.omega_p) * _bose(w)


def delta_p_plasma(s: FilmState, mat: Material) -> float:
    """Low-temperature thermal correction to the plasma pressure, Pa.

    -4 pi^2 (kB T)^4 / (15 hbar^3 c^3) * e^w / (e^w - 1)^2, evaluated as
    e^{-w} / (1 - e^{-w})^2 which never overflows. Equals -d/da of
    delta_f_plasma.
    """
    if s.T < 0:
        raise ValueError("T must be >= 0")
    if s.T == 0.0:
        return 0.0
    _warn_outside_window(s)
    w = 2.0 * s.a * mat.omega_p / C
    b = math.exp(-w)
    kt = KB * s.T
    return -4.0 * math.pi**2 * kt**4 / (15.0 * HBAR**3 * C**3) * b / (1.0 - b) ** 2


def entropy_plasma_asymptotic(s: FilmState, mat: Material) -> float:
    """Low-temperature plasma entropy 8 pi^2 kB (kB T)^3 / [15 hbar^3 c^2
    omega_p (e^w - 1)], J/(m^2 K); equals -d/dT of delta_f_plasma, positive
    for T > 0 and -> 0 as T -> 0."""
    if s.T < 0:
        raise ValueError("T must be >= 0")
    if s.T == 0.0:
        return 0.0
    _warn_outside_window(s)
    w = 2.0 * s.a * mat.omega_p / C
    kt = KB * s.T
    return 8.0 * math.pi**2 * KB * kt**3 / (15.0 * HBAR**3 * C**2 * mat.omega_p) * _bose(w)


# ---------------------------------------------------------------------------
# zero-frequency integrals


def i1_closed(w: float) -> float:
    """TM zero-frequency integral, closed form -[Li3(e^-w) + w Li2(e^-w)]."""
    if w < 0:
        raise ValueError("w must be >= 0")
    z = math.exp(-w)
    return -(polylog(3, z) + w * polylog(2, z))


def i2_closed(w: float) -> float:
    """TE zero-frequency integral, first order in the reflection squared.

    -(w + 17 + 112/w + 432/w^2 + 960/w^3 + 960/w^4) e^-w
    + 4 [w K1(w) + 9 K2(w) + (30/w) K3(w)].
    Valid for w >= 0.5; warns below that (the expansion loses accuracy).
    """
    if w <= 0:
        raise ValueError("w must be > 0 (Bessel terms diverge at 0)")
    if w < 0.5:
        warnings.warn(
            f"i2_closed is a w >= 0.5 approximation; called at w = {w}",
            stacklevel=2,
        )
    poly = w + 17.0 + 112.0 / w + 432.0 / w**2 + 960.0 / w**3 + 960.0 / w**4
    bess = w * bessel_k(1, w) + 9.0 * bessel_k(2, w) + (30.0 / w) * bessel_k(3, w)
    return -poly * math.exp(-w) + 4.0 * bess


def i1_exact(w: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """TM zero-frequency integral by quadrature (exact reference for i1_closed)."""
    if w <= 0:
        raise ValueError("w must be > 0")
    return _phi_point(Kind.PLASMA, 0.0, "TM", 0.0, w, quad)


def i2_exact(w: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """TE zero-frequency integral by quadrature, without the first-order-in-r^2
    truncation behind i2_closed."""
    if w <= 0:
        raise ValueError("w must be > 0")
    return _phi_point(Kind.PLASMA, 0.0, "TE", 0.0, w, quad)


def f0_drude(s: FilmState) -> float:
    """Drude l = 0 half term, exactly -kB T zeta(3) / (16 pi a^2), J/m^2."""
    return -KB * s.T * ZETA3 / (16.0 * math.pi * s.a * s.a)


def f0_plasma(
    s: FilmState,
    mat: Material,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """Plasma l = 0 half term (kB T / 16 pi a^2) [I1 + I2], J/m^2.

    Uses the exact quadrature for both integrals; the closed-form route is
    i1_closed/i2_closed.
    """
    w = 2.0 * s.a * mat.omega_p / C
    if w == 0.0:
        raise ValueError("f0_plasma requires omega_p_tilde > 0")
    pref = KB * s.T / (16.0 * math.pi * s.a * s.a)
    return pref * (i1_exact(w, quad) + i2_exact(w, quad))


# ---------------------------------------------------------------------------
# relaxation remainder


def r_q_kernels(
    zeta_l: float,
    y: float,
    params: DimensionlessParams,
) -> tuple[float, float, float, float]:
    """First-order reflection kernels (R_TM, R_TE, Q_TM, Q_TE) at (zeta_l, y).

    R are the coefficients of -delta_l in the squared Drude reflection
    expansion about plasma; Q = w^2 / (2 s) - R with s = sqrt(y^2 + w^2).
    All four are positive on the physical domain y >= zeta_l > 0.
    """
    if not (y >= zeta_l > 0):
        raise ValueError("kernels are defined for y >= zeta_l > 0")
    w = params.omega_p_tilde
    z = zeta_l
    s = math.sqrt(y * y + w * w)
    half = w * w / (2.0 * s)
    d = w * w * y + z * z * y + z * z * s
    r_tm = (
        2.0 * w * w * z * z * y
        * (w * w + 2.0 * y * y - z * z)
        * (w * w * y + z * z * y - z * z * s)
        / (s * d**3)
    )
    r_te = 2.0 * w * w * y * (s - y) / (s * (s + y) ** 3)
    return r_tm, r_te, half - r_tm, half - r_te


def _a7_sum(params: DimensionlessParams, quad: QuadratureConfig) -> float:
    """Dimensionless sum_{l>=1} delta_l int_{zeta_l}^inf y [Q_TM/(e^s - r_TM^2)
    + Q_TE/(e^s - r_TE^2)] dy with plasma reflections; positive."""
    w = params.omega_p_tilde
    tau = params.tau
    g = params.gamma_tilde
    if g == 0.0:
        return 0.0
    drop0 = -math.log(quad.matsubara_tail_tol) + 8.0
    n_l = int(math.ceil(_umax_for(w, drop0) / tau)) + 1
    if n_l > quad.max_l:
        raise ConvergenceError(
            f"first-order sum needs ~{n_l} terms, exceeds max_l={quad.max_l}"
        )
    u, uw = _phi_rule(w, tau)
    zs = tau * np.arange(1, n_l + 1, dtype=np.float64)
    total = 0.0
    w2 = w * w
    for start in range(0, n_l, 2048):
        z = zs[start : start + 2048][:, None]
        y = z + u[None, :]
        s = np.sqrt(y * y + w2)
        z2 = z * z
        d = w2 * y + z2 * y + z2 * s
        r_tm_k = 2.0 * w2 * z2 * y * (w2 + 2.0 * y * y - z2) * (w2 * y + z2 * y - z2 * s) / (s * d**3)
        # s - y rewritten as w^2/(s + y): same formula, no cancellation
        r_te_k = 2.0 * w2 * w2 * y / (s * (s + y) ** 4)
        half = w2 / (2.0 * s)
        # plasma squared reflections, stable forms
        num = w2 * (y * s + y * y - z2) / (s + y)
        rtm2 = (num / d) ** 2
        rte2 = (w2 / ((s + y) ** 2)) ** 2
        e = np.exp(-s)
        kern = y * e * ((half - r_tm_k) / (1.0 - rtm2 * e) + (half - r_te_k) / (1.0 - rte2 * e))
        ints = kern @ uw
        total += float(np.sum(ints / zs[start : start + 2048]))
    return g * total


def f_gamma(
    mat: Material,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
    gamma: float | None = None,
) -> FGammaResult:
    """Relaxation part of the Drude free energy by two routes, J/m^2.

    exact: (kB T / 8 pi a^2) sum_{l>=1} [phi_Drude - phi_plasma]; first_order:
    the delta_l-linear kernel sum. gamma overrides the material's gamma(T)
    (rad/s), used to probe the delta_1 -> 0 limit.
    """
    if not s.T > 0:
        raise ValueError("f_gamma requires T > 0")
    p = dimensionless_params(mat, s)
    if gamma is not None:
        if gamma < 0:
            raise ValueError("gamma must be >= 0")
        p = DimensionlessParams(p.omega_p_tilde, p.tau, 2.0 * s.a * gamma / C)
    pref = KB * s.T / (8.0 * math.pi * s.a * s.a)
    diff, _ = _l1_difference_sum(p, quad)
    exact = pref * diff
    first = -pref * _a7_sum(p, quad)
    return FGammaResult(exact=exact, first_order=first, difference=first - exact)


def x_bound(s: FilmState, mat: Material) -> float:
    """Analytic upper bound X(a, T) on |f_gamma|, J/m^2.

    hbar gamma(T) omega_p^2 / (4 pi^2 c^2) * (C1 ln(tau) - C2) with
    C1 = ln(1 - e^{-w/sqrt 2}) and C2 = sum (2 ln n - ln 2)/(2n) e^{-n w/sqrt 2};
    the bracket is positive for small tau. Warns when the ln-linearization
    behind the bound no longer yields a positive bracket.
    """
    if not s.T > 0:
        raise ValueError("x_bound requires T > 0")
    p = dimensionless_params(mat, s)
    w = p.omega_p_tilde
    if w == 0.0:
        raise ValueError("x_bound requires omega_p_tilde > 0")
    q = w / math.sqrt(2.0)
    c1 = math.log(-math.expm1(-q))
    c2 = 0.0
    n = 1
    ln2 = math.log(2.0)
    while True:
        t = (2.0 * math.log(n) - ln2) / (2.0 * n) * math.exp(-n * q)
        c2 += t
        # coefficient decreasing in n once past e; geometric tail bound
        if n > 3 and (2.0 * math.log(n) + ln2) / (2.0 * n) * math.exp(-n * q) / -math.expm1(-q) < 1e-12:
            break
        n += 1
        if n > 200_000:
            raise ConvergenceError("C2 series did not reach the 1e-12 tail")
    bracket = c1 * math.log(p.tau) - c2
    if bracket <= 0:
        warnings.warn(
            f"tau = {p.tau:.3g} is outside the small-tau regime; X(a,T) is not "
            "a positive bound here",
            stacklevel=2,
        )
    return HBAR * gamma_of_T(mat, s.T) * mat.omega_p**2 / (4.0 * math.pi**2 * C**2) * bracket


# ---------------------------------------------------------------------------
# zero-temperature Drude entropy and the decomposition


def entropy_drude_zero(s: FilmState, mat: Material) -> EntropyAtZero:
    """Drude entropy at T = 0 from the closed forms, J/(m^2 K).

    s0 = kB [zeta(3) + I1 + I2] / (16 pi a^2) > 0: the Drude film violates
    the Nernst theorem by a finite residual entropy.
    """
    w = 2.0 * s.a * mat.omega_p / C
    i1 = i1_closed(w)
    i2 = i2_closed(w)
    c = ZETA3 + i1 + i2
    if c <= 0:
        warnings.warn(f"bracket zeta(3) + I1 + I2 = {c} not positive at w = {w}", stacklevel=2)
    return EntropyAtZero(i1=i1, i2=i2, c_bracket=c, s0=KB * c / (16.0 * math.pi * s.a * s.a))


def entropy_drude_zero_exact(
    s: FilmState,
    mat: Material,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> EntropyAtZero:
    """entropy_drude_zero with I1, I2 from quadrature instead of closed forms;
    reported alongside the closed-form value to expose the I2 truncation error."""
    w = 2.0 * s.a * mat.omega_p / C
    i1 = i1_exact(w, quad)
    i2 = i2_exact(w, quad)
    c = ZETA3 + i1 + i2
    return EntropyAtZero(i1=i1, i2=i2, c_bracket=c, s0=KB * c / (16.0 * math.pi * s.a * s.a))


def drude_decompose(
    s: FilmState,
    mat: Material,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> DrudeDecomposition:
    """Split the Drude free energy as f_plasma + f0_drude - f0_plasma + f_gamma.

    The parts come from independent routes (full plasma sum, closed form,
    zero-frequency quadrature, difference sum), so comparing total against
    the directly summed Drude free energy is a genuine cross-check.
    """
    if not s.T > 0:
        raise ValueError("drude_decompose requires T > 0")
    fp = free_energy(DielectricModel(Kind.PLASMA, mat), s, quad).value
    f0d = f0_drude(s)
    f0p = f0_plasma(s, mat, quad)
    fg = f_gamma(mat, s, quad).exact
    if fg > 0:
        warnings.warn(f"f_gamma = {fg} > 0; expected <= 0 for gamma > 0", stacklevel=2)
    return DrudeDecomposition(
        f_plasma=fp,
        f0_drude=f0d,
        f0_plasma=f0p,
        f_gamma=fg,
        total=fp + f0d - f0p + fg,
    )
