"""Dimensionless Lifshitz machinery for a free-standing film.

Reflection coefficients at imaginary frequency, the semi-infinite phi
integrals, the Matsubara free-energy sum and the zero-temperature energy
integral, for both dielectric models.

All integrals use fixed Gauss-Legendre panel rules (geometric panel widths
in the decay variable), evaluated at two resolutions when an error estimate
is contractually needed. Rules are deterministic, so identical inputs give
bit-identical results.
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
    dimensionless_params,
)
from .specialfn import ZETA3


class ConvergenceError(RuntimeError):
    """A quadrature or Matsubara sum failed to reach its tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    matsubara_tail_tol: float = 1e-12
    max_l: int = 10**6

    def __post_init__(self) -> None:
        for name in ("rel_tol", "abs_tol", "matsubara_tail_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_l < 1:
            raise ValueError("max_l must be >= 1")


DEFAULT_QUAD = QuadratureConfig()


@dataclass(frozen=True)
class ReflectionPair:
    r_tm: float
    r_te: float


@dataclass(frozen=True)
class FreeEnergyResult:
    value: float          # J/m^2
    model: Kind
    n_matsubara: int
    err_estimate: float   # J/m^2

    def __post_init__(self) -> None:
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be non-negative")


# ---------------------------------------------------------------------------
# quadrature rule in the decay variable u = y - x

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _u_rule(h0: float, umax: float, n: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, umax], panel widths doubling from h0."""
    xg, wg = _leggauss(n)
    edges = [0.0]
    width = h0
    while edges[-1] + width < umax:
        edges.append(edges[-1] + width)
        width *= 2.0
    edges.append(umax)
    e = np.asarray(edges)
    lo, hi = e[:-1, None], e[1:, None]
    u = (0.5 * (hi - lo) * xg[None, :] + 0.5 * (hi + lo)).ravel()
    w = (0.5 * (hi - lo) * wg[None, :]).ravel()
    return u, w


def _umax_for(w: float, drop: float) -> float:
    # past u_max the exponent has fallen by >= drop relative to e^{-w}
    return math.sqrt((w + drop) ** 2 - w * w)


def _integrand_grid(
    zc: np.ndarray,
    u: np.ndarray,
    wq,
    *,
    kind: Kind,
    gamma_tilde: float,
    want_tm: bool,
    want_te: bool,
    complex_path: bool,
) -> np.ndarray:
    """(len(zc) x len(u)) grid of y * ln(1 - r^2 e^{-s}) at y = z + u."""
    zcol = zc[:, None]
    y = zcol + u[None, :]
    if kind is Kind.PLASMA or gamma_tilde == 0.0:
        s = np.sqrt(y * y + wq * wq)
        if want_tm:
            # (eps y - s)/(eps y + s) without forming eps: cancellation-free
            num = wq * wq * (y * s + y * y - zcol * zcol) / (s + y)
            den = wq * wq * y + zcol * zcol * (y + s)
            with np.errstate(invalid="ignore"):
                r_tm = np.where(den != 0, num / np.where(den != 0, den, 1.0), 0.0)
        if want_te:
            r_te = wq * wq / ((s + y) * (s + y))
    else:
        g = gamma_tilde
        zero_rows = zc == 0
        zsafe = np.where(zero_rows[:, None], 1.0, zcol)
        eps = 1.0 + wq * wq / (zsafe * (zsafe + g))
        c2 = wq * wq * zsafe / (zsafe + g)
        c2 = np.where(zero_rows[:, None], 0.0, c2)
        s = np.sqrt(y * y + c2)
        if want_tm:
            r_tm = (eps - 1.0) * ((eps + 1.0) * y * y - zsafe * zsafe) / (eps * y + s) ** 2
            r_tm = np.where(zero_rows[:, None], 1.0, r_tm)
        if want_te:
            r_te = c2 / ((s + y) * (s + y))

    decay = np.exp(-s)
    f = np.zeros_like(y)
    if complex_path:
        if want_tm:
            f = f + np.log(1.0 - r_tm * r_tm * decay)
        if want_te:
            f = f + np.log(1.0 - r_te * r_te * decay)
    else:
        if want_tm:
            f = f + np.log1p(-r_tm * r_tm * decay)
        if want_te:
            f = f + np.log1p(-r_te * r_te * decay)
    return y * f


def _phi_lattice(
    z,
    w: float,
    rule: tuple[np.ndarray, np.ndarray],
    *,
    kind: Kind = Kind.PLASMA,
    gamma_tilde: float = 0.0,
    pol: str = "both",
    dtype=np.float64,
    chunk: int = 2048,
) -> np.ndarray:
    """phi_pol(z) for an array of dimensionless frequencies z >= 0.

    phi(x) = int_x^inf y ln(1 - r^2 e^{-s}) dy with s^2 = y^2 + (eps-1) x^2.
    Complex z is accepted (plasma only) for evaluation slightly off the
    real axis; the contour is y = z + u with u real.
    """
    z_arr = np.asarray(z)
    complex_path = np.iscomplexobj(z_arr)
    work = np.complex128 if complex_path else dtype
    u, uw = rule
    u = u.astype(work, copy=False)
    uw = uw.astype(work, copy=False)
    wq = work(w) if not complex_path else complex(w)
    out = np.empty(z_arr.shape[0], dtype=work)
    if pol not in ("both", "TM", "TE"):
        raise ValueError(f"pol must be 'TM', 'TE' or 'both', got {pol!r}")
    want_tm = pol in ("both", "TM")
    want_te = pol in ("both", "TE")

    for start in range(0, z_arr.shape[0], chunk):
        zc = z_arr[start : start + chunk].astype(work)
        grid = _integrand_grid(
            zc, u, wq, kind=kind, gamma_tilde=gamma_tilde,
            want_tm=want_tm, want_te=want_te, complex_path=complex_path,
        )
        out[start : start + chunk] = grid @ uw
    return out


def _lattice_contraction(
    z: np.ndarray,
    coeffs: np.ndarray,
    w: float,
    rule: tuple[np.ndarray, np.ndarray],
    *,
    kind: Kind = Kind.PLASMA,
    gamma_tilde: float = 0.0,
    dtype=np.float64,
    chunk: int = 2048,
) -> float:
    """sum_i coeffs[i] * phi(z[i]) with the lattice contraction done before
    the quadrature one.

    Cancelling combinations of phi at nearby z (trapezoid defects, finite
    differences) lose their leading digits; performing the z-sum at integrand
    level keeps the roundoff at the scale of the combined residual rather
    than of phi itself."""
    u, uw = rule
    u = u.astype(dtype, copy=False)
    uw = uw.astype(dtype, copy=False)
    wq = dtype(w)
    cs = np.asarray(coeffs, dtype=dtype)
    acc = np.zeros(u.shape[0], dtype=dtype)
    for start in range(0, z.shape[0], chunk):
        zc = z[start : start + chunk].astype(dtype)
        grid = _integrand_grid(
            zc, u, wq, kind=kind, gamma_tilde=gamma_tilde,
            want_tm=True, want_te=True, complex_path=False,
        )
        acc += cs[start : start + chunk] @ grid
    return float(acc @ uw)


def _phi_rule(w: float, scale: float, drop: float = 40.0, n: int = 32):
    h0 = 0.5 * min(1.0, scale) if scale > 0 else 0.25
    return _u_rule(h0, _umax_for(w, drop), n)


# ---------------------------------------------------------------------------
# public operations


def reflection(
    model: DielectricModel,
    zeta_l: float,
    y: float,
    params: DimensionlessParams,
) -> ReflectionPair:
    """TM/TE reflection coefficients at dimensionless frequency zeta_l and
    transverse variable y >= zeta_l."""
    if zeta_l < 0 or y < zeta_l:
        raise ValueError("require y >= zeta_l >= 0")
    w = params.omega_p_tilde
    if w == 0.0:
        return ReflectionPair(0.0, 0.0)
    if model.kind is Kind.PLASMA:
        # w^2/(s+y)^2 written through v = y/w: structurally <= 1, no overflow
        v = y / w
        r_te = (1.0 / (math.hypot(1.0, v) + v)) ** 2
        if zeta_l == 0.0:
            return ReflectionPair(1.0, r_te)
        s = math.sqrt(y * y + w * w)
        # one factor of y cleared so subnormal y keeps full precision
        t = (y - zeta_l) * (y + zeta_l) / y
        den = w * w + zeta_l * (zeta_l / y) * (y + s)
        return ReflectionPair(w * w * (s + t) / ((s + y) * den), r_te)
    # Drude
    if zeta_l == 0.0:
        return ReflectionPair(1.0, 0.0)
    g = params.gamma_tilde
    # sqrt of c^2 = w^2 zeta/(zeta + g), built from the bounded ratio
    rc = w * math.sqrt(zeta_l / (zeta_l + g))
    q = zeta_l * (zeta_l + g) / (w * w)
    if q < 1.0:
        # eps = 1 + 1/q overflows for tiny zeta; same ratio with q cleared
        # and y^2 factored out so subnormal y cannot underflow the division
        zr = zeta_l / y
        sr = math.hypot(1.0, rc / y)
        r_tm = (2.0 * q + 1.0 - q * zr * zr) / ((q + 1.0) + q * sr) ** 2
    else:
        eps = 1.0 + 1.0 / q
        s = math.hypot(y, rc)
        r_tm = (eps - 1.0) * ((eps + 1.0) * y * y - zeta_l * zeta_l) / (eps * y + s) ** 2
    v = y / rc
    r_te = (1.0 / (math.hypot(1.0, v) + v)) ** 2
    return ReflectionPair(r_tm, r_te)


def _phi_point(
    kind: Kind,
    gamma_tilde: float,
    pol: str,
    x: float,
    w: float,
    quad: QuadratureConfig,
) -> float:
    """phi on successively refined panel rules until two levels agree."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if w == 0.0:
        return 0.0
    scale = min(1.0, x) if x > 0 else 1.0
    # at x = 0 the Drude integrand behaves like y ln y near the origin;
    # a panel mesh graded down to h0 * 2^-24 resolves the log corner
    if kind is Kind.DRUDE and gamma_tilde > 0.0 and x == 0.0:
        scale *= 2.0**-24
    prev = None
    err = math.inf
    for level in range(4):
        rule = _u_rule(0.5 * scale / 2**level, _umax_for(w, 40.0 + 8.0 * level), 32 + 8 * level)
        val = float(
            _phi_lattice(
                np.array([x]), w, rule, kind=kind, gamma_tilde=gamma_tilde, pol=pol
            )[0]
        )
        if prev is not None:
            err = abs(val - prev)
            if err <= max(quad.abs_tol, quad.rel_tol * abs(val)):
                return val
        prev = val
    raise ConvergenceError(
        f"phi(pol={pol}, x={x}) did not converge: error estimate {err:.3e}"
    )


def phi_alpha(
    model: DielectricModel,
    pol: str,
    x: float,
    params: DimensionlessParams,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """Single-polarization phi integral at dimensionless frequency x >= 0.

    Evaluated on successively refined panel rules until two levels agree to
    quad tolerances; raises ConvergenceError (with the achieved estimate)
    otherwise. Always <= 0.
    """
    return _phi_point(model.kind, params.gamma_tilde, pol, x, params.omega_p_tilde, quad)


def _matsubara_sum(
    kind: Kind,
    params: DimensionlessParams,
    quad: QuadratureConfig,
    dtype=np.float64,
) -> tuple[float, int, float]:
    """Primed Matsubara sum of phi over l >= 0 (dimensionless).

    Returns (sum, n_terms, tail_estimate). The l = 0 half term uses the
    analytic zero-frequency limits: TM reflection -> 1 for both models,
    TE -> its plasma form for the plasma model and -> 0 for the Drude model
    (the Drude l = 0 integral is exactly -zeta(3))."""
    w = params.omega_p_tilde
    tau = params.tau
    drop0 = -math.log(quad.matsubara_tail_tol) + 8.0
    zeta_max = _umax_for(w, drop0)
    n_l = int(math.ceil(zeta_max / tau)) + 1
    if n_l > quad.max_l:
        raise ConvergenceError(
            f"Matsubara sum needs ~{n_l} terms, exceeds max_l={quad.max_l}"
        )
    rule = _phi_rule(w, tau)
    if kind is Kind.DRUDE:
        half0 = -0.5 * ZETA3
    else:
        half0 = 0.5 * float(_phi_lattice(np.array([0.0]), w, rule, kind=Kind.PLASMA)[0])

    total = half0
    tail = math.inf
    l_start = 1
    for _ in range(4):
        zs = tau * np.arange(l_start, n_l + 1, dtype=np.float64)
        phis = _phi_lattice(
            zs.astype(dtype), w, rule, kind=kind,
            gamma_tilde=params.gamma_tilde, dtype=dtype,
        )
        total += float(np.sum(phis))
        # geometric fit of the last terms bounds the remainder
        t1, t0 = abs(float(phis[-1])), abs(float(phis[-2]))
        if t0 > 0 and t1 < t0:
            ratio = t1 / t0
            tail = t1 * ratio / (1.0 - ratio)
        else:
            tail = t1
        if tail <= quad.matsubara_tail_tol * max(abs(total), quad.abs_tol):
            break
        l_start = n_l + 1
        n_l = int(math.ceil(n_l * 1.4))
        if n_l > quad.max_l:
            raise ConvergenceError(
                f"Matsubara tail not converged by max_l={quad.max_l}; "
                f"tail estimate {tail:.3e}"
            )
    return total, n_l, tail


def _l1_difference_sum(
    params: DimensionlessParams,
    quad: QuadratureConfig,
) -> tuple[float, int]:
    """Sum over l >= 1 of [phi_Drude(zeta_l) - phi_plasma(zeta_l)], dimensionless.

    Both models are evaluated on the same panel rule so that quadrature error
    largely cancels in the difference. Terms decay at least as fast as phi
    itself, so the plasma truncation bound applies."""
    w = params.omega_p_tilde
    tau = params.tau
    drop0 = -math.log(quad.matsubara_tail_tol) + 8.0
    n_l = int(math.ceil(_umax_for(w, drop0) / tau)) + 1
    if n_l > quad.max_l:
        raise ConvergenceError(
            f"difference sum needs ~{n_l} terms, exceeds max_l={quad.max_l}"
        )
    rule = _phi_rule(w, tau)
    zs = tau * np.arange(1, n_l + 1, dtype=np.float64)
    phis_d = _phi_lattice(zs, w, rule, kind=Kind.DRUDE, gamma_tilde=params.gamma_tilde)
    phis_p = _phi_lattice(zs, w, rule, kind=Kind.PLASMA)
    return float(np.sum(phis_d - phis_p)), n_l


def free_energy(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> FreeEnergyResult:
    """Casimir free energy per unit area of the film, J/m^2.

    (kB T / 8 pi a^2) * primed-sum over Matsubara indices of
    [phi_TM(zeta_l) + phi_TE(zeta_l)], truncated when a geometric fit of
    the final terms bounds the tail below matsubara_tail_tol * |sum|.
    """
    if not s.T > 0:
        raise ValueError("free_energy requires T > 0; see zero_T_energy")
    params = dimensionless_params(model.material, s)
    pref = KB * s.T / (8.0 * math.pi * s.a * s.a)
    if params.omega_p_tilde == 0.0:
        return FreeEnergyResult(0.0, model.kind, 0, 0.0)
    total, n_l, tail = _matsubara_sum(model.kind, params, quad)
    value = pref * total
    if value > 0:
        warnings.warn(
            f"free energy came out positive ({value:.3e} J/m^2); "
            "outside the tested physical regime",
            stacklevel=2,
        )
    # rule noise is ~1e-13 relative per phi; tail adds directly
    err = pref * (tail + 1e-13 * abs(total) * math.sqrt(max(n_l, 1)))
    return FreeEnergyResult(value, model.kind, n_l, err)


def zero_T_energy(
    model: DielectricModel,
    s: FilmState,
    quad: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """Casimir energy per unit area at T = 0, J/m^2.

    (hbar c / 32 pi^2 a^3) * int_0^inf phi(zeta) d zeta. The relaxation
    rate vanishes at T = 0, so both dielectric models give the same value;
    the model argument is accepted for interface symmetry.
    """
    params = dimensionless_params(model.material, FilmState(s.a, 0.0))
    w = params.omega_p_tilde
    if w == 0.0:
        return 0.0
    pref = HBAR * C / (32.0 * math.pi**2 * s.a**3)
    zmax = _umax_for(w, 40.0)
    prev = None
    err = math.inf
    for level in range(4):
        zn, zw = _u_rule(0.25 / 2**level, zmax, 32 + 8 * level)
        rule = _u_rule(0.25 / 2**level, _umax_for(w, 42.0 + 6 * level), 32 + 8 * level)
        phis = _phi_lattice(zn, w, rule, kind=Kind.PLASMA)
        val = float(phis @ zw)
        if prev is not None:
            err = abs(val - prev)
            if err <= max(quad.abs_tol, quad.rel_tol * abs(val)):
                return pref * val
        prev = val
    raise ConvergenceError(
        f"zero_T_energy quadrature did not converge: error estimate {err:.3e}"
    )
