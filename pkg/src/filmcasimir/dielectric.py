"""Dielectric response at imaginary Matsubara frequencies and material data.

Two permittivity models (lossless plasma, dissipative Drude with a
temperature-dependent relaxation rate), the piecewise power-law relaxation
model, and ingestion of human-editable materials files.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .constants import C, HBAR, KB

MATERIALS_ENV_VAR = "FILMCASIMIR_MATERIALS"


class Kind(enum.Enum):
    PLASMA = "plasma"
    DRUDE = "drude"


@dataclass(frozen=True)
class Material:
    """Metal parameters for the dielectric models.

    omega_p : plasma frequency, rad/s
    gamma_ref : relaxation rate at the reference temperature, rad/s
    T_ref : reference temperature for the linear relaxation branch, K
    T_debye : Debye temperature, K
    beta_low : residual low-temperature exponent of gamma(T), must be > 1
    """

    name: str
    omega_p: float
    gamma_ref: float
    T_ref: float = 300.0
    T_debye: float = 165.0
    beta_low: float = 2.0
    comment: str = ""

    def __post_init__(self) -> None:
        if not self.omega_p > 0:
            raise ValueError("omega_p must be positive")
        if self.gamma_ref < 0:
            raise ValueError("gamma_ref must be non-negative")
        if not self.T_ref > 0:
            raise ValueError("T_ref must be positive")
        if not self.T_debye > 0:
            raise ValueError("T_debye must be positive")
        if not self.beta_low > 1:
            raise ValueError("beta_low must exceed 1")


@dataclass(frozen=True)
class DielectricModel:
    kind: Kind
    material: Material


@dataclass(frozen=True)
class FilmState:
    """Physical configuration: film thickness a (m) and temperature T (K)."""

    a: float
    T: float

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("film thickness must be positive")
        if self.T < 0:
            raise ValueError("temperature must be non-negative")

    @property
    def omega_c(self) -> float:
        """Characteristic frequency c/(2a), rad/s."""
        return C / (2.0 * self.a)


@dataclass(frozen=True)
class DimensionlessParams:
    """omega_p_tilde = 2 a omega_p / c, tau = 4 pi kB T a / (hbar c),
    gamma_tilde = gamma(T) 2 a / c."""

    omega_p_tilde: float
    tau: float
    gamma_tilde: float


def matsubara_xi(T: float, l: int) -> float:
    """Matsubara frequency xi_l = 2 pi kB T l / hbar, rad/s."""
    if not T > 0:
        raise ValueError("matsubara_xi requires T > 0; use the T = 0 integral path")
    if l < 0:
        raise ValueError("Matsubara index must be >= 0")
    return 2.0 * math.pi * KB * T * l / HBAR


def gamma_of_T(mat: Material, T: float, t_x: float | None = None) -> float:
    """Relaxation rate gamma(T), rad/s.

    Piecewise power law: linear in T above T_debye/4 (anchored at
    gamma_ref, T_ref), ~T^5 between t_x and T_debye/4, ~T^beta_low below
    t_x (default t_x = T_debye/20). Branches are joined continuously; only
    the limiting behaviors carry physical weight, not the joins.
    """
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if T == 0.0:
        return 0.0
    t_join = mat.T_debye / 4.0
    if t_x is None:
        t_x = mat.T_debye / 20.0
    if T >= t_join:
        return mat.gamma_ref * T / mat.T_ref
    gamma_join = mat.gamma_ref * t_join / mat.T_ref
    if T > t_x:
        return gamma_join * (T / t_join) ** 5
    gamma_x = gamma_join * (t_x / t_join) ** 5
    return gamma_x * (T / t_x) ** mat.beta_low


def epsilon_plasma(mat: Material, xi: float) -> float:
    """Plasma-model permittivity 1 + omega_p^2 / xi^2 at imaginary frequency."""
    if not xi > 0:
        raise ValueError("epsilon is singular at xi = 0; callers use analytic limits")
    r = mat.omega_p / xi
    return 1.0 + r * r


def epsilon_drude(mat: Material, T: float, xi: float) -> float:
    """Drude-model permittivity 1 + omega_p^2 / (xi (xi + gamma(T)))."""
    if not xi > 0:
        raise ValueError("epsilon is singular at xi = 0; callers use analytic limits")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    return 1.0 + mat.omega_p**2 / (xi * (xi + gamma_of_T(mat, T)))


def delta_l(mat: Material, T: float, l: int) -> float:
    """Relaxation smallness parameter gamma(T)/xi_l for l >= 1."""
    if l < 1:
        raise ValueError("delta_l is defined for l >= 1")
    return gamma_of_T(mat, T) / matsubara_xi(T, l)


def dimensionless_params(mat: Material, s: FilmState) -> DimensionlessParams:
    return DimensionlessParams(
        omega_p_tilde=2.0 * s.a * mat.omega_p / C,
        tau=4.0 * math.pi * KB * s.T * s.a / (HBAR * C),
        gamma_tilde=gamma_of_T(mat, s.T) * 2.0 * s.a / C,
    )


def asymptotic_window_ok(s: FilmState) -> bool:
    """True when kB T <= 0.1 hbar c / (2a), the validity window of the
    low-temperature closed forms."""
    return KB * s.T <= 0.1 * HBAR * s.omega_c


# ---------------------------------------------------------------------------
# materials files: plain "key = value" lines, '#' comments

_FIELD_MAP = {
    "name": ("name", str),
    "omega_p_rad_s": ("omega_p", float),
    "gamma_ref_rad_s": ("gamma_ref", float),
    "T_ref_K": ("T_ref", float),
    "T_debye_K": ("T_debye", float),
    "beta_low": ("beta_low", float),
    "comment": ("comment", str),
}

_REQUIRED_KEYS = ("name", "omega_p_rad_s", "gamma_ref_rad_s", "T_ref_K", "T_debye_K")


def parse_material(text: str) -> Material:
    """Parse a materials document into a Material."""
    kwargs: dict[str, object] = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"materials file line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_MAP:
            raise ValueError(f"materials file line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ValueError(f"materials file line {lineno}: duplicate key {key!r}")
        seen.add(key)
        attr, cast = _FIELD_MAP[key]
        try:
            kwargs[attr] = cast(value)
        except ValueError as exc:
            raise ValueError(f"materials file line {lineno}: bad value for {key}: {exc}")
    missing = [k for k in _REQUIRED_KEYS if _FIELD_MAP[k][0] not in kwargs]
    if missing:
        raise ValueError(f"materials file missing required keys: {', '.join(missing)}")
    return Material(**kwargs)  # type: ignore[arg-type]


def serialize_material(mat: Material) -> str:
    lines = [
        f"name = {mat.name}",
        f"omega_p_rad_s = {mat.omega_p!r}",
        f"gamma_ref_rad_s = {mat.gamma_ref!r}",
        f"T_ref_K = {mat.T_ref!r}",
        f"T_debye_K = {mat.T_debye!r}",
        f"beta_low = {mat.beta_low!r}",
    ]
    if mat.comment:
        lines.append(f"comment = {mat.comment}")
    return "\n".join(lines) + "\n"


def _search_dirs() -> list[Path]:
    dirs: list[Path] = []
    env = os.environ.get(MATERIALS_ENV_VAR, "")
    for entry in env.split(os.pathsep):
        if entry:
            dirs.append(Path(entry))
    return dirs


def _packaged_materials() -> resources.abc.Traversable:
    return resources.files(__package__) / "materials"


def load_material(name_or_path: str) -> Material:
    """Resolve a material by explicit path, search-path lookup
    (FILMCASIMIR_MATERIALS, os.pathsep separated), then the packaged set."""
    p = Path(name_or_path)
    if p.is_file():
        return parse_material(p.read_text())
    for d in _search_dirs():
        candidate = d / name_or_path
        if candidate.is_file():
            return parse_material(candidate.read_text())
    packaged = _packaged_materials() / name_or_path
    if packaged.is_file():
        return parse_material(packaged.read_text())
    raise FileNotFoundError(
        f"material {name_or_path!r} not found (searched {MATERIALS_ENV_VAR} and packaged set)"
    )


def list_materials() -> list[str]:
    """Names available without an explicit path, search dirs first."""
    names: list[str] = []
    for d in _search_dirs():
        if d.is_dir():
            names.extend(sorted(f.name for f in d.iterdir() if f.is_file()))
    names.extend(sorted(f.name for f in _packaged_materials().iterdir() if f.is_file()))
    out: list[str] = []
    for n in names:
        if n not in out:
            out.append(n)
    return out
