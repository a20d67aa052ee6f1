"""Command line interface: single points, sweeps, comparison reports.

Emits long-format tables (one row per a, T, model combination) as CSV or
JSON. Configuration precedence: command-line flags override config-file
entries, which override built-in defaults. Exit codes: 0 success, 2 bad
configuration, 3 material not resolvable, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR, KB
from .dielectric import (
    DielectricModel,
    FilmState,
    Kind,
    Material,
    dimensionless_params,
    gamma_of_T,
    list_materials,
    load_material,
)
from .lifshitz_core import (
    ConvergenceError,
    DEFAULT_QUAD,
    QuadratureConfig,
    free_energy,
    zero_T_energy,
)
from .specialfn import ZETA3
from .thermo import (
    DEFAULT_DIFF,
    DiffConfig,
    _entropy_impl,
    _pressure_impl,
    _richardson_derivative,
    _thermal_correction_impl,
)
from . import asymptotics as asy

SCHEMA_ID = "filmcasimir.result.v1"

_OUTPUT_CHOICES = (
    "free_energy",
    "pressure",
    "entropy",
    "decomposition",
    "asymptotics",
    "bound_check",
)


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """start:stop:scale:count axis specification, scale in {linear, log}."""

    start: float
    stop: float
    scale: str
    count: int

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.count)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class RunConfig:
    command: str
    material: str | None
    model: str
    a: SweepSpec
    T: SweepSpec
    outputs: tuple[str, ...]
    format: str
    rel_tol: float | None
    max_l: int | None
    diff_step: float | None
    diff_levels: int | None
    out: str | None


def validate_window(s: FilmState) -> tuple[bool, str]:
    """Low-temperature closed-form validity annotation for one state.

    Inside means kB T <= 0.1 hbar c / (2a); purely informational, nothing
    is blocked outside the window.
    """
    limit_t = 0.1 * HBAR * C / (2.0 * s.a * KB)
    if s.T == 0.0 or KB * s.T <= 0.1 * HBAR * C / (2.0 * s.a):
        return True, (
            f"inside asymptotic window (T = {s.T:g} K <= {limit_t:.4g} K "
            f"for a = {s.a:g} m)"
        )
    return False, (
        f"outside asymptotic window (T = {s.T:g} K > {limit_t:.4g} K "
        f"for a = {s.a:g} m)"
    )


# ---------------------------------------------------------------------------
# configuration plumbing


def _parse_scalar_axis(text: str, name: str) -> SweepSpec:
    try:
        v = float(text)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a number, got {text!r}") from exc
    return SweepSpec(v, v, "linear", 1)


def _parse_sweep(text: str, name: str) -> SweepSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(
            f"{name} must look like start:stop:linear|log:count, got {text!r}"
        )
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"cannot parse {name} {text!r}: {exc}") from exc
    scale = parts[2]
    if scale not in ("linear", "log"):
        raise ConfigError(f"{name} scale must be linear or log, got {scale!r}")
    if count < 1:
        raise ConfigError(f"{name} count must be >= 1")
    if count > 1 and not stop > start:
        raise ConfigError(f"{name} must be increasing (start < stop)")
    if scale == "log" and start <= 0:
        raise ConfigError(f"log {name} requires start > 0")
    return SweepSpec(start, stop, scale, count)


def _parse_outputs(text: str) -> tuple[str, ...]:
    items = tuple(p.strip() for p in text.split(",") if p.strip())
    if not items:
        raise ConfigError("outputs must name at least one quantity")
    bad = [o for o in items if o not in _OUTPUT_CHOICES]
    if bad:
        raise ConfigError(
            f"unknown outputs {bad}; choose from {', '.join(_OUTPUT_CHOICES)}"
        )
    return items


_CONFIG_KEYS = (
    "material",
    "model",
    "a",
    "T",
    "a_sweep",
    "T_sweep",
    "outputs",
    "format",
    "rel_tol",
    "max_l",
    "diff_step",
    "diff_levels",
    "out",
)


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    entries: dict[str, str] = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{i}: expected key = value, got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{i}: unknown key {key!r}")
        entries[key] = value
    return entries


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_entries: dict[str, str] = {}
    if getattr(args, "config", None):
        file_entries = _read_config_file(args.config)

    def pick(flag_name: str, file_key: str) -> str | None:
        v = getattr(args, flag_name, None)
        if v is not None:
            return str(v)
        return file_entries.get(file_key)

    command = args.command
    material = pick("material", "material")
    model = pick("model", "model") or "plasma"
    if model not in ("plasma", "drude", "both"):
        raise ConfigError(f"model must be plasma, drude or both, got {model!r}")

    a_scalar, a_sweep = pick("a", "a"), pick("a_sweep", "a_sweep")
    t_scalar, t_sweep = pick("T", "T"), pick("T_sweep", "T_sweep")
    if a_scalar is not None and a_sweep is not None:
        raise ConfigError("give --a or --a-sweep, not both")
    if t_scalar is not None and t_sweep is not None:
        raise ConfigError("give --T or --T-sweep, not both")
    if command == "compute" and (a_sweep is not None or t_sweep is not None):
        raise ConfigError("compute takes scalar --a and --T; use sweep for axes")

    needs_grid = command in ("compute", "sweep", "compare-asymptotics", "decompose", "bound-check")
    if needs_grid:
        if material is None:
            raise ConfigError("--material is required")
        if a_scalar is None and a_sweep is None:
            raise ConfigError("film thickness missing: give --a or --a-sweep")
        if t_scalar is None and t_sweep is None:
            raise ConfigError("temperature missing: give --T or --T-sweep")
        a_spec = (
            _parse_sweep(a_sweep, "a_sweep") if a_sweep is not None
            else _parse_scalar_axis(a_scalar, "a")
        )
        t_spec = (
            _parse_sweep(t_sweep, "T_sweep") if t_sweep is not None
            else _parse_scalar_axis(t_scalar, "T")
        )
        if a_spec.start <= 0:
            raise ConfigError("film thickness must be positive")
        if t_spec.start < 0:
            raise ConfigError("temperature must be >= 0")
    else:
        a_spec = SweepSpec(0.0, 0.0, "linear", 1)
        t_spec = SweepSpec(0.0, 0.0, "linear", 1)

    outputs_text = pick("outputs", "outputs") or "free_energy,pressure,entropy"
    outputs = _parse_outputs(outputs_text)

    fmt = pick("format", "format") or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")

    def pick_num(flag_name: str, file_key: str, conv, label: str):
        v = pick(flag_name, file_key)
        if v is None:
            return None
        try:
            return conv(v)
        except ValueError as exc:
            raise ConfigError(f"{label} must be a number, got {v!r}") from exc

    rel_tol = pick_num("rel_tol", "rel_tol", float, "rel-tol")
    if rel_tol is not None and not 0 < rel_tol < 1:
        raise ConfigError("rel-tol must lie in (0, 1)")
    max_l = pick_num("max_l", "max_l", int, "max-l")
    if max_l is not None and max_l < 1:
        raise ConfigError("max-l must be >= 1")
    diff_step = pick_num("diff_step", "diff_step", float, "diff-step")
    if diff_step is not None and not 0 < diff_step < 0.5:
        raise ConfigError("diff-step must lie in (0, 0.5)")
    diff_levels = pick_num("diff_levels", "diff_levels", int, "diff-levels")
    if diff_levels is not None and not 1 <= diff_levels <= 8:
        raise ConfigError("diff-levels must lie in 1..8")

    return RunConfig(
        command=command,
        material=material,
        model=model,
        a=a_spec,
        T=t_spec,
        outputs=outputs,
        format=fmt,
        rel_tol=rel_tol,
        max_l=max_l,
        diff_step=diff_step,
        diff_levels=diff_levels,
        out=pick("out", "out"),
    )


def _quad_of(cfg: RunConfig) -> QuadratureConfig:
    if cfg.rel_tol is None and cfg.max_l is None:
        return DEFAULT_QUAD
    return QuadratureConfig(
        rel_tol=cfg.rel_tol if cfg.rel_tol is not None else DEFAULT_QUAD.rel_tol,
        abs_tol=DEFAULT_QUAD.abs_tol,
        matsubara_tail_tol=DEFAULT_QUAD.matsubara_tail_tol,
        max_l=cfg.max_l if cfg.max_l is not None else DEFAULT_QUAD.max_l,
    )


def _diff_of(cfg: RunConfig) -> DiffConfig:
    if cfg.diff_step is None and cfg.diff_levels is None:
        return DEFAULT_DIFF
    return DiffConfig(
        rel_step=cfg.diff_step if cfg.diff_step is not None else DEFAULT_DIFF.rel_step,
        richardson_levels=(
            cfg.diff_levels if cfg.diff_levels is not None else DEFAULT_DIFF.richardson_levels
        ),
    )


# ---------------------------------------------------------------------------
# row assembly

Row = list[tuple[str, object]]


def _base_cells(s: FilmState, mat: Material, model_name: str) -> Row:
    p = dimensionless_params(mat, s)
    inside, _ = validate_window(s)
    return [
        ("a_m", s.a),
        ("T_K", s.T),
        ("model", model_name),
        ("omega_p_tilde", p.omega_p_tilde),
        ("tau", p.tau),
        ("inside_asymptotic_window", inside),
    ]


def _grid_row(
    s: FilmState,
    mat: Material,
    kind: Kind,
    cfg: RunConfig,
    quad: QuadratureConfig,
    diff: DiffConfig,
) -> Row:
    model = DielectricModel(kind, mat)
    row = _base_cells(s, mat, kind.value)
    at_zero = s.T == 0.0

    if "free_energy" in cfg.outputs:
        if at_zero:
            f = zero_T_energy(model, s, quad)
            row += [
                ("F_J_per_m2", f),
                ("F_err_J_per_m2", quad.rel_tol * abs(f)),
                ("dF_thermal_J_per_m2", 0.0),
                ("dF_thermal_err_J_per_m2", 0.0),
            ]
        else:
            fe = free_energy(model, s, quad)
            d, d_err = _thermal_correction_impl(model, s, quad)
            row += [
                ("F_J_per_m2", fe.value),
                ("F_err_J_per_m2", fe.err_estimate),
                ("dF_thermal_J_per_m2", d),
                ("dF_thermal_err_J_per_m2", d_err),
            ]
    if "pressure" in cfg.outputs:
        if at_zero:
            de_da, err = _richardson_derivative(
                lambda a: zero_T_energy(model, FilmState(a, 0.0), quad),
                s.a,
                diff.rel_step * s.a,
                diff.richardson_levels,
            )
            row += [("P_Pa", -de_da), ("P_err_Pa", err)]
        else:
            p, p_err = _pressure_impl(model, s, quad, diff)
            row += [("P_Pa", p), ("P_err_Pa", p_err)]
    if "entropy" in cfg.outputs:
        if at_zero:
            # closed forms only at T = 0: plasma obeys Nernst, Drude does not
            s_val = 0.0 if kind is Kind.PLASMA else asy.entropy_drude_zero(s, mat).s0
            row += [("S_J_per_m2K", s_val), ("S_err_J_per_m2K", 0.0)]
        else:
            s_val, s_err = _entropy_impl(model, s, quad, diff)
            row += [("S_J_per_m2K", s_val), ("S_err_J_per_m2K", s_err)]
    if "asymptotics" in cfg.outputs:
        if kind is Kind.PLASMA:
            row += [
                ("dF_asymptotic_J_per_m2", asy.delta_f_plasma(s, mat)),
                ("P_thermal_asymptotic_Pa", asy.delta_p_plasma(s, mat)),
                ("S_asymptotic_J_per_m2K", asy.entropy_plasma_asymptotic(s, mat)),
            ]
        else:
            row += [
                ("dF_asymptotic_J_per_m2", None),
                ("P_thermal_asymptotic_Pa", None),
                ("S_asymptotic_J_per_m2K", None),
            ]
    if "decomposition" in cfg.outputs:
        if kind is Kind.DRUDE and not at_zero:
            dec = asy.drude_decompose(s, mat, quad)
            row += [
                ("f_plasma_J_per_m2", dec.f_plasma),
                ("f0_drude_J_per_m2", dec.f0_drude),
                ("f0_plasma_J_per_m2", dec.f0_plasma),
                ("f_gamma_J_per_m2", dec.f_gamma),
                ("decomposition_total_J_per_m2", dec.total),
            ]
        else:
            row += [
                ("f_plasma_J_per_m2", None),
                ("f0_drude_J_per_m2", None),
                ("f0_plasma_J_per_m2", None),
                ("f_gamma_J_per_m2", None),
                ("decomposition_total_J_per_m2", None),
            ]
    if "bound_check" in cfg.outputs:
        if kind is Kind.DRUDE and not at_zero:
            fg = asy.f_gamma(mat, s, quad)
            xb = asy.x_bound(s, mat)
            row += [
                ("f_gamma_exact_J_per_m2", fg.exact),
                ("f_gamma_first_order_J_per_m2", fg.first_order),
                ("x_bound_J_per_m2", xb),
                ("bound_satisfied", abs(fg.exact) < xb),
            ]
        else:
            row += [
                ("f_gamma_exact_J_per_m2", None),
                ("f_gamma_first_order_J_per_m2", None),
                ("x_bound_J_per_m2", None),
                ("bound_satisfied", None),
            ]
    return row


def _rows_compute(cfg: RunConfig, mat: Material) -> list[Row]:
    quad, diff = _quad_of(cfg), _diff_of(cfg)
    kinds = {
        "plasma": [Kind.PLASMA],
        "drude": [Kind.DRUDE],
        "both": [Kind.PLASMA, Kind.DRUDE],
    }[cfg.model]
    rows = []
    for a in cfg.a.values():
        for t in cfg.T.values():
            for kind in kinds:
                try:
                    rows.append(_grid_row(FilmState(a, t), mat, kind, cfg, quad, diff))
                except ConvergenceError as exc:
                    raise ConvergenceError(
                        f"row a={a:g} T={t:g} model={kind.value}: {exc}"
                    ) from exc
    return rows


def _rows_compare_asymptotics(cfg: RunConfig, mat: Material) -> list[Row]:
    # the closed forms are plasma-model results; comparison uses plasma
    quad = _quad_of(cfg)
    model = DielectricModel(Kind.PLASMA, mat)
    rows = []
    for a in cfg.a.values():
        for t in cfg.T.values():
            s = FilmState(a, t)
            row = _base_cells(s, mat, "plasma")
            if t == 0.0:
                row += [
                    ("dF_direct_J_per_m2", 0.0),
                    ("dF_direct_err_J_per_m2", 0.0),
                    ("dF_asymptotic_J_per_m2", 0.0),
                    ("ratio_direct_to_asymptotic", None),
                ]
            else:
                try:
                    d, d_err = _thermal_correction_impl(model, s, quad)
                except ConvergenceError as exc:
                    raise ConvergenceError(f"row a={a:g} T={t:g}: {exc}") from exc
                asym = asy.delta_f_plasma(s, mat)
                row += [
                    ("dF_direct_J_per_m2", d),
                    ("dF_direct_err_J_per_m2", d_err),
                    ("dF_asymptotic_J_per_m2", asym),
                    ("ratio_direct_to_asymptotic", d / asym if asym != 0.0 else None),
                ]
            rows.append(row)
    return rows


def _rows_decompose(cfg: RunConfig, mat: Material) -> list[Row]:
    quad = _quad_of(cfg)
    drude = DielectricModel(Kind.DRUDE, mat)
    rows = []
    for a in cfg.a.values():
        for t in cfg.T.values():
            if t == 0.0:
                raise ConfigError("decompose requires T > 0 grid points")
            s = FilmState(a, t)
            try:
                dec = asy.drude_decompose(s, mat, quad)
                direct = free_energy(drude, s, quad).value
            except ConvergenceError as exc:
                raise ConvergenceError(f"row a={a:g} T={t:g}: {exc}") from exc
            row = _base_cells(s, mat, "drude")
            row += [
                ("gamma_rad_s", gamma_of_T(mat, t)),
                ("f_plasma_J_per_m2", dec.f_plasma),
                ("f0_drude_J_per_m2", dec.f0_drude),
                ("f0_plasma_J_per_m2", dec.f0_plasma),
                ("f_gamma_J_per_m2", dec.f_gamma),
                ("total_J_per_m2", dec.total),
                ("direct_drude_J_per_m2", direct),
                ("residual_rel", (dec.total - direct) / direct if direct != 0 else None),
            ]
            rows.append(row)
    return rows


def _rows_bound_check(cfg: RunConfig, mat: Material) -> list[Row]:
    quad = _quad_of(cfg)
    rows = []
    for a in cfg.a.values():
        for t in cfg.T.values():
            if t == 0.0:
                raise ConfigError("bound-check requires T > 0 grid points")
            s = FilmState(a, t)
            p = dimensionless_params(mat, s)
            try:
                fg = asy.f_gamma(mat, s, quad)
                xb = asy.x_bound(s, mat)
            except ConvergenceError as exc:
                raise ConvergenceError(f"row a={a:g} T={t:g}: {exc}") from exc
            row = _base_cells(s, mat, "drude")
            row += [
                ("gamma_rad_s", gamma_of_T(mat, t)),
                ("delta_1", p.gamma_tilde / p.tau),
                ("f_gamma_exact_J_per_m2", fg.exact),
                ("f_gamma_first_order_J_per_m2", fg.first_order),
                ("x_bound_J_per_m2", xb),
                ("bound_satisfied", abs(fg.exact) < xb),
            ]
            rows.append(row)
    return rows


def _rows_table_iii(cfg: RunConfig) -> list[Row]:
    quad = _quad_of(cfg)
    rows = []
    for w in (1.0, 5.0, 15.0):
        i1c, i2c = asy.i1_closed(w), asy.i2_closed(w)
        i1e, i2e = asy.i1_exact(w, quad), asy.i2_exact(w, quad)
        rows.append([
            ("omega_p_tilde", w),
            ("I1_closed", i1c),
            ("I1_exact", i1e),
            ("I2_closed", i2c),
            ("I2_exact", i2e),
            ("C_closed", ZETA3 + i1c + i2c),
            ("C_exact", ZETA3 + i1e + i2e),
        ])
    return rows


def _rows_materials_list() -> list[Row]:
    return [[("name", n)] for n in list_materials()]


# ---------------------------------------------------------------------------
# emission


def _fmt_cell(v: object) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.14e}"
    return str(v)


def _emit(cfg: RunConfig, rows: list[Row], stream) -> None:
    columns = [name for name, _ in rows[0]] if rows else []
    if cfg.format == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt_cell(v) for _, v in row))
        stream.write("\r\n".join(lines) + "\r\n")
        return
    doc = {
        "schema_id": SCHEMA_ID,
        "command": cfg.command,
        "config": {
            "material": cfg.material,
            "model": cfg.model,
            "a_m": cfg.a.values(),
            "T_K": cfg.T.values(),
            "outputs": list(cfg.outputs),
            "rel_tol": cfg.rel_tol,
            "max_l": cfg.max_l,
            "diff_step": cfg.diff_step,
            "diff_levels": cfg.diff_levels,
        },
        "columns": columns,
        "rows": [dict(row) for row in rows],
    }
    json.dump(doc, stream, indent=2)
    stream.write("\n")


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="filmcasimir",
        description=(
            "Casimir free energy, pressure and entropy of a free-standing "
            "metallic film (Lifshitz theory, plasma and Drude models)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, grid: bool = True) -> None:
        p.add_argument("--config", help="key = value config file; flags override it")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out", help="write the table to this path instead of stdout")
        p.add_argument("--rel-tol", dest="rel_tol", help="quadrature relative tolerance")
        p.add_argument("--max-l", dest="max_l", help="Matsubara term cap")
        if grid:
            p.add_argument("--material", help="material name or file path")
            p.add_argument("--a", help="film thickness, m")
            p.add_argument("--T", help="temperature, K")
            p.add_argument("--a-sweep", dest="a_sweep", help="start:stop:linear|log:count")
            p.add_argument("--T-sweep", dest="T_sweep", help="start:stop:linear|log:count")
            p.add_argument("--diff-step", dest="diff_step", help="relative differentiation step")
            p.add_argument(
                "--diff-levels", dest="diff_levels", help="Richardson extrapolation levels"
            )

    p = sub.add_parser("compute", help="one state point (scalar --a, --T)")
    add_common(p)
    p.add_argument("--model", choices=("plasma", "drude", "both"))
    p.add_argument("--outputs", help=f"comma set from {', '.join(_OUTPUT_CHOICES)}")

    p = sub.add_parser("sweep", help="grid of states, long-format rows")
    add_common(p)
    p.add_argument("--model", choices=("plasma", "drude", "both"))
    p.add_argument("--outputs", help=f"comma set from {', '.join(_OUTPUT_CHOICES)}")

    p = sub.add_parser(
        "compare-asymptotics",
        help="direct thermal correction vs the low-temperature closed form (plasma)",
    )
    add_common(p)

    p = sub.add_parser("decompose", help="Drude free-energy decomposition per state")
    add_common(p)

    p = sub.add_parser("bound-check", help="f_gamma against the analytic bound X(a, T)")
    add_common(p)

    p = sub.add_parser("table-III", help="zero-frequency integrals I1, I2 and C at omega_p_tilde = 1, 5, 15")
    add_common(p, grid=False)

    p = sub.add_parser("materials", help="materials utilities")
    p.add_argument("action", choices=("list",))
    add_common(p, grid=False)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if cfg.command == "materials":
            rows = _rows_materials_list()
        elif cfg.command == "table-III":
            rows = _rows_table_iii(cfg)
        else:
            try:
                mat = load_material(cfg.material)
            except (FileNotFoundError, ValueError) as exc:
                print(f"error: material {cfg.material!r}: {exc}", file=sys.stderr)
                return 3
            if cfg.command in ("compute", "sweep"):
                rows = _rows_compute(cfg, mat)
            elif cfg.command == "compare-asymptotics":
                rows = _rows_compare_asymptotics(cfg, mat)
            elif cfg.command == "decompose":
                rows = _rows_decompose(cfg, mat)
            else:
                rows = _rows_bound_check(cfg, mat)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: non-convergence: {exc}", file=sys.stderr)
        return 4

    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            _emit(cfg, rows, fh)
    else:
        _emit(cfg, rows, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
