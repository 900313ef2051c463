"""Command-line driver: parameter sweeps, finders and deterministic CSV output.

Subcommands:
  point      compute every requested quantity at a single parameter point
  sweep      run a 1- or 2-axis grid and write one CSV row per grid point
  threshold  locate the largest temperature at which the concurrence dies
  critical   locate a critical field (concurrence max, QFI min, dQFI/dB peak)
  figure     run a named preset that reproduces one figure's data files

Configuration is plain `key = value` text (# comments), overridable with
repeated --set key=value flags.  CSV output is RFC-4180 style with 17
significant digits, byte-identical across reruns and worker counts.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(non-finite result), 4 nothing found (finders).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import math
import os
import sys
from dataclasses import dataclass, fields, replace

from . import __version__
from .measures import (
    concurrence_x,
    l1_coherence,
    qfi,
    qfi_field_derivative,
    spin_correlators,
    spin_correlators_shortcut,
)
from .model import ModelParams
from .teleport import InputState, average_fidelity, output_concurrence
from .xfer import impurity_density_matrix

__all__ = [
    "ConfigError",
    "NotFound",
    "NonFiniteError",
    "SweepConfig",
    "SweepRecord",
    "run_point",
    "run_sweep",
    "find_threshold_temperature",
    "concurrence_sign_brackets",
    "find_critical_field",
    "run_figure",
    "FIGURE_PRESETS",
    "main",
]


class ConfigError(ValueError):
    """Unusable configuration file, key or value."""


class NotFound(RuntimeError):
    """A finder's coarse scan saw no interior extremum or bracket."""


class NonFiniteError(ArithmeticError):
    """A computed quantity came out non-finite; the parameter point is reported."""


PARAM_COLUMNS = ("J", "Delta", "J0", "g1", "g2", "g3", "gamma", "B", "T")
SWEEPABLE = ("B", "T", "Delta", "J0", "gamma")

QUANTITY_COLUMNS = {
    "concurrence": ("concurrence",),
    "coherence": ("coherence",),
    "sxsx": ("sxsx",),
    "szsz": ("szsz",),
    "qfi": ("qfi",),
    "qfi_dB": ("qfi_dB",),
    "favg": ("favg",),
    "cout": ("cout",),
    "rho_elements": ("r11", "r22", "r33", "r44", "r23"),
}
ALT_CORRELATOR_COLUMNS = ("sxsx_alt", "szsz_alt")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# single point

@dataclass(frozen=True)
class SweepRecord:
    """One grid point: the parameters used plus every computed column."""

    params: ModelParams
    values: dict[str, float]


def run_point(p: ModelParams, quantities, impurity: bool = True,
              delta_b: float = 1e-3, alt_correlators: bool = False) -> SweepRecord:
    """Evaluate the requested quantities at one parameter point.

    Deterministic; raises NonFiniteError (with the point attached) if any
    output fails to be finite.
    """
    unknown = [q for q in quantities if q not in QUANTITY_COLUMNS]
    if unknown:
        raise ConfigError(f"unknown quantities {unknown}; valid: {sorted(QUANTITY_COLUMNS)}")
    st = impurity_density_matrix(p, impurity=impurity)
    values: dict[str, float] = {}
    for q in quantities:
        if q == "concurrence":
            values[q] = concurrence_x(st)
        elif q == "coherence":
            values[q] = l1_coherence(st)
        elif q == "sxsx":
            values[q] = spin_correlators(st)[0]
        elif q == "szsz":
            values[q] = spin_correlators(st)[1]
        elif q == "qfi":
            values[q] = qfi(st)
        elif q == "qfi_dB":
            values[q] = qfi_field_derivative(p, delta_b=delta_b, impurity=impurity)
        elif q == "favg":
            values[q] = average_fidelity(st)
        elif q == "cout":
            values[q] = output_concurrence(st, InputState(theta=math.pi / 2.0))
        elif q == "rho_elements":
            values.update(r11=st.r11, r22=st.r22, r33=st.r33, r44=st.r44, r23=st.r23)
    if alt_correlators:
        values["sxsx_alt"], values["szsz_alt"] = spin_correlators_shortcut(st)
    bad = [k for k, v in values.items() if not math.isfinite(v)]
    if bad:
        raise NonFiniteError(f"non-finite {bad} at {p}")
    return SweepRecord(params=p, values=values)


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepConfig:
    """A validated sweep: fixed parameters, 1-2 axes, quantities, output path."""

    params: ModelParams
    axes: tuple[tuple[str, float, float, int], ...]
    quantities: tuple[str, ...]
    out: str
    delta_b: float = 1e-3
    impurity: bool = True
    alt_correlators: bool = False

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError(f"need 1 or 2 sweep axes, got {len(self.axes)}")
        seen = set()
        for name, start, stop, count in self.axes:
            if name not in SWEEPABLE:
                raise ConfigError(f"axis {name!r} not sweepable; choose from {SWEEPABLE}")
            if name in seen:
                raise ConfigError(f"axis {name!r} given twice")
            seen.add(name)
            if count < 2:
                raise ConfigError(f"axis {name!r} needs count >= 2, got {count}")
            if not start < stop:
                raise ConfigError(f"axis {name!r} needs start < stop")
        if not self.quantities:
            raise ConfigError("no quantities requested")
        unknown = [q for q in self.quantities if q not in QUANTITY_COLUMNS]
        if unknown:
            raise ConfigError(f"unknown quantities {unknown}")

    def columns(self) -> list[str]:
        cols = list(PARAM_COLUMNS)
        for q in self.quantities:
            cols.extend(QUANTITY_COLUMNS[q])
        if self.alt_correlators:
            cols.extend(ALT_CORRELATOR_COLUMNS)
        return cols

    def grid(self) -> list[ModelParams]:
        """Grid points in row order: last axis fastest, like nested loops."""
        axis_values = [
            [start + (stop - start) * i / (count - 1) for i in range(count)]
            for (_, start, stop, count) in self.axes
        ]
        points = []
        if len(self.axes) == 1:
            for v in axis_values[0]:
                points.append(replace(self.params, **{self.axes[0][0]: v}))
        else:
            for v1 in axis_values[0]:
                for v2 in axis_values[1]:
                    points.append(replace(
                        self.params,
                        **{self.axes[0][0]: v1, self.axes[1][0]: v2},
                    ))
        return points


def _sweep_worker(task) -> dict[str, float]:
    p, quantities, impurity, delta_b, alt = task
    return run_point(p, quantities, impurity, delta_b, alt).values


def _format(v: float) -> str:
    return f"{v:.16e}"


def run_sweep(cfg: SweepConfig, workers: int = 1) -> str:
    """Run the grid and write the CSV plus a run-manifest sidecar.

    Output bytes depend only on the configuration, not on the worker count:
    points are computed by pure functions and gathered in grid order.
    """
    points = cfg.grid()
    tasks = [(p, cfg.quantities, cfg.impurity, cfg.delta_b, cfg.alt_correlators)
             for p in points]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, tasks, chunksize=32))
    else:
        results = [_sweep_worker(t) for t in tasks]

    columns = cfg.columns()
    out_dir = os.path.dirname(os.path.abspath(cfg.out))
    os.makedirs(out_dir, exist_ok=True)
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for p, values in zip(points, results):
            row = [_format(getattr(p, c)) for c in PARAM_COLUMNS]
            row.extend(_format(values[c]) for c in columns[len(PARAM_COLUMNS):])
            writer.writerow(row)
    _write_manifest(cfg)
    return cfg.out


def _write_manifest(cfg: SweepConfig) -> None:
    lines = [f"tool = impurity-chain {__version__}"]
    for f in fields(ModelParams):
        lines.append(f"{f.name} = {getattr(cfg.params, f.name)!r}")
    for i, (name, start, stop, count) in enumerate(cfg.axes, start=1):
        lines.append(f"axis{i} = {name} {start!r} {stop!r} {count}")
    lines.append(f"quantities = {','.join(cfg.quantities)}")
    lines.append(f"impurity = {'on' if cfg.impurity else 'off'}")
    lines.append(f"delta_b = {cfg.delta_b!r}")
    lines.append(f"out = {cfg.out}")
    with open(cfg.out + ".manifest.txt", "w") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# finders

def _concurrence_at(p: ModelParams, impurity: bool) -> float:
    return concurrence_x(impurity_density_matrix(p, impurity=impurity))


def concurrence_sign_brackets(p: ModelParams, t_range, impurity: bool = True,
                              points: int = 64) -> int:
    """Number of (C > 0) sign changes of C(T) on a uniform coarse scan."""
    lo, hi = t_range
    temps = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    positive = [_concurrence_at(replace(p, T=t), impurity) > 0.0 for t in temps]
    return sum(1 for a, b in zip(positive, positive[1:]) if a != b)


def find_threshold_temperature(p: ModelParams, t_range, impurity: bool = True,
                               points: int = 64, tol: float = 1e-6) -> float | None:
    """Largest temperature where the concurrence changes between zero and positive.

    Coarse scan with `points` samples, then bisection of the last bracket down
    to `tol`.  Returns None when C is identically zero or strictly positive
    over the whole range.
    """
    lo, hi = t_range
    if not 0.0 < lo < hi:
        raise ValueError(f"bad temperature range {t_range}")
    temps = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    positive = [_concurrence_at(replace(p, T=t), impurity) > 0.0 for t in temps]
    brackets = [i for i in range(points - 1) if positive[i] != positive[i + 1]]
    if not brackets:
        return None
    i = brackets[-1]
    t_lo, t_hi = temps[i], temps[i + 1]
    side = positive[i]
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        if (_concurrence_at(replace(p, T=mid), impurity) > 0.0) == side:
            t_lo = mid
        else:
            t_hi = mid
    return 0.5 * (t_lo + t_hi)


def find_critical_field(p: ModelParams, b_range, target: str,
                        impurity: bool = True, points: int = 64,
                        tol: float = 1e-4, delta_b: float = 1e-3) -> float:
    """Field value extremizing the chosen functional inside b_range.

    target: 'max_concurrence' (maximize C), 'qfi_min' (minimize F) or
    'dqfi_peak' (maximize |dF/dB|).  Coarse scan, then golden-section
    refinement of the best interior sample down to `tol` in B.  Raises
    NotFound when the coarse scan is monotone (extremum at a boundary).
    """
    lo, hi = b_range
    if not lo < hi:
        raise ValueError(f"bad field range {b_range}")

    if target == "max_concurrence":
        def objective(b: float) -> float:
            return -_concurrence_at(replace(p, B=b), impurity)
    elif target == "qfi_min":
        def objective(b: float) -> float:
            return qfi(impurity_density_matrix(replace(p, B=b), impurity=impurity))
    elif target == "dqfi_peak":
        def objective(b: float) -> float:
            return -abs(qfi_field_derivative(replace(p, B=b), delta_b=delta_b,
                                             impurity=impurity))
    else:
        raise ConfigError(f"unknown target {target!r}")

    grid = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    samples = [objective(b) for b in grid]
    best = min(range(points), key=samples.__getitem__)
    if best in (0, points - 1):
        raise NotFound(f"{target} has no interior extremum in {b_range}")
    return _golden_section(objective, grid[best - 1], grid[best + 1], tol)


def _golden_section(f, a: float, b: float, tol: float) -> float:
    """Golden-section minimum of a unimodal f on [a, b], reusing evaluations."""
    h = b - a
    c, d = b - _GOLDEN * h, a + _GOLDEN * h
    fc, fd = f(c), f(d)
    while h > tol:
        h *= _GOLDEN
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# figure presets

def _preset_params(overrides: dict[str, float], **defaults) -> ModelParams:
    merged = dict(defaults)
    merged.update(overrides)
    try:
        return ModelParams(**merged)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _curve_sweeps(outdir, stem, base, curve_sets, axis, quantities):
    """One SweepConfig per combination in curve_sets (list of (field, values))."""
    jobs = []
    combos = [{}]
    for field_name, values in curve_sets:
        combos = [dict(c, **{field_name: v}) for c in combos for v in values]
    for combo in combos:
        tag = "_".join(f"{k}{v:g}" for k, v in combo.items())
        out = os.path.join(outdir, f"{stem}_{tag}.csv")
        jobs.append(SweepConfig(
            params=replace(base, **combo),
            axes=(axis,),
            quantities=quantities,
            out=out,
        ))
    return jobs


def _figure_fig3(outdir: str, ov: dict) -> list[SweepConfig]:
    base = _preset_params(ov, Delta=0.5, J0=1.0, T=0.01)
    return _curve_sweeps(outdir, "fig3", base,
                         [("gamma", (0.0, -0.8)), ("T", (0.01, 0.05, 0.2))],
                         ("B", 0.0, 3.0, 601), ("concurrence",))


def _figure_fig5(outdir: str, ov: dict) -> list[SweepConfig]:
    base = _preset_params(ov, Delta=0.0, J0=1.0)
    return _curve_sweeps(outdir, "fig5", base,
                         [("gamma", (0.0, -0.8)), ("B", (0.0, 0.5, 1.282, 2.0))],
                         ("T", 0.01, 2.0, 400), ("coherence",))


def _figure_qfi(outdir: str, ov: dict) -> list[SweepConfig]:
    base = _preset_params(ov, gamma=-0.8, J0=1.0, T=0.05)
    return _curve_sweeps(outdir, "fig_qfi", base,
                         [("Delta", (0.0, 0.5, 1.0, 2.0))],
                         ("B", 0.0, 3.0, 601), ("qfi",))


def _figure_dbqfi(outdir: str, ov: dict) -> list[SweepConfig]:
    base = _preset_params(ov, gamma=-0.8, J0=1.0, T=0.05)
    return _curve_sweeps(outdir, "fig_dbqfi", base,
                         [("Delta", (0.0, 0.5, 1.0, 2.0))],
                         ("B", 0.0, 3.0, 601), ("qfi_dB",))


def _figure_fig8(outdir: str, ov: dict) -> list[SweepConfig]:
    base = _preset_params(ov, Delta=0.5, J0=1.0)
    return _curve_sweeps(outdir, "fig8", base,
                         [("gamma", (0.0, -0.8)), ("B", (0.0, 0.5, 1.282, 2.0))],
                         ("T", 0.01, 2.0, 400), ("favg",))


def _figure_fig10(outdir: str, ov: dict) -> list[SweepConfig]:
    base = _preset_params(ov, J=4.0, Delta=0.5, J0=1.0)
    return _curve_sweeps(outdir, "fig10", base,
                         [("gamma", (0.0, -0.8)), ("T", (0.1, 0.6, 1.0))],
                         ("B", 0.0, 5.0, 601), ("favg",))


def _figure_fig22(outdir: str, ov: dict, workers: int = 1) -> list[str]:
    """Threshold temperature against anisotropy, one file per gamma value."""
    base = _preset_params(ov, Delta=0.0, J0=0.7, B=0.5, T=0.05)
    t_range = (0.01, 1.2)
    written = []
    os.makedirs(outdir, exist_ok=True)
    for gamma in (0.0, -0.8):
        out = os.path.join(outdir, f"fig22_threshold_gamma{gamma:g}.csv")
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["Delta", "T_threshold", "n_brackets"])
            for i in range(81):
                delta = 2.0 * i / 80.0
                point = replace(base, Delta=delta, gamma=gamma)
                t_th = find_threshold_temperature(point, t_range)
                n = concurrence_sign_brackets(point, t_range)
                writer.writerow([
                    _format(delta),
                    "" if t_th is None else _format(t_th),
                    str(n),
                ])
        written.append(out)
    return written


FIGURE_PRESETS = {
    "fig3": _figure_fig3,
    "fig5": _figure_fig5,
    "fig-qfi": _figure_qfi,
    "fig-dbqfi": _figure_dbqfi,
    "fig8": _figure_fig8,
    "fig10": _figure_fig10,
    "fig22-threshold": _figure_fig22,
}


def run_figure(name: str, outdir: str, overrides: dict, workers: int = 1) -> list[str]:
    """Write every data file of one figure preset; returns the paths."""
    if name not in FIGURE_PRESETS:
        raise ConfigError(f"unknown preset {name!r}; valid: {sorted(FIGURE_PRESETS)}")
    if name == "fig22-threshold":
        return _figure_fig22(outdir, overrides, workers)
    jobs = FIGURE_PRESETS[name](outdir, overrides)
    return [run_sweep(cfg, workers=workers) for cfg in jobs]


# ---------------------------------------------------------------------------
# configuration plumbing

_FLOAT_KEYS = ("J", "Delta", "J0", "g1", "g2", "g3", "gamma", "B", "T", "delta_b")
_TRUE_WORDS = ("1", "true", "on", "yes")
_FALSE_WORDS = ("0", "false", "off", "no")


def parse_config_file(path: str) -> dict[str, str]:
    """Read `key = value` lines; '#' starts a comment, blank lines ignored."""
    mapping: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in line.split("=", 1))
                if not key:
                    raise ConfigError(f"{path}:{lineno}: empty key")
                mapping[key] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return mapping


def _parse_bool(key: str, value: str) -> bool:
    low = value.strip().lower()
    if low in _TRUE_WORDS:
        return True
    if low in _FALSE_WORDS:
        return False
    raise ConfigError(f"{key}: expected on/off, got {value!r}")


def _parse_axis(text: str) -> tuple[str, float, float, int]:
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise ConfigError(f"axis needs 'name start stop count', got {text!r}")
    name, start, stop, count = parts
    try:
        return name, float(start), float(stop), int(count)
    except ValueError as exc:
        raise ConfigError(f"bad axis {text!r}: {exc}") from exc


def build_params(mapping: dict[str, str]) -> ModelParams:
    kwargs = {}
    for key in _FLOAT_KEYS[:-1]:
        if key in mapping:
            try:
                kwargs[key] = float(mapping[key])
            except ValueError as exc:
                raise ConfigError(f"{key}: not a number: {mapping[key]!r}") from exc
    try:
        return ModelParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_sweep_config(mapping: dict[str, str], alt_correlators: bool = False) -> SweepConfig:
    params = build_params(mapping)
    axes = []
    for key in ("axis", "axis1", "axis2"):
        if key in mapping:
            axes.append(_parse_axis(mapping[key]))
    if not axes:
        raise ConfigError("no sweep axis given (use 'axis = NAME START STOP COUNT')")
    quantities = tuple(
        q.strip() for q in mapping.get("quantities", "concurrence").split(",") if q.strip()
    )
    try:
        delta_b = float(mapping.get("delta_b", "1e-3"))
    except ValueError as exc:
        raise ConfigError(f"delta_b: {exc}") from exc
    return SweepConfig(
        params=params,
        axes=tuple(axes),
        quantities=quantities,
        out=mapping.get("out", "sweep.csv"),
        delta_b=delta_b,
        impurity=_parse_bool("impurity", mapping.get("impurity", "on")),
        alt_correlators=alt_correlators,
    )


def _collect_mapping(args) -> dict[str, str]:
    mapping = parse_config_file(args.config) if args.config else {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impurity-chain",
        description="Exact solver for the Ising-XXZ chain with one impurity dimer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one configuration key (repeatable)")

    sp = sub.add_parser("point", help="evaluate one parameter point")
    common(sp)
    sp.add_argument("--out", help="write the one-row CSV here instead of stdout")
    sp.add_argument("--debug-paper-correlators", action="store_true",
                    help="also emit the shortcut correlator variants")

    sp = sub.add_parser("sweep", help="run a parameter grid to CSV")
    common(sp)
    sp.add_argument("--out", help="output CSV path (overrides config)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--debug-paper-correlators", action="store_true",
                    help="also emit the shortcut correlator variants")

    sp = sub.add_parser("threshold", help="largest temperature where C(T) dies")
    common(sp)
    sp.add_argument("--t-min", type=float, default=0.01)
    sp.add_argument("--t-max", type=float, default=2.0)

    sp = sub.add_parser("critical", help="critical field of a chosen functional")
    common(sp)
    sp.add_argument("--b-min", type=float, default=0.0)
    sp.add_argument("--b-max", type=float, default=3.0)
    sp.add_argument("--target", default="max-concurrence",
                    choices=("max-concurrence", "qfi-min", "dqfi-peak"))
    sp.add_argument("--tol", type=float, default=1e-4)

    sp = sub.add_parser("figure", help="write a figure preset's data files")
    common(sp)
    sp.add_argument("preset", choices=sorted(FIGURE_PRESETS))
    sp.add_argument("--out", default="figures", help="output directory")
    sp.add_argument("--workers", type=int, default=1)

    return parser


def _cmd_point(args) -> int:
    mapping = _collect_mapping(args)
    params = build_params(mapping)
    quantities = tuple(
        q.strip() for q in mapping.get("quantities", ",".join(QUANTITY_COLUMNS)).split(",")
        if q.strip()
    )
    impurity = _parse_bool("impurity", mapping.get("impurity", "on"))
    delta_b = float(mapping.get("delta_b", "1e-3"))
    record = run_point(params, quantities, impurity=impurity, delta_b=delta_b,
                       alt_correlators=args.debug_paper_correlators)
    columns = list(PARAM_COLUMNS) + list(record.values)
    row = [_format(getattr(params, c)) for c in PARAM_COLUMNS]
    row += [_format(record.values[c]) for c in list(record.values)]
    target = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(target)
        writer.writerow(columns)
        writer.writerow(row)
    finally:
        if args.out:
            target.close()
    return 0


def _cmd_sweep(args) -> int:
    mapping = _collect_mapping(args)
    if args.out:
        mapping["out"] = args.out
    cfg = build_sweep_config(mapping, alt_correlators=args.debug_paper_correlators)
    path = run_sweep(cfg, workers=args.workers)
    print(path)
    return 0


def _cmd_threshold(args) -> int:
    mapping = _collect_mapping(args)
    params = build_params(mapping)
    impurity = _parse_bool("impurity", mapping.get("impurity", "on"))
    t_th = find_threshold_temperature(params, (args.t_min, args.t_max), impurity=impurity)
    if t_th is None:
        print("none")
        return 4
    print(_format(t_th))
    return 0


def _cmd_critical(args) -> int:
    mapping = _collect_mapping(args)
    params = build_params(mapping)
    impurity = _parse_bool("impurity", mapping.get("impurity", "on"))
    target = args.target.replace("-", "_")
    b_star = find_critical_field(params, (args.b_min, args.b_max), target,
                                 impurity=impurity, tol=args.tol)
    print(_format(b_star))
    return 0


def _cmd_figure(args) -> int:
    mapping = _collect_mapping(args)
    overrides = {}
    for key, value in mapping.items():
        if key in _FLOAT_KEYS[:-1]:
            try:
                overrides[key] = float(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from exc
    for path in run_figure(args.preset, args.out, overrides, workers=args.workers):
        print(path)
    return 0


_COMMANDS = {
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "critical": _cmd_critical,
    "figure": _cmd_figure,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (NonFiniteError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
