"""Command line front end: ``solve``, ``verify``, ``conjugate``, ``ladder``, ``sweep``.

Runs are described by an INI file::

    [lagrangian]
    name = power:2            # power:{a}, cosh, xlogx_shifted, area:{cap}, custom:{csv}
    minorant = default        # or power:{a}, quadratic:{c}, xlogx

    [domain]
    extents = -1 1            # x0 x1 [y0 y1]
    cells = 512               # nx [ny]

    [obstacle]
    kind = parabola           # parabola{height, center}, cone{height, slope, center}, table{path}
    height = 0.5

    [boundary]
    kind = zero               # zero, affine{a, b}, table{path}

    [solver]
    max_iter = 200000
    tol_kkt = 1e-12

    [ladder]
    k_list = 2 4 8 16 32

    [conjugate]
    s_values = 0 0.5 1 2 5 10
    samples = 1000

    [sweep]
    cells = 64 128 256 512

    [output]
    dir = out

    [run]
    seed = 0

Exit codes: 0 success, 1 a certificate or invariant failed, 2 bad
configuration or missing input, 3 solver did not converge.
"""

from __future__ import annotations

import argparse
import configparser
import datetime as _dt
import json
import math
import platform
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import convex_core as cc
from .errors import (
    ConfigError,
    InfeasibleInstance,
    MaxIterExceeded,
    MonotonicityViolation,
    ObstacleDualityError,
)
from .ladder import build_ladder, g_level, ladder_report
from .mesh import (
    Grid,
    ScalarField,
    VectorField,
    read_field_csv,
    write_field_csv,
)
from .solver import (
    TOL_KKT,
    ObstacleInstance,
    ladder_solve_sequence,
    solve_and_report,
)
from .verify import analytic_membrane_1d, run_certificates

EXIT_OK, EXIT_CERT, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3


# -- configuration -------------------------------------------------------------


@dataclass
class RunConfig:
    lagrangian: str = "power:2"
    minorant: str = "default"
    extents: tuple = ((-1.0, 1.0),)
    cells: tuple = (512,)
    obstacle: dict = field(default_factory=lambda: {"kind": "parabola", "height": 0.5})
    boundary: dict = field(default_factory=lambda: {"kind": "zero"})
    max_iter: int = 200_000
    tol_kkt: float = TOL_KKT
    k_list: tuple = (2, 4, 8, 16, 32)
    s_values: tuple = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
    samples: int = 1000
    sweep_cells: tuple = (64, 128, 256, 512)
    out_dir: str = "out"
    seed: int = 0
    base: Path = Path(".")
    lines: dict = field(default_factory=dict, repr=False)

    def line(self, section, key=None):
        return self.lines.get((section, key), self.lines.get((section, None)))

    def resolve(self, path) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base / p

    def to_dict(self) -> dict:
        return {
            "lagrangian": self.lagrangian,
            "minorant": self.minorant,
            "domain": {"extents": [list(e) for e in self.extents], "cells": list(self.cells)},
            "obstacle": dict(self.obstacle),
            "boundary": dict(self.boundary),
            "solver": {"max_iter": self.max_iter, "tol_kkt": self.tol_kkt},
        }


def _line_index(text: str) -> dict:
    """Map ``(section, key)`` and ``(section, None)`` to 1-based line numbers."""
    index, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            index[(section, None)] = n
        elif section and s and s[0] not in "#;":
            key = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
            index[(section, key)] = n
    return index


def _floats(text, cfg, section, key, count=None):
    try:
        vals = tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected numbers, got {text!r}",
                          cfg.line(section, key)) from None
    if count is not None and len(vals) not in count:
        raise ConfigError(f"[{section}] {key}: expected {' or '.join(map(str, count))} values",
                          cfg.line(section, key))
    return vals


def load_config(path) -> RunConfig:
    """Parse a run file; errors carry the offending line number."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], getattr(exc, "lineno", None)) from None
    cfg = RunConfig(base=path.parent, lines=_line_index(text))
    known = {"lagrangian", "domain", "obstacle", "boundary", "solver", "ladder",
             "conjugate", "sweep", "output", "run"}
    for sec in parser.sections():
        if sec.lower() not in known:
            raise ConfigError(f"unknown section [{sec}]", cfg.line(sec.lower()))

    def get(section, key, default=None):
        return parser.get(section, key, fallback=default)

    def number(section, key, kind, default):
        raw = get(section, key)
        if raw is None:
            return default
        try:
            return kind(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: invalid value {raw!r}",
                              cfg.line(section, key)) from None

    cfg.lagrangian = get("lagrangian", "name", cfg.lagrangian).strip()
    cfg.minorant = get("lagrangian", "minorant", cfg.minorant).strip()

    if parser.has_option("domain", "extents"):
        ext = _floats(get("domain", "extents"), cfg, "domain", "extents", (2, 4))
        cfg.extents = tuple(zip(ext[0::2], ext[1::2]))
    if parser.has_option("domain", "cells"):
        cells = _floats(get("domain", "cells"), cfg, "domain", "cells", (1, 2))
        cfg.cells = tuple(int(c) for c in cells)
    if len(cfg.cells) == 1 and len(cfg.extents) == 2:
        cfg.cells = cfg.cells * 2
    if len(cfg.cells) != len(cfg.extents):
        raise ConfigError("[domain] cells does not match the dimension of extents",
                          cfg.line("domain", "cells"))

    for sec in ("obstacle", "boundary"):
        if parser.has_section(sec):
            opts = {k: v.strip() for k, v in parser.items(sec)}
            opts.setdefault("kind", "parabola" if sec == "obstacle" else "zero")
            setattr(cfg, sec, opts)

    cfg.max_iter = number("solver", "max_iter", int, cfg.max_iter)
    cfg.tol_kkt = number("solver", "tol_kkt", float, cfg.tol_kkt)
    if parser.has_option("ladder", "k_list"):
        ks = _floats(get("ladder", "k_list"), cfg, "ladder", "k_list")
        if any(k != int(k) or k < 2 for k in ks):
            raise ConfigError("[ladder] k_list entries must be integers >= 2",
                              cfg.line("ladder", "k_list"))
        cfg.k_list = tuple(int(k) for k in ks)
    if parser.has_option("conjugate", "s_values"):
        cfg.s_values = _floats(get("conjugate", "s_values"), cfg, "conjugate", "s_values")
    cfg.samples = number("conjugate", "samples", int, cfg.samples)
    if parser.has_option("sweep", "cells"):
        cfg.sweep_cells = tuple(int(c) for c in
                                _floats(get("sweep", "cells"), cfg, "sweep", "cells"))
    cfg.out_dir = get("output", "dir", cfg.out_dir)
    cfg.seed = number("run", "seed", int, cfg.seed)
    return cfg


def _param(cfg, section, opts, key, default=None, count=None):
    if key not in opts:
        if default is None:
            raise ConfigError(f"[{section}] kind = {opts['kind']} needs '{key}'",
                              cfg.line(section, "kind"))
        return default
    vals = _floats(opts[key], cfg, section, key, count)
    return vals[0] if len(vals) == 1 else np.array(vals)


def _expression(cfg: RunConfig, grid: Grid, section: str) -> ScalarField:
    opts = getattr(cfg, section)
    kind = opts["kind"]
    x = grid.coords
    centre_default = [0.5 * (lo + hi) for lo, hi in grid.extents]
    if kind == "table":
        if "path" not in opts:
            raise ConfigError(f"[{section}] kind = table needs 'path'", cfg.line(section, "kind"))
        p = cfg.resolve(opts["path"])
        if not p.exists():
            raise ConfigError(f"[{section}] table {p} not found", cfg.line(section, "path"))
        fld = read_field_csv(p)
        if not isinstance(fld, ScalarField) or fld.grid != grid:
            raise ConfigError(f"[{section}] table {p} does not match the domain grid",
                              cfg.line(section, "path"))
        return fld
    if section == "obstacle" and kind in ("parabola", "cone"):
        h = _param(cfg, section, opts, "height")
        c = np.atleast_1d(_param(cfg, section, opts, "center", np.array(centre_default)))
        if c.size != grid.dim:
            raise ConfigError(f"[{section}] center needs {grid.dim} values",
                              cfg.line(section, "center"))
        r2 = sum((xi - ci) ** 2 for xi, ci in zip(x, c))
        if kind == "parabola":
            return ScalarField(grid, h - r2)
        slope = _param(cfg, section, opts, "slope")
        return ScalarField(grid, h - slope * np.sqrt(r2))
    if section == "boundary" and kind == "zero":
        return ScalarField(grid, np.zeros(grid.node_shape))
    if section == "boundary" and kind == "affine":
        a = np.atleast_1d(_param(cfg, section, opts, "a"))
        b = _param(cfg, section, opts, "b", 0.0)
        if a.size != grid.dim:
            raise ConfigError(f"[{section}] a needs {grid.dim} values", cfg.line(section, "a"))
        return ScalarField(grid, b + sum(ai * xi for ai, xi in zip(a, x)))
    raise ConfigError(f"[{section}] unknown kind {kind!r}", cfg.line(section, "kind"))


def build_lagrangian(cfg: RunConfig) -> cc.RadialLagrangian:
    name = cfg.lagrangian
    kind, _, arg = name.partition(":")
    if kind == "custom":
        p = cfg.resolve(arg)
        if not p.exists():
            raise ConfigError(f"custom profile {p} not found", cfg.line("lagrangian", "name"))
        name = f"custom:{p}"
    try:
        return cc.from_name(name, cfg.minorant)
    except (ValueError, OSError) as exc:
        key = "minorant" if "minorant" in str(exc) else "name"
        raise ConfigError(f"[lagrangian] {exc}", cfg.line("lagrangian", key)) from None


def build_instance(cfg: RunConfig, cells=None) -> ObstacleInstance:
    grid = Grid(cfg.extents, cells or cfg.cells)
    L = build_lagrangian(cfg)
    psi = _expression(cfg, grid, "obstacle")
    u0 = _expression(cfg, grid, "boundary")
    try:
        return ObstacleInstance(grid, L, psi, u0)
    except InfeasibleInstance as exc:
        raise InfeasibleInstance(f"{exc} (see [obstacle] at line "
                                 f"{cfg.line('obstacle')})") from None


# -- output helpers ------------------------------------------------------------


def _num(x):
    """Round to 15 significant digits; non-finite values become strings."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return float(f"{x:.15g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, int, np.floating, np.integer, np.bool_)):
        return _num(obj)
    return obj


def _versions() -> dict:
    import scipy

    from . import __version__

    return {"obstacle_duality": __version__, "numpy": np.__version__,
            "scipy": scipy.__version__, "python": platform.python_version()}


def _write_json(path: Path, payload: dict) -> None:
    payload = dict(payload)
    payload["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    path.write_text(json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n")


def _write_table(path: Path, columns: dict, header: dict | None = None) -> None:
    names = list(columns)
    cols = [np.asarray(columns[n]) for n in names]
    with open(path, "w") as fh:
        if header is not None:
            fh.write("# " + json.dumps(_clean(header), sort_keys=True) + "\n")
        fh.write(",".join(names) + "\n")
        for row in zip(*cols):
            fh.write(",".join(f"{float(v):.15g}" for v in row) + "\n")


class _Log:
    def __init__(self, quiet):
        self.quiet = quiet

    def __call__(self, msg):
        if not self.quiet:
            print(msg)


# -- subcommands -------------------------------------------------------------


def _certificate_bundle(certs: dict) -> dict:
    return {name: c.to_dict() for name, c in certs.items()}


def _emit_solve(out: Path, cfg, inst, rep, certs) -> None:
    write_field_csv(out / "u.csv", rep.u)
    write_field_csv(out / "sigma.csv", rep.sigma)
    write_field_csv(out / "weights.csv", rep.weights)
    _write_json(out / "report.json", {
        "instance": cfg.to_dict(),
        "primal": rep.primal,
        "dual": rep.dual,
        "gap": rep.gap,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "contact_nodes": rep.contact_nodes,
        "free_boundary_nodes": rep.free_boundary_nodes,
        "certificates": _certificate_bundle(certs),
        "versions": _versions(),
    })


def cmd_solve(cfg: RunConfig, out: Path, seed: int, log) -> int:
    inst = build_instance(cfg)
    try:
        rep = solve_and_report(inst, max_iter=cfg.max_iter, tol_kkt=cfg.tol_kkt)
    except MaxIterExceeded as exc:
        rep = exc.result
        certs = run_certificates(inst, rep.u, rep.sigma, seed=seed)
        _emit_solve(out, cfg, inst, rep, certs)
        log(f"solver: {exc}; best iterate written to {out}")
        return EXIT_SOLVER
    certs = run_certificates(inst, rep.u, rep.sigma, seed=seed)
    _emit_solve(out, cfg, inst, rep, certs)
    log(f"primal {rep.primal:.12g}  dual {rep.dual:.12g}  gap {rep.gap:.3g}  "
        f"iterations {rep.iterations}")
    for c in certs.values():
        log(f"  {'PASS' if c.passed else 'FAIL'}  {c.name:24s} {c.residual:.3g} <= {c.tolerance:.3g}")
    return EXIT_OK if all(c.passed for c in certs.values()) else EXIT_CERT


def cmd_verify(cfg: RunConfig, out: Path, report: Path, seed: int, log) -> int:
    folder = report.parent
    paths = {name: folder / f"{name}.csv" for name in ("u", "sigma")}
    for p in [report, *paths.values()]:
        if not p.exists():
            raise ConfigError(f"missing solve output {p}")
    inst = build_instance(cfg)
    u = read_field_csv(paths["u"])
    sigma = read_field_csv(paths["sigma"])
    if not isinstance(u, ScalarField) or not isinstance(sigma, VectorField):
        raise ConfigError("u.csv / sigma.csv have the wrong field kind")
    if u.grid != inst.grid or sigma.grid != inst.grid:
        raise ConfigError("solve outputs do not match the configured grid")
    certs = run_certificates(inst, u, sigma, seed=seed)
    bundle = _certificate_bundle(certs)
    (out / "certificates.json").write_text(json.dumps(_clean(bundle), indent=2, sort_keys=True) + "\n")
    for c in certs.values():
        log(f"{'PASS' if c.passed else 'FAIL'}  {c.name:24s} {c.residual:.3g} <= {c.tolerance:.3g}"
            + ("" if c.passed else f"  ({c.detail})"))
    return EXIT_OK if all(c.passed for c in certs.values()) else EXIT_CERT


def cmd_conjugate(cfg: RunConfig, out: Path, seed: int, log) -> int:
    L = build_lagrangian(cfg)
    C = cc.ConjugateTable(L)
    s = np.asarray(cfg.s_values, dtype=float)
    inside = s < L.cap
    t = np.full_like(s, np.nan)
    if np.any(inside):
        t[inside] = C.invert_derivative(s[inside])
    fstar = np.asarray(C(s), dtype=float).reshape(s.shape)
    _write_table(out / "conjugate.csv",
                 {"s": s, "t_of_s": t, "f_of_t": L.f(np.nan_to_num(t)), "fstar": fstar},
                 {"lagrangian": L.name})

    rng = np.random.default_rng(seed)
    n = cfg.samples
    xi = rng.normal(size=(n, 2)) * 2.0
    z = rng.normal(size=(n, 2)) * 2.0
    if math.isfinite(L.cap):
        z *= np.minimum(1.0, 0.999 * L.cap / np.maximum(np.linalg.norm(z, axis=1), 1e-300))[:, None]
    gap = cc.fenchel_gap(L, C, xi, z)
    eq = cc.fenchel_gap(L, C, xi, cc.eval_gradient(L, xi))
    _write_table(out / "fenchel.csv", {
        "xi_x": xi[:, 0], "xi_y": xi[:, 1], "z_x": z[:, 0], "z_y": z[:, 1],
        "gap": gap, "gap_at_gradient": eq,
    }, {"lagrangian": L.name, "seed": seed})
    ok = bool(np.min(gap) >= -1e-10 and np.max(np.abs(eq)) <= 1e-6)
    log(f"{L.name}: min gap {np.min(gap):.3g}, max equality-case gap {np.max(np.abs(eq)):.3g}")
    for si, fi in zip(s, fstar):
        log(f"  f*({si:g}) = {fi:.12g}")
    return EXIT_OK if ok else EXIT_CERT


def cmd_ladder(cfg: RunConfig, out: Path, seed: int, log) -> int:
    L = build_lagrangian(cfg)
    C = cc.ConjugateTable(L)
    try:
        levels = build_ladder(L, C, cfg.k_list, validate=False)
    except ObstacleDualityError as exc:
        raise ConfigError(f"[ladder] {exc}", cfg.line("ladder", "k_list")) from None
    t = np.arange(0.0, 3.0 * levels[-1].r_k, 0.01)
    F = L.f(t)
    for lv in levels:
        _write_table(out / f"ladder_k{lv.k}.csv", {
            "t": t, "F": F, "F_k": lv.fk(t), "H_k": lv.h(t), "G_k_bipolar": g_level(L, C, lv.k, t),
        }, {"k": lv.k, "r_k": lv.r_k, "m_k": lv.m_k, "delta_k": lv.delta_k, "mu_k": lv.mu_k})
    rep = ladder_report(levels, t, F)
    summary = {name: {"passed": ok, "worst": worst, "where": list(where) if where else None}
               for name, (ok, worst, where) in rep.items()}
    (out / "ladder_summary.json").write_text(
        json.dumps(_clean(summary), indent=2, sort_keys=True) + "\n")
    for name, (ok, worst, where) in rep.items():
        log(f"{'PASS' if ok else 'FAIL'}  {name:24s} worst {worst:.3g} at {where}")
    return EXIT_OK if all(ok for ok, _, _ in rep.values()) else EXIT_CERT


def _is_membrane(cfg: RunConfig) -> bool:
    return (len(cfg.extents) == 1 and cfg.extents[0] == (-1.0, 1.0)
            and cfg.obstacle.get("kind") == "parabola"
            and float(cfg.obstacle.get("center", 0.0)) == 0.0
            and cfg.boundary.get("kind") == "zero")


def cmd_sweep(cfg: RunConfig, out: Path, seed: int, log) -> int:
    cells = sorted(cfg.sweep_cells)
    exact = None
    if _is_membrane(cfg):
        exact = analytic_membrane_1d(float(cfg.obstacle["height"]))
    rows = {"cells": [], "h": [], "primal": [], "dual": [], "gap": [], "iterations": [],
            "max_error": []}
    reports = []
    for n in cells:
        c = (n,) * len(cfg.extents)
        inst = build_instance(cfg, c)
        try:
            rep = solve_and_report(inst, max_iter=cfg.max_iter, tol_kkt=cfg.tol_kkt)
        except MaxIterExceeded as exc:
            log(f"cells {n}: {exc}")
            return EXIT_SOLVER
        reports.append((inst, rep))
        rows["cells"].append(n)
        rows["h"].append(min(inst.grid.spacing))
        rows["primal"].append(rep.primal)
        rows["dual"].append(rep.dual)
        rows["gap"].append(rep.gap)
        rows["iterations"].append(rep.iterations)
    fine_inst, fine = reports[-1]
    for (inst, rep), n in zip(reports, cells):
        if exact is not None:
            err = float(np.max(np.abs(rep.u.values - exact(inst.grid.coords[0]))))
        elif cells[-1] % n == 0:
            step = cells[-1] // n
            sl = tuple(slice(None, None, step) for _ in range(inst.grid.dim))
            err = float(np.max(np.abs(rep.u.values - fine.u.values[sl])))
        else:
            err = math.nan
        rows["max_error"].append(err)
    _write_table(out / "sweep_h.csv", rows,
                 {"reference": "analytic" if exact is not None else f"cells {cells[-1]}"})
    errs = rows["max_error"]
    checked = errs if exact is not None else errs[:-1]
    monotone = all(b <= a for a, b in zip(checked, checked[1:]))
    for n, e, g in zip(cells, errs, rows["gap"]):
        log(f"cells {n:6d}  max error {e:.3g}  gap {g:.3g}")

    inst = build_instance(cfg)
    ok_k = True
    if build_lagrangian(cfg).growth == "superlinear" and cfg.k_list:
        try:
            seq = ladder_solve_sequence(inst, cfg.k_list, max_iter=cfg.max_iter,
                                        tol_kkt=cfg.tol_kkt)
        except MaxIterExceeded as exc:
            log(str(exc))
            return EXIT_SOLVER
        except MonotonicityViolation as exc:
            raise ConfigError(f"[ladder] {exc}", cfg.line("ladder", "k_list")) from None
        _write_table(out / "sweep_k.csv", {
            "k": [lv.k for lv in seq.levels],
            "energy": [lv.energy for lv in seq.levels],
            "energy_deficit": [seq.reference_energy - lv.energy for lv in seq.levels],
            "sigma_error": [lv.sigma_error for lv in seq.levels],
        }, {"reference_energy": seq.reference_energy})
        ok_k = seq.diagnostics["energy_nondecreasing"]
        for lv in seq.levels:
            log(f"k {lv.k:4d}  I_k {lv.energy:.12g}  max|sigma_k - sigma| {lv.sigma_error:.3g}")
    log(f"error column monotone: {monotone}; ladder energies nondecreasing: {ok_k}")
    return EXIT_OK if monotone and ok_k else EXIT_CERT


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obstacle-duality",
        description="Solve and certify convex obstacle problems via duality.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="INI run description")
    common.add_argument("--out", help="output directory (default: [output] dir)")
    common.add_argument("--seed", type=int, help="seed for randomised checks")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve and write report + fields")
    p = sub.add_parser("verify", parents=[common], help="certify a previous solve")
    p.add_argument("--report", help="report.json of the solve (default: OUT/report.json)")
    sub.add_parser("conjugate", parents=[common], help="tabulate f* and Fenchel gaps")
    sub.add_parser("ladder", parents=[common], help="tabulate the approximation ladder")
    sub.add_parser("sweep", parents=[common], help="mesh and ladder refinement study")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    log = _Log(args.quiet)
    try:
        cfg = load_config(args.config)
        out = Path(args.out) if args.out else cfg.resolve(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        seed = cfg.seed if args.seed is None else args.seed
        if args.command == "solve":
            return cmd_solve(cfg, out, seed, log)
        if args.command == "verify":
            report = Path(args.report) if args.report else out / "report.json"
            return cmd_verify(cfg, out, report, seed, log)
        if args.command == "conjugate":
            return cmd_conjugate(cfg, out, seed, log)
        if args.command == "ladder":
            return cmd_ladder(cfg, out, seed, log)
        return cmd_sweep(cfg, out, seed, log)
    except (ConfigError, InfeasibleInstance) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MaxIterExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
