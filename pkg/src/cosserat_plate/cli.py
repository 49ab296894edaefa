"""Batch command line: ``validate``, ``solve`` and ``verify`` a plate config.

Config (JSON)::

    {
      "material": {"lambda": 1, "mu": 1, "mu_c": 1, "beta": 1, "gamma": 1, "epsilon": 1},
      "geometry": {"a": 1, "b": 1, "h": 0.1, "nx": 33, "ny": 33},
      "loads": {"sigma_t": 0.5, "sigma_b": -0.5, "mu_t": 0, "mu_b": 0},
      "bc": {"left": {"type": "clamped"}, "right": {"type": "simply_supported"},
             "bottom": {"type": "free", "values": {"M_n1": 0.1}}, "top": {"type": "clamped"}},
      "run": {"variant": "full", "solver": "direct", "tol": 1e-10, "plot": ["W"]}
    }

A load is a number, a CSV grid path (first row: blank then x values; other
rows: y then values; bilinear interpolation to the nodes) or
``{"sine": A}`` for A sin(pi x / a) sin(pi y / b).  Edge ``type`` is one of
clamped, free, simply_supported; ``twisting`` overrides the twisting group
kind; ``kinds`` overrides single fields; ``values`` sets data by field or
edge-resultant name.  Unknown keys are rejected.

Exit codes: 0 ok, 1 verification failure, 2 config/material error,
3 solver error, 4 IO error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import cosserat3d
from .errors import CosseratPlateError, SingularModuliError, SolverError, ValidationError
from .material import Admissibility, CosseratModuli, classify_material, primed_constants
from .plate_constitutive import (
    build_compliance,
    build_reduced_compliance,
    energy_density,
    gradient_check,
    quadrature_energy_density,
)
from .profiles import PlateLoads
from .resultants import GAUSS_NODES, GAUSS_WEIGHTS
from .sets import KINEMATIC_NAMES, STRAIN_NAMES, STRESS_NAMES, StressSet
from .solver import DISPLACEMENT, EDGES, PAIR_NAMES, TRACTION, VARIANTS, EdgeBC, PlateProblem, solve, solve_reduced, \
    variant_basis

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3, 4
CSV_VERSION = "fields-v1"
CSV_HEADER = ("x1", "x2") + KINEMATIC_NAMES + STRAIN_NAMES + STRESS_NAMES

_MATERIAL_KEYS = ("lambda", "mu", "mu_c", "beta", "gamma", "epsilon")
_GEOMETRY_KEYS = ("a", "b", "h", "nx", "ny")
_LOAD_KEYS = ("sigma_t", "sigma_b", "mu_t", "mu_b")
_RUN_KEYS = {"variant": "full", "solver": "direct", "tol": 1e-10, "plot": []}
_EDGE_KEYS = ("type", "twisting", "kinds", "values")
_EDGE_TYPES = ("clamped", "free", "simply_supported")


class ConfigError(CosseratPlateError):
    pass


# -- config ---------------------------------------------------------------------

def _reject_unknown(block: dict, allowed, where: str) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(block) - set(allowed))
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {extra}")


def _number(block: dict, key: str, where: str, positive: bool = False) -> float:
    if key not in block:
        raise ConfigError(f"{where}.{key}: missing required field")
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}.{key}: expected a finite number")
    if positive and v <= 0:
        raise ConfigError(f"{where}.{key}: must be positive")
    return float(v)


def load_config(path: str | Path) -> dict:
    """Read and validate a config file; returns the normalized config."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"parse error: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    cfg = validate_config(raw, base=Path(path).parent)
    return cfg


def validate_config(raw: Any, base: Path = Path(".")) -> dict:
    _reject_unknown(raw, ("material", "geometry", "loads", "bc", "run"), "config")
    for key in ("material", "geometry"):
        if key not in raw:
            raise ConfigError(f"config.{key}: missing required block")
    mat = raw["material"]
    _reject_unknown(mat, _MATERIAL_KEYS, "material")
    material = {k: _number(mat, k, "material") for k in _MATERIAL_KEYS}
    geo = raw["geometry"]
    _reject_unknown(geo, _GEOMETRY_KEYS, "geometry")
    geometry = {k: _number(geo, k, "geometry", positive=True) for k in ("a", "b", "h")}
    for k in ("nx", "ny"):
        v = geo.get(k)
        if not isinstance(v, int) or isinstance(v, bool) or v < 3:
            raise ConfigError(f"geometry.{k}: expected an integer >= 3")
        geometry[k] = v
    loads_raw = raw.get("loads", {})
    _reject_unknown(loads_raw, _LOAD_KEYS, "loads")
    loads = {}
    for k in _LOAD_KEYS:
        v = loads_raw.get(k, 0.0)
        if isinstance(v, str):
            p = Path(v)
            loads[k] = str(p if p.is_absolute() else base / p)
        elif isinstance(v, dict):
            _reject_unknown(v, ("sine",), f"loads.{k}")
            loads[k] = {"sine": _number(v, "sine", f"loads.{k}")}
        elif isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v):
            loads[k] = float(v)
        else:
            raise ConfigError(f"loads.{k}: expected a number, a CSV path or {{'sine': amplitude}}")
    bc_raw = raw.get("bc", {e: {"type": "clamped"} for e in EDGES})
    _reject_unknown(bc_raw, EDGES, "bc")
    bc = {}
    for e in EDGES:
        if e not in bc_raw:
            raise ConfigError(f"bc.{e}: missing edge")
        spec = bc_raw[e]
        _reject_unknown(spec, _EDGE_KEYS, f"bc.{e}")
        kind = spec.get("type")
        if kind not in _EDGE_TYPES:
            raise ConfigError(f"bc.{e}.type: expected one of {_EDGE_TYPES}")
        tw = spec.get("twisting")
        if tw is not None and tw not in (DISPLACEMENT, TRACTION):
            raise ConfigError(f"bc.{e}.twisting: expected 'displacement' or 'traction'")
        kinds = spec.get("kinds", {})
        _reject_unknown(kinds, KINEMATIC_NAMES, f"bc.{e}.kinds")
        for f, v in kinds.items():
            if v not in (DISPLACEMENT, TRACTION):
                raise ConfigError(f"bc.{e}.kinds.{f}: expected 'displacement' or 'traction'")
        values = spec.get("values", {})
        _reject_unknown(values, KINEMATIC_NAMES + PAIR_NAMES, f"bc.{e}.values")
        vals = {f: _number(values, f, f"bc.{e}.values") for f in values}
        bc[e] = {"type": kind, "twisting": tw, "kinds": dict(kinds), "values": vals}
    run_raw = raw.get("run", {})
    _reject_unknown(run_raw, _RUN_KEYS, "run")
    run = {**_RUN_KEYS, **run_raw}
    if run["variant"] not in VARIANTS:
        raise ConfigError(f"run.variant: expected one of {VARIANTS}")
    if run["solver"] not in ("direct", "cg"):
        raise ConfigError("run.solver: expected 'direct' or 'cg'")
    run["tol"] = _number(run, "tol", "run", positive=True)
    if not isinstance(run["plot"], list) or any(p not in CSV_HEADER[2:] for p in run["plot"]):
        raise ConfigError("run.plot: expected a list of field names")
    return {"material": material, "geometry": geometry, "loads": loads, "bc": bc, "run": run}


def moduli_from_config(cfg: dict) -> CosseratModuli:
    m = cfg["material"]
    return CosseratModuli(m["lambda"], m["mu"], m["mu_c"], m["beta"], m["gamma"], m["epsilon"])


def read_grid_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gridded table: first row (blank, x...), then rows (y, values...)."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    try:
        x = np.array([float(v) for v in rows[0][1:]])
        y = np.array([float(r[0]) for r in rows[1:]])
        z = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"{path}: malformed load grid ({exc})") from exc
    if z.shape != (y.size, x.size) or x.size < 2 or y.size < 2:
        raise ConfigError(f"{path}: load grid must be at least 2 x 2 and rectangular")
    return x, y, z


def _load_field(value, grid) -> float | np.ndarray:
    if isinstance(value, float):
        return value
    X, Y = grid.mesh()
    if isinstance(value, dict):
        return value["sine"] * np.sin(math.pi * X / grid.a) * np.sin(math.pi * Y / grid.b)
    x, y, z = read_grid_csv(value)
    if x[0] > 0 or x[-1] < grid.a or y[0] > 0 or y[-1] < grid.b:
        raise ConfigError(f"{value}: load grid does not cover the plate")
    interp = RegularGridInterpolator((y, x), z, method="linear")
    return interp(np.stack([Y.ravel(), X.ravel()], axis=1)).reshape(grid.shape)


def problem_from_config(cfg: dict) -> PlateProblem:
    g = cfg["geometry"]
    material = moduli_from_config(cfg)
    bc = {}
    for e, spec in cfg["bc"].items():
        if spec["type"] == "clamped":
            ebc = EdgeBC.clamped()
        elif spec["type"] == "free":
            ebc = EdgeBC.free()
        else:
            ebc = EdgeBC.simply_supported(e)
        kinds = list(ebc.kinds)
        if spec["twisting"]:
            kinds[6:] = [spec["twisting"]] * 3
        for f, k in spec["kinds"].items():
            kinds[KINEMATIC_NAMES.index(f)] = k
        bc[e] = EdgeBC(tuple(kinds)).with_values(**spec["values"])
    prob = PlateProblem(g["a"], g["b"], g["h"], g["nx"], g["ny"], material, bc=bc)
    loads = {k: _load_field(v, prob.grid) for k, v in cfg["loads"].items()}
    return prob.with_(loads=PlateLoads(**loads))


def _problem_at(cfg: dict, n: int) -> PlateProblem:
    """The config problem on an n x n grid, loads re-evaluated there."""
    g = dict(cfg["geometry"], nx=n, ny=n)
    return problem_from_config({**cfg, "geometry": g})


# -- outputs --------------------------------------------------------------------

@contextmanager
def _locked(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    lock = out / ".lock"
    fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    try:
        yield
    finally:
        os.close(fd)
        lock.unlink(missing_ok=True)


def write_fields_csv(path: Path, problem: PlateProblem, solution) -> None:
    X, Y = problem.grid.mesh()
    cols = [X.ravel(), Y.ravel()]
    for arr in (solution.kinematics.array, solution.strains.array, solution.stresses.array):
        cols.extend(a.ravel() for a in arr)
    data = np.stack(cols, axis=1)
    with open(path, "w", newline="") as fh:
        fh.write(f"# {CSV_VERSION}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in data:
            w.writerow([repr(float(v)) for v in row])


def read_fields_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Inverse of the fields writer (flat columns keyed by header name)."""
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != f"# {CSV_VERSION}":
            raise ValidationError(f"{path}: unsupported fields format {first!r}")
        rows = list(csv.reader(fh))
    header = tuple(rows[0])
    if header != CSV_HEADER:
        raise ValidationError(f"{path}: unexpected header")
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return {name: data[:, k] for k, name in enumerate(header)}


_RAMP = ((49, 54, 149), (69, 117, 180), (116, 173, 209), (171, 217, 233), (224, 243, 248),
         (255, 255, 191), (254, 224, 144), (253, 174, 97), (244, 109, 67), (215, 48, 39), (165, 0, 38))


def _segments(Z: np.ndarray, level: float):
    """Marching squares: line segments (in index space) of Z = level."""
    ny, nx = Z.shape
    segs = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            corners = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
            vals = [Z[c[1], c[0]] for c in corners]
            pts = []
            for k in range(4):
                (x0, y0), (x1, y1) = corners[k], corners[(k + 1) % 4]
                v0, v1 = vals[k], vals[(k + 1) % 4]
                if (v0 - level) * (v1 - level) < 0:
                    t = (level - v0) / (v1 - v0)
                    pts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
            for k in range(0, len(pts) - 1, 2):
                segs.append((pts[k], pts[k + 1]))
    return segs


def contour_svg(Z: np.ndarray, title: str, size: int = 400) -> str:
    """Cell shading by level band plus 11 linear contour levels."""
    ny, nx = Z.shape
    lo, hi = float(np.min(Z)), float(np.max(Z))
    span = hi - lo if hi > lo else 1.0
    levels = [lo + span * k / 10 for k in range(11)]
    sx, sy = size / max(nx - 1, 1), size / max(ny - 1, 1)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 20}" height="{size + 40}">',
           f'<text x="10" y="15" font-size="12">{title} [{lo:.6g}, {hi:.6g}]</text>',
           '<g transform="translate(10,30)">']
    for j in range(ny - 1):
        for i in range(nx - 1):
            v = 0.25 * (Z[j, i] + Z[j, i + 1] + Z[j + 1, i] + Z[j + 1, i + 1])
            r, g, b = _RAMP[min(10, int(10 * (v - lo) / span + 0.5))]
            out.append(f'<rect x="{i * sx:.2f}" y="{(ny - 2 - j) * sy:.2f}" width="{sx + 0.3:.2f}" '
                       f'height="{sy + 0.3:.2f}" fill="rgb({r},{g},{b})"/>')
    for lev in levels:
        for (x0, y0), (x1, y1) in _segments(Z, lev):
            out.append(f'<line x1="{x0 * sx:.2f}" y1="{(ny - 1 - y0) * sy:.2f}" x2="{x1 * sx:.2f}" '
                       f'y2="{(ny - 1 - y1) * sy:.2f}" stroke="black" stroke-width="0.6"/>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"


def _field(solution, name: str) -> np.ndarray:
    for names, arr in ((KINEMATIC_NAMES, solution.kinematics.array), (STRAIN_NAMES, solution.strains.array),
                       (STRESS_NAMES, solution.stresses.array)):
        if name in names:
            return arr[names.index(name)]
    raise ValidationError(f"unknown field {name!r}")


def _total_energy(problem: PlateProblem, solution) -> float:
    grid = problem.grid
    w = grid.trapezoid_weights()
    E = solution.strains.array
    S = solution.stresses.array
    return float(0.5 * np.sum(w * np.sum(S * E, axis=0)))


def _json_dump(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not serializable: {type(o)}")


def run_solve(cfg: dict, variant: str | None = None):
    problem = problem_from_config(cfg)
    run = cfg["run"]
    variant = variant or run["variant"]
    if variant == "full":
        sol = solve(problem, method=run["solver"], tol=run["tol"])
    else:
        sol = solve_reduced(problem, variant, method=run["solver"], tol=run["tol"])
    return problem, sol


def summary_of(problem: PlateProblem, sol) -> dict:
    res = sol.residuals
    groups = {g: {k: v for k, v in m.items() if k != "seconds"} for g, m in sol.metadata["groups"].items()}
    return {
        "format": CSV_VERSION,
        "variant": sol.variant,
        "grid": [problem.nx, problem.ny],
        "material_class": classify_material(problem.material).klass.value,
        "residuals": {
            "max_discrete": res["max_discrete"],
            "relative_max_discrete": res["max_discrete"] / res["data_scale"] if res["data_scale"] > 1e-300 else res["max_discrete"],
            "discrete_max": res["discrete_max"],
            "discrete_interior_rms": res["discrete_interior_rms"],
            "strong_interior_rms": res["strong_interior_rms"],
        },
        "strain_energy": _total_energy(problem, sol),
        "W_max_abs": float(np.max(np.abs(sol.kinematics["W"]))),
        "solver": groups,
    }


# -- verify ---------------------------------------------------------------------

def _rec(name, value, tol, passed=None, **extra):
    ok = bool(value <= tol) if passed is None else bool(passed)
    r = {"check": name, "value": float(value), "tolerance": float(tol), "pass": ok}
    r.update(extra)
    return r


def verify_checks(cfg: dict, quick: bool = False, seed: int = 0) -> list[dict]:
    from . import hpr_verify as hv

    rng = np.random.default_rng(seed)
    m = moduli_from_config(cfg)
    h = cfg["geometry"]["h"]
    variant = cfg["run"]["variant"]
    checks: list[dict] = []
    klass = classify_material(m)
    if klass.klass is Admissibility.INVALID:
        return [_rec("material", 1.0, 0.0, False, detail=f"violated {klass.violated}")]
    if variant == "full" and (m.mu_c == 0 or m.epsilon == 0):
        return [_rec("model", 1.0, 0.0, False,
                     detail="full model needs mu_c > 0 and epsilon > 0; use variant 'decoupled' for mu_c = 0")]

    # 3D constitutive round trip
    try:
        p = primed_constants(m)
        g, c = rng.standard_normal((2, 50, 3, 3))
        s, mu = cosserat3d.hooke_forward(g, c, m)
        g2, c2 = cosserat3d.hooke_inverse(s, mu, p)
        err = max(np.max(np.abs(g2 - g)) / np.max(np.abs(g)), np.max(np.abs(c2 - c)) / np.max(np.abs(c)))
        checks.append(_rec("constitutive_round_trip", err, 1e-12))
    except SingularModuliError as exc:
        checks.append(_rec("constitutive_round_trip", 0.0, 0.0, True, skipped=str(exc)))

    # Gauss rule exact on the thickness polynomials
    quad = abs(float(GAUSS_WEIGHTS @ GAUSS_NODES ** 8) - 2.0 / 9.0)
    checks.append(_rec("thickness_quadrature", quad, 1e-14))

    # plate energy closed form vs thickness quadrature, and gradient check
    if variant == "full":
        cmap = build_compliance(m, h)
    else:
        Bb, Bt = variant_basis(variant)
        cmap = build_reduced_compliance(m, h, np.hstack([Bb, Bt]))
    if variant == "full":
        S = StressSet(rng.standard_normal((20, 40)))
        loads = PlateLoads(*rng.standard_normal((4, 40)))
        e1 = np.asarray(energy_density(S, loads, cmap))
        e2 = np.asarray(quadrature_energy_density(S, loads, m, h))
        checks.append(_rec("energy_quadrature", float(np.max(np.abs(e1 - e2)) / np.max(np.abs(e2))), 1e-12))
    s0 = rng.standard_normal(cmap.size)
    gl = PlateLoads(0.3, -0.2, 0.1, 0.05)
    if variant == "full":
        def phi(s):
            return float(quadrature_energy_density(StressSet(s), gl, m, h))
    else:
        def phi(s):
            return float(energy_density(s, gl, cmap))
    checks.append(_rec("energy_gradient", gradient_check(cmap, phi, s0, gl), 1e-8))

    # solve
    problem, sol = run_solve(cfg)
    res = sol.residuals
    scale = res["data_scale"] if res["data_scale"] > 1e-300 else 1.0
    checks.append(_rec("plate_residual", res["max_discrete"] / scale, 1e-10))
    rec = hv.reconstruct_faces(problem, sol)
    checks.append(_rec("face_conditions", rec, 1e-12))
    st = hv.stationarity_check(sol, problem, 20, seed)
    checks.append(_rec("hpr_stationarity", st["max_normalized"], 1e-8))

    # rigid kernel of the traction-only operator
    if variant == "full":
        small = problem.with_(nx=9, ny=9, loads=PlateLoads(), bc={e: EdgeBC.free() for e in EDGES}, source=None)
        ns = hv.null_space_report(small)
        checks.append(_rec("null_space_dimension", abs(ns["dimension"] - 6), 0.0))
        checks.append(_rec("null_space_alignment", ns["max_principal_angle"], 1e-8))

    if quick:
        checks.append({"check": "mms_convergence", "skipped": True, "pass": True})
        checks.append({"check": "reconstruction_convergence", "skipped": True, "pass": True})
    else:
        mm = hv.mms_convergence(problem, (17, 33, 65), variant=variant)
        orders = mm["orders"][-1]
        worst = float(np.nanmax(np.abs(orders - 2.0)))
        checks.append(_rec("mms_convergence", worst, 0.15,
                           orders=[None if np.isnan(o) else float(o) for o in orders]))
        ro = hv.reconstruction_order(lambda n: _problem_at(cfg, n), sol.variant, sizes=(33, 65))
        # the observed order depends on edge layers and corner data; require decrease only
        checks.append(_rec("reconstruction_convergence", ro["residuals"][-1] / ro["residuals"][0], 1.0,
                           bool(ro["residuals"][-1] < ro["residuals"][0]), order=ro["order"]))
    return checks


# -- commands ---------------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
        m = moduli_from_config(cfg)
    except (ConfigError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    klass = classify_material(m)
    print(json.dumps(cfg, indent=2, sort_keys=True))
    print(f"material: {klass.klass.value}")
    if klass.violated:
        print("violated: " + ", ".join(klass.violated))
    return EXIT_CONFIG if klass.klass is Admissibility.INVALID else EXIT_OK


def cmd_solve(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.plot:
            bad = [p for p in args.plot if p not in CSV_HEADER[2:]]
            if bad:
                raise ConfigError(f"--plot: unknown field(s) {bad}")
            cfg["run"]["plot"] = list(args.plot)
        if classify_material(moduli_from_config(cfg)).klass is Admissibility.INVALID:
            raise ConfigError("material is not admissible")
        problem, sol = run_solve(cfg, args.variant)
    except (ConfigError, ValidationError, SingularModuliError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out = Path(args.out)
    try:
        with _locked(out):
            write_fields_csv(out / "fields.csv", problem, sol)
            _json_dump(out / "summary.json", summary_of(problem, sol))
            for name in cfg["run"]["plot"]:
                (out / f"{name}.svg").write_text(contour_svg(_field(sol, name), name))
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {out / 'fields.csv'} (max discrete residual {sol.residuals['max_discrete']:.3e})")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        checks = verify_checks(cfg, quick=args.quick)
    except (SolverError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValidationError, SingularModuliError) as exc:
        checks = [_rec("model", 1.0, 0.0, False, detail=str(exc))]
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        if c.get("skipped"):
            print(f"SKIP {c['check']}")
        else:
            print(f"{status} {c['check']}: {c['value']:.3e} (tol {c['tolerance']:.1e})")
    ok = all(c["pass"] for c in checks)
    if args.out:
        try:
            out = Path(args.out)
            with _locked(out):
                _json_dump(out / "report.json", {"checks": checks, "pass": ok})
        except OSError as exc:
            print(f"io error: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cosserat-plate", description="Cosserat plate batch solver")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="check a config and classify the material")
    v.add_argument("config")
    v.set_defaults(func=cmd_validate)
    s = sub.add_parser("solve", help="solve the plate problem and write fields")
    s.add_argument("config")
    s.add_argument("--out", required=True)
    s.add_argument("--variant", choices=VARIANTS)
    s.add_argument("--plot", nargs="*", metavar="FIELD")
    s.set_defaults(func=cmd_solve)
    r = sub.add_parser("verify", help="run the verification checks")
    r.add_argument("config")
    r.add_argument("--quick", action="store_true", help="skip refinement studies")
    r.add_argument("--out", help="directory for report.json")
    r.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
