"""Command-line interface: solve, field, compare and verify subcommands.

Outputs are deterministic: coefficient and field tables are CSV with full
%.17g precision, metadata is JSON carrying every parameter, the quadrature
resolution actually used, residual norms, wall time and a hash of the
physical configuration so downstream commands can check file compatibility.
Exit codes: 0 success, 1 computational failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import verification
from .baselines import LscSpec, direct_foldy_solve, lsc_solve
from .config import CoeffGrid, PhysicalConfig, TruncationSpec
from .diagnostics import compare, system_residual
from .errors import ConfigMismatchError, DomainError, QuarterLatticeError
from .field import energy_defect, sample_total_field
from .kernel import eval_K, eval_L2, manifold_M, manifold_dM
from .solver import assemble, solve

_FLOAT_FMT = "%.17g"


def _config_hash(cfg: PhysicalConfig) -> str:
    canon = ";".join(f"{name}={_FLOAT_FMT % value}" for name, value in (
        ("a", cfg.a), ("k", cfg.k), ("s", cfg.s), ("theta", cfg.theta_inc)))
    canon += f";monopole={cfg.monopole}"
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _add_physical(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=float, required=True, help="wavenumber (rad/length)")
    parser.add_argument("--s", type=float, required=True, help="lattice spacing")
    parser.add_argument("--a", type=float, required=True, help="scatterer radius")
    parser.add_argument("--theta", type=float, required=True, help="incidence angle (rad)")
    parser.add_argument("--monopole", default="hankel",
                        choices=("hankel", "log_form", "ratio"))


def _add_truncation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, default=16, help="outer truncation")
    parser.add_argument("--P", type=int, default=None, help="inner truncation (default ceil(1.2 N))")
    parser.add_argument("--T", type=int, default=30, help="asymptotic index threshold")
    parser.add_argument("--Q", type=int, default=512, help="starting quadrature nodes")
    parser.add_argument("--Qmax", type=int, default=4096, help="max quadrature nodes")
    parser.add_argument("--tol", type=float, default=1e-10, help="node-doubling gate tolerance")


def _physical(args) -> PhysicalConfig:
    return PhysicalConfig(k=args.k, s=args.s, a=args.a, theta_inc=args.theta,
                          monopole=args.monopole)


def _truncation(args) -> TruncationSpec:
    return TruncationSpec(N=args.N, P=args.P, asymp_threshold=args.T,
                          quad_nodes=args.Q, quad_max=args.Qmax, quad_tol=args.tol)


def _write_coeffs(path: Path, grid: CoeffGrid) -> None:
    n = grid.N
    mm, nn = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    rows = np.column_stack([
        CoeffGrid(mm + 0j).to_vector().real, CoeffGrid(nn + 0j).to_vector().real,
        grid.to_vector().real, grid.to_vector().imag])
    np.savetxt(path, rows, fmt=["%d", "%d", _FLOAT_FMT, _FLOAT_FMT],
               delimiter=",", header="m,n,re,im", comments="")


def _read_coeffs(path: Path) -> CoeffGrid:
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    n = int(rows[:, 0].max())
    if rows.shape[0] != (n + 1) ** 2:
        raise DomainError(f"coefficient file {path} is not a full (N+1)^2 table")
    grid = np.zeros((n + 1, n + 1), dtype=complex)
    grid[rows[:, 0].astype(int), rows[:, 1].astype(int)] = rows[:, 2] + 1j * rows[:, 3]
    return CoeffGrid(grid)


def _meta_path(path: Path) -> Path:
    return path.with_suffix(".json")


def _write_meta(path: Path, payload: dict) -> None:
    _meta_path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_solve(args) -> int:
    cfg = _physical(args)
    spec = _truncation(args)
    out = Path(args.output)
    start = time.perf_counter()
    if args.method == "qlnn":
        grid = solve(cfg, spec)
        coupling, b = assemble(cfg, spec)
        system = np.eye(coupling.matrix.shape[0]) - coupling.matrix
        resid = float(np.max(np.abs(system @ grid.to_vector() - b)) / np.max(np.abs(b)))
        extra = {"quad_nodes_used": coupling.quad_nodes_used,
                 "gate_delta": coupling.gate_delta,
                 "solve_residual_inf": resid}
    elif args.method == "direct":
        grid = direct_foldy_solve(cfg, args.N)
        extra = {"system_residual_max": float(system_residual(grid, cfg).max())}
    elif args.method == "lsc":
        grid = lsc_solve(cfg, args.N, LscSpec(n_colloc=args.n_colloc))
        extra = {"n_colloc": args.n_colloc,
                 "system_residual_max": float(system_residual(grid, cfg).max())}
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown method {args.method}")
    wall = time.perf_counter() - start
    _write_coeffs(out, grid)
    meta = {"k": cfg.k, "s": cfg.s, "a": cfg.a, "theta": cfg.theta_inc,
            "monopole": cfg.monopole, "N": spec.N, "P": spec.P,
            "asymp_threshold": spec.asymp_threshold, "quad_nodes": spec.quad_nodes,
            "quad_max": spec.quad_max, "quad_tol": spec.quad_tol,
            "method": args.method, "wall_time_s": wall,
            "config_hash": _config_hash(cfg), **extra}
    _write_meta(out, meta)
    print(f"wrote {out} and {_meta_path(out)}")
    return 0


def cmd_field(args) -> int:
    cfg = _physical(args)
    coeff_path = Path(args.coeffs)
    meta_file = _meta_path(coeff_path)
    if not coeff_path.exists() or not meta_file.exists():
        raise DomainError(f"coefficient file or metadata missing for {coeff_path}")
    meta = json.loads(meta_file.read_text())
    if meta.get("config_hash") != _config_hash(cfg):
        raise ConfigMismatchError(
            "coefficient file was produced for a different physical configuration")
    grid = _read_coeffs(coeff_path)
    start = time.perf_counter()
    fg = sample_total_field(grid, cfg, (args.xmin, args.xmax), (args.ymin, args.ymax),
                            args.nx, args.ny)
    wall = time.perf_counter() - start
    out = Path(args.output)
    xx, yy = np.meshgrid(fg.x, fg.y)
    rows = np.column_stack([xx.ravel(), yy.ravel(),
                            fg.values.ravel().real, fg.values.ravel().imag])
    np.savetxt(out, rows, fmt=_FLOAT_FMT, delimiter=",",
               header="x,y,re,im", comments="")
    _write_meta(out, {"source_coeffs": str(coeff_path), "config_hash": _config_hash(cfg),
                      "nx": args.nx, "ny": args.ny,
                      "x_range": [args.xmin, args.xmax], "y_range": [args.ymin, args.ymax],
                      "wall_time_s": wall})
    print(f"wrote {out} and {_meta_path(out)}")
    return 0


def cmd_compare(args) -> int:
    grid_a = _read_coeffs(Path(args.path_a))
    grid_b = _read_coeffs(Path(args.path_b))
    if grid_a.N != grid_b.N:
        raise DomainError(f"shape mismatch: N = {grid_a.N} vs {grid_b.N}")
    report = compare(grid_a, grid_b, Path(args.path_a).stem, Path(args.path_b).stem)
    out = Path(args.output)
    n = grid_a.N
    mm, nn = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    rows = np.column_stack([mm.ravel(), nn.ravel(), report.abs_diff.ravel()])
    np.savetxt(out, rows, fmt=["%d", "%d", _FLOAT_FMT], delimiter=",",
               header="m,n,abs_diff", comments="")
    _write_meta(out, {"method_a": report.method_a, "method_b": report.method_b,
                      "max_diff": report.max_diff,
                      "interior_max_diff": report.interior_max_diff})
    print(json.dumps({"max_diff": report.max_diff,
                      "interior_max_diff": report.interior_max_diff}))
    return 0


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _suite_kernel(cfg, spec, rng) -> list[dict]:
    kc = cfg.kernel_constants()
    z_all = np.exp(2j * np.pi * rng.random(256))
    kdev = np.max(np.abs(eval_K(z_all, manifold_M(z_all, kc), kc)))
    kthr = 1e-12 * float(np.max(np.abs(eval_L2(z_all, kc))))
    # the self-inverse identity is pointwise only on the upper half circle:
    # M sees z only through z + 1/z, which identifies z with its conjugate
    z_up = np.exp(1j * np.pi * rng.random(128))
    minv = np.max(np.abs(manifold_M(manifold_M(z_up, kc), kc) - z_up))
    recip = np.max(np.abs(manifold_M(z_all, kc) - manifold_M(1 / z_all, kc)))
    h = 1e-7
    # keep away from z = +/-1 where M' vanishes and the relative FD
    # comparison degenerates
    angles = 0.1 + (np.pi - 0.2) * rng.random(64)
    angles[32:] += np.pi
    zd = np.exp(1j * angles)
    fd = (manifold_M(zd + h, kc) - manifold_M(zd - h, kc)) / (2 * h)
    dm = manifold_dM(zd, kc)
    ddev = float(np.max(np.abs(dm - fd) / np.abs(dm)))
    return [
        {"name": "kernel_vanishes_on_manifold", "deviation": float(kdev), "threshold": kthr},
        {"name": "manifold_self_inverse", "deviation": float(minv), "threshold": 1e-10},
        {"name": "manifold_reciprocal", "deviation": float(recip), "threshold": 1e-10},
        {"name": "manifold_derivative_fd", "deviation": ddev, "threshold": 1e-6},
    ]


def _suite_appendix_c(cfg, spec, rng) -> list[dict]:
    spec2048 = TruncationSpec(N=4, quad_nodes=max(spec.quad_nodes, 2048))
    worst = 0.0
    for z in np.exp(2j * np.pi * rng.random(32)):
        for n in (0, 1, 3, 7):
            for q in (0, 1, 3, 7):
                rep = verification.appendix_c_check(complex(z), n, q, cfg, spec2048)
                worst = max(worst, rep["max_deviation"])
    return [{"name": "residue_identities", "deviation": worst, "threshold": 1e-9}]


def _suite_functional_eq(cfg, spec, rng) -> list[dict]:
    state = verification.SpectralState.from_coeffs(direct_foldy_solve(cfg, spec.N), cfg)
    radius = 0.7  # interior radius: truncated tails decay like radius^(N+1)
    threshold = max(1e-6, 20 * radius ** spec.N)
    worst = 0.0
    for u, v in zip(2 * np.pi * rng.random(64), 2 * np.pi * rng.random(64)):
        res = verification.functional_equation_residual(
            state, cfg, radius * np.exp(1j * u), radius * np.exp(1j * v))
        worst = max(worst, abs(res))
    return [{"name": "functional_equation_interior", "deviation": worst,
             "threshold": threshold, "radius": radius, "N": spec.N}]


def _suite_energy(cfg, spec, rng) -> list[dict]:
    defect = float(energy_defect(direct_foldy_solve(cfg, spec.N), cfg).max())
    if cfg.monopole == "log_form":
        thr = 1e-10
    else:
        thr = 10 * (cfg.ka / math.log(cfg.ka)) ** 2
    return [{"name": f"energy_{cfg.monopole}", "deviation": defect, "threshold": thr}]


def cmd_verify(args) -> int:
    cfg = _physical(args)
    spec = _truncation(args)
    rng = np.random.default_rng(args.seed)
    suites = {"kernel": _suite_kernel, "appendix_c": _suite_appendix_c,
              "functional_eq": _suite_functional_eq, "energy": _suite_energy}
    names = list(suites) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        checks.extend(suites[name](cfg, spec, rng))
    for check in checks:
        check["passed"] = bool(check["deviation"] < check["threshold"])
    report = {"seed": args.seed, "suites": names, "checks": checks,
              "passed": all(c["passed"] for c in checks)}
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _load_config_file(path: str) -> dict:
    values = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"config line {line!r} is not key=value")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


_CONFIG_TYPES = {"k": float, "s": float, "a": float, "theta": float, "monopole": str,
                 "N": int, "P": int, "T": int, "Q": int, "Qmax": int, "tol": float,
                 "method": str, "n_colloc": int, "seed": int}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quarterlattice",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; explicit flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute scattering coefficients")
    _add_physical(p_solve)
    _add_truncation(p_solve)
    p_solve.add_argument("--method", default="qlnn", choices=("qlnn", "direct", "lsc"))
    p_solve.add_argument("--n-colloc", dest="n_colloc", type=int, default=16)
    p_solve.add_argument("--output", required=True)
    p_solve.set_defaults(func=cmd_solve)

    p_field = sub.add_parser("field", help="sample the total field on a grid")
    _add_physical(p_field)
    p_field.add_argument("--coeffs", required=True, help="coefficient CSV from solve")
    p_field.add_argument("--xmin", type=float, default=-1.0)
    p_field.add_argument("--xmax", type=float, default=2.0)
    p_field.add_argument("--ymin", type=float, default=-1.0)
    p_field.add_argument("--ymax", type=float, default=2.0)
    p_field.add_argument("--nx", type=int, default=200)
    p_field.add_argument("--ny", type=int, default=200)
    p_field.add_argument("--output", required=True)
    p_field.set_defaults(func=cmd_field)

    p_cmp = sub.add_parser("compare", help="absolute difference of two coefficient files")
    p_cmp.add_argument("path_a")
    p_cmp.add_argument("path_b")
    p_cmp.add_argument("--output", required=True)
    p_cmp.set_defaults(func=cmd_compare)

    p_ver = sub.add_parser("verify", help="run numerical identity suites")
    _add_physical(p_ver)
    _add_truncation(p_ver)
    p_ver.add_argument("--suite", default="all",
                       choices=("kernel", "appendix_c", "functional_eq", "energy", "all"))
    p_ver.add_argument("--seed", type=int, default=2025)
    p_ver.add_argument("--output", default=None)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    # first pass: pick up --config and inject its values as defaults
    probe, _ = parser.parse_known_args(argv)
    if probe.config:
        raw = _load_config_file(probe.config)
        unknown = set(raw) - set(_CONFIG_TYPES)
        if unknown:
            _fail(DomainError(f"unknown config keys {sorted(unknown)}"), 2)
            return 2
        parser.set_defaults(**{key: _CONFIG_TYPES[key](val) for key, val in raw.items()})
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (DomainError, ConfigMismatchError, OSError, ValueError) as exc:
        return _fail(exc, 2)
    except QuarterLatticeError as exc:
        return _fail(exc, 1)


def _fail(exc: Exception, code: int) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
          file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
