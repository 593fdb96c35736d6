"""Command-line front end.

Every pipeline is a subcommand writing deterministic JSON/CSV artifacts:
``manifold``, ``homoclinic``, ``continue``, ``orbit``, ``horseshoe``,
``slice``, ``mesh`` and ``reproduce-paper``.  Flags override a
``key=value`` config file; defaults are the canonical parameters
(c=-5/2, delta=1, b=0.1, order 100 in 2-D and 50 in 4-D), so
``reproduce-paper`` needs no configuration at all.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance, dynamics, serialize
from . import manifold2d as m2
from . import manifold4d as m4
from .continuation import ProblemTemplate, continue_parameter, fit_from_records
from .errors import ConfigError, FitInvalidError, HenonclinicError
from .homoclinic import (
    MismatchProblem,
    distance_profile,
    find_homoclinic,
    mirror_solution,
    root_series_errors,
    seed_grid,
)
from .maps import CubicMap2D, CubicMap4D

OUTDIR_ENV = "HENONCLINIC_OUTDIR"

DEFAULT_ORDER = {"2d": 100, "4d": 50}
DEFAULT_EPSILON = {"2d": 2e-14, "4d": 4e-15}
DEFAULT_BOUND = {"2d": 1.6, "4d": 1.16}
DEFAULT_SEED_RESOLUTION = {"2d": 33, "4d": 5}


@dataclass
class RunConfig:
    """Validated common settings of one CLI invocation."""

    map: str
    c: float
    delta: float
    b: float
    order: int
    epsilon: float
    bound: float
    tol: float
    max_iters: int
    outdir: Path
    seed: int
    threads: int

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        sel = args.map
        cfg = cls(
            map=sel,
            c=args.c,
            delta=args.delta,
            b=args.b,
            order=args.order if args.order is not None else DEFAULT_ORDER[sel],
            epsilon=args.epsilon
            if args.epsilon is not None
            else DEFAULT_EPSILON[sel],
            bound=args.bound if args.bound is not None else DEFAULT_BOUND[sel],
            tol=args.tol,
            max_iters=args.max_iters,
            outdir=Path(
                args.outdir
                if args.outdir is not None
                else os.environ.get(OUTDIR_ENV, ".")
            ),
            seed=args.seed,
            threads=args.threads,
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.order < 1:
            raise ConfigError(f"order must be >= 1, got {self.order}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.bound <= 0:
            raise ConfigError(f"bound must be positive, got {self.bound}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ConfigError(f"max-iters must be >= 1, got {self.max_iters}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")

    def build_map(self):
        try:
            if self.map == "2d":
                return CubicMap2D(c=self.c, delta=self.delta)
            return CubicMap4D(c=self.c, delta=self.delta, b=self.b)
        except (HenonclinicError, ValueError) as exc:
            raise ConfigError(f"invalid map parameters: {exc}") from exc

    def as_dict(self, command: str, **extras) -> dict:
        doc = {
            "command": command,
            "map": self.map,
            "c": self.c,
            "delta": self.delta,
            "order": self.order,
            "epsilon": self.epsilon,
            "bound": self.bound,
            "tol": self.tol,
            "max_iters": self.max_iters,
            "seed": self.seed,
            "threads": self.threads,
        }
        if self.map == "4d":
            doc["b"] = self.b
        doc.update(extras)
        return doc


def _build_series(cfg: RunConfig, mapping, branch: str):
    if cfg.map == "2d":
        return m2.compute_series_2d(mapping, branch, cfg.order)
    return m4.compute_series_4d(mapping, branch, cfg.order)


def _build_problem(cfg: RunConfig, mapping) -> MismatchProblem:
    return MismatchProblem(
        _build_series(cfg, mapping, "unstable"),
        _build_series(cfg, mapping, "stable"),
    )


def _parse_floats(text: str, n: int | None = None) -> list[float]:
    try:
        values = [float(x) for x in text.replace(";", ",").split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"cannot parse float list {text!r}") from exc
    if n is not None and len(values) != n:
        raise ConfigError(f"expected {n} comma-separated floats, got {text!r}")
    return values


def _profile_payload(cfg: RunConfig, series) -> dict:
    if cfg.map == "2d":
        prof = m2.validity_profile(series, cfg.epsilon, cfg.bound, 1000)
        return {
            "epsilon": prof.epsilon,
            "tau": prof.tau,
            "samples": [[t, e] for t, e in prof.samples],
        }
    prof = m4.validity_profile(
        series, cfg.epsilon, cfg.bound, n_samples=301, threads=cfg.threads
    )
    return {
        "epsilon": prof.epsilon,
        "r_valid": prof.r_valid,
        "thetas": list(prof.thetas),
        "radii": prof.radii.tolist(),
        "errors": [row.tolist() for row in prof.errors],
    }


def cmd_manifold(cfg: RunConfig, args) -> int:
    mapping = cfg.build_map()
    branches = (
        ("unstable", "stable") if args.branch == "both" else (args.branch,)
    )
    config = cfg.as_dict("manifold", branch=args.branch)
    for branch in branches:
        series = _build_series(cfg, mapping, branch)
        payload = {
            "series": series.to_dict(),
            "validity": _profile_payload(cfg, series),
        }
        out = cfg.outdir / f"manifold_{branch}.json"
        serialize.write_json(out, "manifold", config, payload)
        certified = payload["validity"].get("tau", payload["validity"].get("r_valid"))
        print(f"{branch}: order {cfg.order}, certified radius {certified} "
              f"at epsilon {cfg.epsilon} -> {out}")
    return 0


def _solve_from_seeds(cfg: RunConfig, args, prob: MismatchProblem):
    if args.start is not None:
        seeds = [np.asarray(_parse_floats(args.start, prob.dim))]
    else:
        resolution = (
            args.seed_resolution
            if args.seed_resolution is not None
            else DEFAULT_SEED_RESOLUTION[cfg.map]
        )
        seeds = seed_grid(prob, (-cfg.bound, cfg.bound), resolution)[
            : args.seed_limit
        ]
    last_error = None
    for seed in seeds:
        try:
            sol = find_homoclinic(prob, seed, tol=cfg.tol, max_iters=cfg.max_iters)
        except HenonclinicError as exc:
            last_error = exc
            continue
        if args.start is None and sol.root_params[0] < 0:
            sol = mirror_solution(sol)  # canonical representative of the pair
        return sol
    raise HenonclinicError(
        f"no homoclinic root found from {len(seeds)} seeds"
        + (f" (last failure: {last_error})" if last_error else "")
    )


def cmd_homoclinic(cfg: RunConfig, args) -> int:
    mapping = cfg.build_map()
    prob = _build_problem(cfg, mapping)
    sol = _solve_from_seeds(cfg, args, prob)
    err_u, err_s = root_series_errors(prob, sol.root_params)
    config = cfg.as_dict(
        "homoclinic", n_min=args.n_min, n_max=args.n_max, start=args.start
    )
    serialize.write_json(
        cfg.outdir / "homoclinic.json",
        "homoclinic",
        config,
        {
            "root_params": sol.root_params.tolist(),
            "point": sol.point.tolist(),
            "residual": sol.residual,
            "transversality_det": sol.transversality_det,
            "newton_iters": sol.newton_iters,
            "series_error_unstable": err_u,
            "series_error_stable": err_s,
        },
    )
    prof = distance_profile(mapping, sol.point, args.n_min, args.n_max)
    serialize.write_csv(
        cfg.outdir / "distance_profile.csv",
        "distance-profile",
        config,
        ["n", "d_n"],
        prof.entries,
    )
    print(f"root {sol.root_params.tolist()} -> point {sol.point.tolist()}")
    print(
        f"residual {sol.residual:.3e}, det {sol.transversality_det:.6e}, "
        f"min d_n {prof.min_distance:.3e} at n={prof.argmin}"
    )
    return 0


def cmd_continue(cfg: RunConfig, args) -> int:
    mapping = cfg.build_map()
    if args.param == "b" and cfg.map == "2d":
        raise ConfigError("parameter b exists only for the 4-D map")
    prob = _build_problem(cfg, mapping)
    start_sol = _solve_from_seeds(cfg, args, prob)
    tmpl = ProblemTemplate(
        base_map=mapping, order=cfg.order, tol=cfg.tol, max_iters=cfg.max_iters
    )
    records = continue_parameter(
        tmpl,
        args.param,
        getattr(args, "from"),
        args.to,
        start_sol.root_params,
        initial_step=args.initial_step,
        min_step=args.min_step,
    )
    config = cfg.as_dict(
        "continue",
        param=args.param,
        start=getattr(args, "from"),
        end=args.to,
        initial_step=args.initial_step,
        min_step=args.min_step,
        fit_window=args.fit_window,
    )
    dim = prob.dim
    header = (
        ["param", "step_used"]
        + [f"root_{i}" for i in range(dim)]
        + [f"point_{i}" for i in range(dim)]
        + ["residual", "det"]
    )
    rows = []
    for rec in records:
        if rec.solution is None:
            rows.append(
                [rec.param_value, rec.step_used]
                + [math.nan] * (2 * dim)
                + [math.nan, math.nan]
            )
            continue
        s = rec.solution
        rows.append(
            [rec.param_value, rec.step_used]
            + s.root_params.tolist()
            + s.point.tolist()
            + [s.residual, s.transversality_det]
        )
    rows = [
        [("nan" if isinstance(v, float) and math.isnan(v) else v) for v in row]
        for row in rows
    ]
    serialize.write_csv(
        cfg.outdir / "continuation.csv", "continuation", config, header, rows
    )
    solved = [r for r in records if r.solution is not None]
    summary = {
        "last_success": solved[-1].param_value,
        "last_failure": records[-1].param_value
        if records[-1].solution is None
        else None,
        "records": len(records),
    }
    if args.param == "delta":
        try:
            fit = fit_from_records(records, window=args.fit_window)
            summary["fit"] = {
                "amplitude_a": fit.amplitude_a,
                "delta_c": fit.delta_c,
                "residual_rms": fit.residual_rms,
                "points_used": fit.points_used,
            }
        except FitInvalidError as exc:
            summary["fit"] = None
            summary["fit_error"] = str(exc)
    serialize.write_json(
        cfg.outdir / "tangency_fit.json", "tangency-fit", config, summary
    )
    print(
        f"{len(solved)} solutions, last success {args.param} = "
        f"{summary['last_success']!r}"
    )
    if summary.get("fit"):
        print(f"fit delta_c = {summary['fit']['delta_c']}")
    return 0


def cmd_orbit(cfg: RunConfig, args) -> int:
    mapping = cfg.build_map()
    start = _parse_floats(args.start, mapping.dim)
    record = dynamics.iterate_orbit(
        mapping, start, args.steps, escape_radius=args.escape_radius
    )
    config = cfg.as_dict(
        "orbit",
        start=start,
        steps=args.steps,
        escape_radius=args.escape_radius,
        escaped=record.escaped,
        escape_index=record.escape_index,
    )
    names = ["x", "y"] if mapping.dim == 2 else ["x1", "y1", "x2", "y2"]
    rows = [[i] + p.tolist() for i, p in enumerate(record.points)]
    serialize.write_csv(
        cfg.outdir / "orbit.csv", "orbit", config, ["n"] + names, rows
    )
    print(
        f"{len(record.points)} points, escaped={record.escaped} "
        f"(index {record.escape_index})"
    )
    return 0


def cmd_horseshoe(cfg: RunConfig, args) -> int:
    q, in_image, in_both = dynamics.horseshoe_strips(args.a, args.grid_n)
    bands = dynamics.count_vertical_bands(in_image)
    extents = dynamics.band_extents(in_image)
    config = cfg.as_dict("horseshoe", a=args.a, grid_n=args.grid_n)
    serialize.write_json(
        cfg.outdir / "horseshoe.json",
        "horseshoe",
        config,
        {
            "square_points": len(q),
            "image_points": len(in_image),
            "both_points": len(in_both),
            "band_count": bands,
            "band_extents": [list(e) for e in extents],
        },
    )
    rows = [[x, y, "image"] for x, y in in_image] + [
        [x, y, "both"] for x, y in in_both
    ]
    serialize.write_csv(
        cfg.outdir / "horseshoe_strips.csv",
        "horseshoe-strips",
        config,
        ["x", "y", "set"],
        rows,
    )
    print(f"{bands} vertical bands; extents {extents}")
    return 0


def cmd_slice(cfg: RunConfig, args) -> int:
    if cfg.map != "4d":
        raise ConfigError("phase-space slices are defined for the 4-D map")
    mapping = cfg.build_map()
    if args.seeds_file is not None:
        text = Path(args.seeds_file).read_text(encoding="utf-8")
        seed_rows = [
            _parse_floats(line, 4)
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        ]
    elif args.seeds is not None:
        seed_rows = [_parse_floats(part, 4) for part in args.seeds.split(";") if part]
    else:
        raise ConfigError("slice needs --seeds or --seeds-file")
    points = dynamics.slice_4d(
        mapping,
        seed_rows,
        args.steps,
        y2_star=args.y2_star,
        tolerance=args.tolerance,
    )
    config = cfg.as_dict(
        "slice",
        steps=args.steps,
        y2_star=args.y2_star,
        tolerance=args.tolerance,
        n_seeds=len(seed_rows),
    )
    serialize.write_csv(
        cfg.outdir / "slice.csv",
        "slice",
        config,
        ["x1", "y1", "x2", "source_index"],
        [[p.x1, p.y1, p.x2, p.source_index] for p in points],
    )
    print(f"{len(points)} slice points from {len(seed_rows)} seeds")
    return 0


def cmd_mesh(cfg: RunConfig, args) -> int:
    mapping = cfg.build_map()
    series = _build_series(cfg, mapping, args.branch)
    bounds = (
        (-cfg.bound, cfg.bound)
        if args.bounds is None
        else tuple(_parse_floats(args.bounds, 2))
    )
    mesh = dynamics.sample_manifold_grid(series, bounds, args.resolution)
    config = cfg.as_dict(
        "mesh", branch=args.branch, bounds=list(bounds), resolution=args.resolution
    )
    out = cfg.outdir / f"mesh_{args.branch}.txt"
    serialize.write_mesh(out, config, mesh)
    print(f"{mesh.points.shape[0]}x{mesh.points.shape[1]} mesh -> {out}")
    return 0


def cmd_reproduce_paper(cfg: RunConfig, args) -> int:
    results = acceptance.run_all(seed=cfg.seed)
    config = cfg.as_dict("reproduce-paper")
    serialize.write_json(
        cfg.outdir / "acceptance.json",
        "acceptance",
        config,
        {
            "results": [
                {
                    "index": r.index,
                    "title": r.title,
                    "passed": r.passed,
                    "detail": r.detail,
                }
                for r in results
            ],
            "passed": sum(r.passed for r in results),
            "total": len(results),
        },
    )
    width = max(len(r.title) for r in results)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.index:2d}. {r.title:<{width}}")
        print(f"        {r.detail}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    return 0 if n_pass == len(results) else 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value file; flags override it")
    sub.add_argument("--map", choices=("2d", "4d"), default="2d")
    sub.add_argument("--c", type=float, default=-2.5)
    sub.add_argument("--delta", type=float, default=1.0)
    sub.add_argument("--b", type=float, default=0.1)
    sub.add_argument("--order", type=int, default=None)
    sub.add_argument("--epsilon", type=float, default=None)
    sub.add_argument(
        "--bound",
        type=float,
        default=None,
        help="half-width of the trusted parameter domain",
    )
    sub.add_argument("--tol", type=float, default=1e-13)
    sub.add_argument("--max-iters", type=int, default=60)
    sub.add_argument("--outdir", default=None)
    sub.add_argument("--seed", type=int, default=2024)
    sub.add_argument("--threads", type=int, default=1)


def _add_seed_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--start", default=None, help="explicit root-parameter seed")
    sub.add_argument("--seed-resolution", type=int, default=None)
    sub.add_argument("--seed-limit", type=int, default=50)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="henonclinic",
        description=(
            "Invariant manifolds, homoclinic points and tangencies of "
            "cubic Henon-type maps"
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("manifold", help="series coefficients + validity profile")
    _add_common(sub)
    sub.add_argument(
        "--branch", choices=("unstable", "stable", "both"), default="both"
    )
    sub.set_defaults(handler=cmd_manifold)

    sub = subs.add_parser("homoclinic", help="locate a homoclinic point")
    _add_common(sub)
    _add_seed_options(sub)
    sub.add_argument("--n-min", type=int, default=-40)
    sub.add_argument("--n-max", type=int, default=40)
    sub.set_defaults(handler=cmd_homoclinic)

    sub = subs.add_parser("continue", help="continue a root along delta or b")
    _add_common(sub)
    _add_seed_options(sub)
    sub.add_argument("--param", choices=("delta", "b"), required=True)
    sub.add_argument("--from", type=float, required=True)
    sub.add_argument("--to", type=float, required=True)
    sub.add_argument("--initial-step", type=float, default=1e-3)
    sub.add_argument("--min-step", type=float, default=1e-6)
    sub.add_argument("--fit-window", type=float, default=0.002)
    sub.set_defaults(handler=cmd_continue)

    sub = subs.add_parser("orbit", help="iterate an orbit with escape detection")
    _add_common(sub)
    sub.add_argument("--start", required=True)
    sub.add_argument("--steps", type=int, default=1000)
    sub.add_argument("--escape-radius", type=float, default=1e3)
    sub.set_defaults(handler=cmd_orbit)

    sub = subs.add_parser("horseshoe", help="three-strip construction data")
    _add_common(sub)
    sub.add_argument("--a", type=float, default=5.0)
    sub.add_argument("--grid-n", type=int, default=1000)
    sub.set_defaults(handler=cmd_horseshoe)

    sub = subs.add_parser("slice", help="3-D phase-space slice of 4-D orbits")
    _add_common(sub)
    sub.add_argument("--seeds", default=None, help="semicolon-separated 4-tuples")
    sub.add_argument("--seeds-file", default=None)
    sub.add_argument("--steps", type=int, default=2000)
    sub.add_argument("--tolerance", type=float, default=1e-4)
    sub.add_argument("--y2-star", type=float, default=dynamics.ELLIPTIC_Y)
    sub.set_defaults(handler=cmd_slice)

    sub = subs.add_parser("mesh", help="uniform parameter-grid manifold mesh")
    _add_common(sub)
    sub.add_argument("--branch", choices=("unstable", "stable"), default="unstable")
    sub.add_argument("--bounds", default=None, help="lo,hi parameter bounds")
    sub.add_argument("--resolution", type=int, default=200)
    sub.set_defaults(handler=cmd_mesh)

    sub = subs.add_parser(
        "reproduce-paper", help="run the acceptance table against published values"
    )
    _add_common(sub)
    sub.set_defaults(handler=cmd_reproduce_paper)

    return parser


def _load_config_args(path: str, parser: argparse.ArgumentParser) -> list[str]:
    """Turn a key=value file into CLI tokens (validated by argparse)."""
    tokens = []
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        tokens += [f"--{key.replace('_', '-')}", value]
    return tokens


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # expand --config into flags placed before the explicit ones so that
    # command-line flags win
    if argv and not argv[0].startswith("-"):
        command, rest = argv[0], argv[1:]
        config_path = None
        cleaned = []
        i = 0
        while i < len(rest):
            if rest[i] == "--config":
                if i + 1 >= len(rest):
                    parser.error("--config needs a path")
                config_path = rest[i + 1]
                i += 2
            elif rest[i].startswith("--config="):
                config_path = rest[i].split("=", 1)[1]
                i += 1
            else:
                cleaned.append(rest[i])
                i += 1
        if config_path is not None:
            try:
                file_tokens = _load_config_args(config_path, parser)
            except (OSError, ConfigError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
            argv = [command] + file_tokens + cleaned
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        cfg.outdir.mkdir(parents=True, exist_ok=True)
        return args.handler(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HenonclinicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
