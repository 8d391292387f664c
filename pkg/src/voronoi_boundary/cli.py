"""Batch command-line front end.

Every subcommand writes a single machine-readable envelope (JSON or CSV) to
stdout or --out, with enough metadata to rerun it bit-identically:

    vbl mean --corner
    vbl mean --corner-offset 0:5:0.25 --format csv
    vbl table1
    vbl secrecy isolation --location corner --lambda-l 10 --lambda-e 0.1:10:log
    vbl simulate cell --at corner --trials 100000 --rng-seed 7

Exit codes: 0 success, 2 invalid arguments, 3 quadrature tolerance failure
(the failed rows are flagged and the best estimates kept).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

from . import __version__, mc_sim, moments, secrecy
from .quadrature import QuadSpec, ToleranceNotMetError
from .void_geometry import SeedLocation

__all__ = ["main", "parse_range", "build_parser"]

_DEFAULT_RNG_SEED = 12345


def parse_range(text: str) -> list[float]:
    """Parse a sweep: single value, "start:stop:step", or "start:stop:log[N]".

    Arithmetic sweeps include the stop value when it lands on the step grid.
    Logarithmic sweeps use N points if given, else 10 per decade plus one.
    """
    if ":" not in text:
        return [float(text)]
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range {text!r} is not start:stop:step or start:stop:log")
    start, stop = float(parts[0]), float(parts[1])
    tail = parts[2]
    if tail.startswith("log"):
        if start <= 0.0 or stop <= start:
            raise ValueError(f"log range needs 0 < start < stop, got {text!r}")
        if tail == "log":
            decades = math.log10(stop / start)
            count = max(2, int(round(10.0 * decades)) + 1)
        else:
            count = int(tail[3:])
            if count < 2:
                raise ValueError(f"log range needs at least 2 points, got {text!r}")
        ratio = (stop / start) ** (1.0 / (count - 1))
        return [start * ratio**i for i in range(count)]
    step = float(tail)
    if step <= 0.0 or stop < start:
        raise ValueError(f"range {text!r} needs stop >= start and step > 0")
    count = int(math.floor((stop - start) / step + 1e-9))
    return [start + i * step for i in range(count + 1)]


# ----------------------------------------------------------------------
# envelope
# ----------------------------------------------------------------------

def _envelope(command: str, parameters: dict, rows: list, rng_seed=None) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "rows": rows,
        "tool_version": __version__,
        "rng_seed": rng_seed,
    }


def _to_json(env: dict) -> str:
    return json.dumps(env, indent=2, allow_nan=False) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".6g")
    return str(v)


def _to_csv(env: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# command: {env['command']}\n")
    buf.write(f"# parameters: {json.dumps(env['parameters'])}\n")
    buf.write(f"# tool_version: {env['tool_version']}\n")
    if env.get("rng_seed") is not None:
        buf.write(f"# rng_seed: {env['rng_seed']}\n")
    rows = env["rows"]
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        header = list(rows[0].keys())
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(row.get(k)) for k in header])
    return buf.getvalue()


def _emit(env: dict, fmt: str, out: Optional[str]) -> None:
    text = _to_json(env) if fmt == "json" else _to_csv(env)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _cmd_mean(args, parser) -> int:
    try:
        spec = QuadSpec(rel_tol=args.tol) if args.tol else moments.MEAN_SPEC
    except ValueError as exc:
        parser.error(str(exc))
    rows = []
    failed = False

    def quadrant_row(a: float) -> dict:
        nonlocal failed
        status = "ok"
        try:
            m = moments.mean_quadrant(a, spec)
            value, err = m.value, m.err_estimate
        except ToleranceNotMetError as exc:
            status = "tolerance_not_met"
            failed = True
            value, err = exc.result.value, exc.result.err_estimate
        return {
            "location": "corner" if a == 0.0 else "quadrant_boundary",
            "position": a,
            "mean": value,
            "err_estimate": err,
            "lower_bound": moments.lower_bound_mean_quadrant(a).value,
            "upper_bound": moments.upper_bound_mean_quadrant(a).value,
            "status": status,
        }

    def halfplane_row(h: float) -> dict:
        nonlocal failed
        status = "ok"
        try:
            m = moments.mean_halfplane(h, spec)
            value, err = m.value, m.err_estimate
        except ToleranceNotMetError as exc:
            status = "tolerance_not_met"
            failed = True
            value, err = exc.result.value, exc.result.err_estimate
        lower = max(
            moments.lower_bound_mean_halfplane(h).value,
            moments.trivial_lower_bound_mean_halfplane(h).value,
        )
        return {
            "location": "edge" if h == 0.0 else "halfplane_offset",
            "position": h,
            "mean": value,
            "err_estimate": err,
            "lower_bound": lower,
            "upper_bound": None,
            "status": status,
        }

    if args.corner:
        m = moments.mean_corner()
        rows.append(
            {
                "location": "corner",
                "position": 0.0,
                "mean": m.value,
                "err_estimate": m.err_estimate,
                "lower_bound": moments.lower_bound_mean_quadrant(0.0).value,
                "upper_bound": moments.upper_bound_mean_quadrant(0.0).value,
                "status": "ok",
            }
        )
        params = {"mode": "corner"}
    elif args.edge:
        m = moments.mean_edge(spec)
        rows.append(
            {
                "location": "edge",
                "position": 0.0,
                "mean": m.value,
                "err_estimate": m.err_estimate,
                "lower_bound": moments.lower_bound_mean_halfplane(0.0).value,
                "upper_bound": None,
                "status": "ok",
            }
        )
        params = {"mode": "edge"}
    elif args.corner_offset is not None:
        values = _parse_range_or_exit(args.corner_offset, parser)
        rows = [quadrant_row(a) for a in values]
        params = {"mode": "corner_offset", "values": values}
    else:
        values = _parse_range_or_exit(args.halfplane_offset, parser)
        rows = [halfplane_row(h) for h in values]
        params = {"mode": "halfplane_offset", "values": values}
    params["rel_tol"] = spec.rel_tol

    _emit(_envelope("mean", params, rows), args.format, args.out)
    return 3 if failed else 0


def _parse_range_or_exit(text: str, parser) -> list[float]:
    try:
        values = parse_range(text)
    except ValueError as exc:
        parser.error(str(exc))
    for v in values:
        if v < 0.0:
            parser.error(f"offsets must be >= 0, got {v}")
    return values


def _cmd_table1(args, parser) -> int:
    rows = []
    failed = False
    for kind in ("corner", "edge", "bulk"):
        try:
            lm = moments.location_moments(SeedLocation(kind))
        except ToleranceNotMetError:
            failed = True
            continue
        rows.append(
            {
                "location": kind,
                "mean": lm.mean.value,
                "variance": lm.variance,
                "k": lm.gamma.k,
                "nu": lm.gamma.nu,
            }
        )
    _emit(_envelope("table1", {}, rows), args.format, args.out)
    return 3 if failed else 0


def _cmd_secrecy(args, parser) -> int:
    location = SeedLocation(args.location)
    lambda_l = args.lambda_l
    if lambda_l <= 0.0:
        parser.error("--lambda-l must be > 0")
    try:
        lambda_es = parse_range(args.lambda_e)
    except ValueError as exc:
        parser.error(str(exc))
    if any(le <= 0.0 for le in lambda_es):
        parser.error("--lambda-e values must be > 0")

    if args.subcommand == "isolation":
        table = secrecy.isolation_comparison(lambda_l, lambda_es, location)
        rows = [
            {
                "lambda_e": r.lambda_e,
                "p": r.p,
                "p_in_isolation": r.in_isolation,
                "p_out_isolation": r.out_isolation,
            }
            for r in table
        ]
    else:
        if len(lambda_es) != 1:
            parser.error(f"secrecy {args.subcommand} takes a single --lambda-e")
        ratio = secrecy.IntensityRatio(lambda_l, lambda_es[0])
        g = moments.location_moments(location).gamma
        fn_in = secrecy.in_degree_pmf if args.subcommand == "pmf" else secrecy.in_degree_cdf
        fn_out = secrecy.out_degree_pmf if args.subcommand == "pmf" else secrecy.out_degree_cdf
        rows = [
            {
                "n": n,
                f"in_degree_{args.subcommand}": fn_in(n, ratio.p, g),
                f"out_degree_{args.subcommand}": fn_out(n, ratio.p),
            }
            for n in range(args.n_max + 1)
        ]
    params = {
        "subcommand": args.subcommand,
        "location": args.location,
        "lambda_l": lambda_l,
        "lambda_e": lambda_es,
        "n_max": args.n_max,
    }
    _emit(_envelope("secrecy", params, rows), args.format, args.out)
    return 0


def _seed_position(args, side: float, parser) -> tuple[float, float]:
    if args.seed0:
        try:
            x, y = (float(v) for v in args.seed0.split(","))
        except ValueError:
            parser.error(f"--seed0 must be X,Y, got {args.seed0!r}")
        return (x, y)
    at = args.at or "corner"
    return {
        "corner": (0.0, 0.0),
        "edge": (side / 2.0, 0.0),
        "center": (side / 2.0, side / 2.0),
    }[at]


def _cmd_simulate(args, parser) -> int:
    side = args.side
    if args.subcommand == "cell":
        seed0 = _seed_position(args, side, parser)
        try:
            cfg = mc_sim.SimConfig(
                side_L=side,
                intensity=args.intensity,
                seed0=seed0,
                trials=args.trials,
                rng_seed=args.rng_seed,
            )
        except ValueError as exc:
            parser.error(str(exc))
        stats = mc_sim.simulate_cell_area(cfg)
        rows = [
            {
                "position_x": seed0[0],
                "position_y": seed0[1],
                "mean": stats.mean,
                "variance": stats.variance,
                "std_err": stats.std_err_mean,
                "trials": stats.trials,
            }
        ]
        params = {
            "side": side,
            "intensity": args.intensity,
            "seed0": list(seed0),
            "trials": args.trials,
        }
    elif args.subcommand == "grid":
        try:
            cells = mc_sim.grid_scan(
                args.delta,
                args.n,
                args.trials,
                side_L=side,
                intensity=args.intensity,
                rng_seed=args.rng_seed,
            )
        except ValueError as exc:
            parser.error(str(exc))
        rows = [
            {
                "position_x": c.x,
                "position_y": c.y,
                "mean": c.stats.mean,
                "variance": c.stats.variance,
                "std_err": c.stats.std_err_mean,
                "trials": c.stats.trials,
            }
            for c in cells
        ]
        params = {
            "side": side,
            "intensity": args.intensity,
            "delta": args.delta,
            "n": args.n,
            "trials": args.trials,
        }
    else:
        seed0 = _seed_position(args, side, parser)
        if args.lambda_l <= 0.0 or args.lambda_e <= 0.0:
            parser.error("--lambda-l and --lambda-e must be > 0")
        try:
            in_pmf, out_pmf = mc_sim.simulate_secure_degrees(
                args.lambda_l,
                args.lambda_e,
                seed0,
                side,
                args.trials,
                args.rng_seed,
            )
        except ValueError as exc:
            parser.error(str(exc))
        rows = [
            {"kind": "in_degree", "n": n, "probability": float(p)}
            for n, p in enumerate(in_pmf)
        ] + [
            {"kind": "out_degree", "n": n, "probability": float(p)}
            for n, p in enumerate(out_pmf)
        ]
        params = {
            "side": side,
            "lambda_l": args.lambda_l,
            "lambda_e": args.lambda_e,
            "seed0": list(seed0),
            "trials": args.trials,
        }
    _emit(
        _envelope(f"simulate {args.subcommand}", params, rows, rng_seed=args.rng_seed),
        args.format,
        args.out,
    )
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="FILE", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vbl",
        description="Poisson-Voronoi cell-size moments near boundaries, "
        "secure-degree distributions, and a Monte Carlo oracle.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_mean = sub.add_parser("mean", help="mean cell size and bounds")
    mode = p_mean.add_mutually_exclusive_group(required=True)
    mode.add_argument("--corner", action="store_true")
    mode.add_argument("--edge", action="store_true")
    mode.add_argument("--corner-offset", metavar="A_RANGE")
    mode.add_argument("--halfplane-offset", metavar="H_RANGE")
    p_mean.add_argument("--tol", type=float, default=None, help="relative tolerance")
    _add_output_args(p_mean)
    p_mean.set_defaults(handler=_cmd_mean)

    p_table = sub.add_parser("table1", help="moments and Gamma fits at corner/edge/bulk")
    _add_output_args(p_table)
    p_table.set_defaults(handler=_cmd_table1)

    p_sec = sub.add_parser("secrecy", help="secure degree distributions")
    p_sec.add_argument("subcommand", choices=("pmf", "cdf", "isolation"))
    p_sec.add_argument("--location", choices=("corner", "edge", "bulk"), required=True)
    p_sec.add_argument("--lambda-l", type=float, required=True)
    p_sec.add_argument("--lambda-e", required=True, metavar="VALUE_OR_RANGE")
    p_sec.add_argument("--n-max", type=int, default=25)
    _add_output_args(p_sec)
    p_sec.set_defaults(handler=_cmd_secrecy)

    p_sim = sub.add_parser("simulate", help="Monte Carlo oracle")
    p_sim.add_argument("subcommand", choices=("cell", "grid", "degree"))
    p_sim.add_argument("--at", choices=("corner", "edge", "center"), default=None)
    p_sim.add_argument("--seed0", metavar="X,Y", default=None)
    p_sim.add_argument("--trials", type=int, default=10_000)
    p_sim.add_argument("--rng-seed", type=int, default=_DEFAULT_RNG_SEED)
    p_sim.add_argument("--side", type=float, default=10.0)
    p_sim.add_argument("--intensity", type=float, default=1.0)
    p_sim.add_argument("--delta", type=float, default=0.3)
    p_sim.add_argument("--n", type=int, default=11)
    p_sim.add_argument("--lambda-l", type=float, default=10.0)
    p_sim.add_argument("--lambda-e", type=float, default=1.0)
    _add_output_args(p_sim)
    p_sim.set_defaults(handler=_cmd_simulate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
