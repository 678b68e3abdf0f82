"""Command-line surface: scan, exact, bounds, simulate, converge.

Every command emits one self-describing record (JSON by default, CSV with
--format csv) containing the schema version, the command, its semantic
parameters and the results.  Seeds default to a fixed constant so bare
invocations are reproducible; execution details (worker count, output path)
are deliberately excluded from the record, so rerunning with a different
--workers yields byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any

from . import convergence, exact, scan, simulate, theory
from .errors import (
    EnumerationCapError,
    InvalidPermutationError,
    MonorunError,
    ParameterError,
)

SCHEMA_VERSION = "monorun/1"
DEFAULT_SEED = 104729  # the 10000th prime; fixed so bare runs reproduce

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID_PERMUTATION = 2
EXIT_PARAMETER = 3
EXIT_ENUMERATION_CAP = 4


@dataclass(frozen=True)
class OutputRecord:
    """One command's reproducible output envelope."""

    schema_version: str
    command: str
    params: dict[str, Any]
    seed: int | None
    results: dict[str, Any]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _fraction_blob(fr: Fraction) -> dict[str, Any]:
    return {
        "fraction": f"{fr.numerator}/{fr.denominator}",
        "decimal": float(fr),
    }


def _distribution_blob(emp: simulate.EmpiricalDistribution) -> dict[str, Any]:
    blob: dict[str, Any] = {
        "statistic": emp.statistic,
        "k": emp.k,
        "counts": [[int(v), int(c)] for v, c in sorted(emp.counts.items())],
        "mean": emp.mean(),
    }
    if emp.statistic == scan.STRICT_BLOCKS:
        rate = theory.strict_block_rate(emp.n, emp.k)
        tv, stderr = simulate.empirical_tv_to_poisson(emp, rate)
        blob.update(
            rate=rate,
            tv_to_poisson=tv,
            tv_stderr=stderr,
            tv_bound=theory.strict_tv_bound(emp.n, emp.k),
        )
    return blob


def _cmd_scan(args) -> OutputRecord:
    sample = scan.validate_permutation(args.perm)
    profile = scan.maximal_run_profile(sample)
    reports = [scan.block_count_report(sample, k) for k in args.k]
    strict_positions = {
        k: [[pos, direction.value] for pos, direction in scan.strict_block_positions(sample, k)]
        for k in args.k
    }
    results = {
        "n": int(sample.size),
        "longest_block": scan.longest_monotone_block(sample),
        "runs": [
            {"start": r.start, "length": r.length, "direction": r.direction.value}
            for r in profile.runs
        ],
        "reports": [
            {
                "k": r.k,
                "monotone_windows": r.monotone_windows,
                "strict_blocks": r.strict_blocks,
                "strict_positions": strict_positions[r.k],
            }
            for r in reports
        ],
    }
    return OutputRecord(
        schema_version=SCHEMA_VERSION,
        command="scan",
        params={"perm": [int(v) for v in args.perm], "ks": list(args.k)},
        seed=None,
        results=results,
    )


def _cmd_exact(args) -> OutputRecord:
    pmf = exact.enumerate_distribution(args.n, args.k, args.stat)
    results: dict[str, Any] = {
        "n": pmf.n,
        "k": pmf.k,
        "statistic": pmf.statistic,
        "total": pmf.total,
        "pmf": [[int(v), int(c)] for v, c in sorted(pmf.weights.items())],
        "mean": _fraction_blob(pmf.mean()),
    }
    if pmf.statistic != scan.LONGEST_BLOCK:
        results["void_probability"] = _fraction_blob(
            Fraction(pmf.void_weight(), pmf.total)
        )
    return OutputRecord(
        schema_version=SCHEMA_VERSION,
        command="exact",
        params={"n": args.n, "k": args.k, "statistic": args.stat},
        seed=None,
        results=results,
    )


def _cmd_bounds(args) -> OutputRecord:
    approx = theory.poisson_approximation(args.n, args.k)
    terms = theory.overlapping_window_terms(args.n, args.k)
    results = {
        "n": approx.n,
        "k": approx.k,
        "rate": approx.rate,
        "rate_asymptotic": approx.rate_asymptotic,
        "tv_bound": approx.tv_bound,
        "void_probability": approx.void_prob,
        "void_error_bound": approx.void_error_bound,
        "void_gap_bound": theory.void_gap_bound(args.k),
        "overlapping_window_terms": {
            "squared_over_rate": terms.squared_over_rate,
            "cross_over_rate": terms.cross_over_rate,
            "joint_over_rate": terms.joint_over_rate,
        },
    }
    return OutputRecord(
        schema_version=SCHEMA_VERSION,
        command="bounds",
        params={"n": args.n, "k": args.k},
        seed=None,
        results=results,
    )


def _cmd_simulate(args) -> OutputRecord:
    config = simulate.TrialConfig(
        n=args.n,
        ks=tuple(args.k),
        trials=args.trials,
        seed=args.seed,
        workers=args.workers,
    )
    dists = simulate.run_trials(config)
    results = {
        "n": args.n,
        "trials": args.trials,
        "distributions": [_distribution_blob(d) for d in dists],
    }
    return OutputRecord(
        schema_version=SCHEMA_VERSION,
        command="simulate",
        params={"n": args.n, "ks": list(args.k), "trials": args.trials},
        seed=args.seed,
        results=results,
    )


def _cmd_converge(args) -> OutputRecord:
    grid = convergence.exp_grid(args.grid_min, args.grid_max)
    schedule = convergence.resolve_trial_schedule(grid, args.trials)
    points = convergence.trajectory(
        grid,
        schedule,
        args.seed,
        x=args.x,
        workers=args.workers,
        mode=args.gamma_mode,
    )
    results: dict[str, Any] = {
        "grid": grid,
        "grid_rounding": convergence.GRID_ROUNDING,
        "schedule": schedule,
        "window_x": args.x,
        "window_mode": args.gamma_mode,
        "points": [asdict(p) for p in points],
    }
    if not args.skip_coin:
        coin_points = convergence.coin_comparison(
            grid, schedule, args.seed, p=args.coin_p, workers=args.workers
        )
        results["coin"] = {
            "p": args.coin_p,
            "points": [asdict(p) for p in coin_points],
        }
    return OutputRecord(
        schema_version=SCHEMA_VERSION,
        command="converge",
        params={
            "grid_min": args.grid_min,
            "grid_max": args.grid_max,
            "trials": args.trials,
            "x": args.x,
            "gamma_mode": args.gamma_mode,
            "coin_p": None if args.skip_coin else args.coin_p,
        },
        seed=args.seed,
        results=results,
    )


def _csv_rows(record: OutputRecord) -> tuple[list[str], list[list]]:
    """Flatten a record into one table; shape depends on the command."""
    res = record.results
    if record.command == "scan":
        runs = ";".join(
            f"{r['start']}:{r['length']}:{r['direction']}" for r in res["runs"]
        )
        header = ["n", "k", "monotone_windows", "strict_blocks", "longest_block", "runs"]
        if res["reports"]:
            rows = [
                [res["n"], r["k"], r["monotone_windows"], r["strict_blocks"],
                 res["longest_block"], runs]
                for r in res["reports"]
            ]
        else:
            rows = [[res["n"], "", "", "", res["longest_block"], runs]]
        return header, rows
    if record.command == "exact":
        header = ["n", "k", "statistic", "value", "weight", "total"]
        k = "" if res["k"] is None else res["k"]
        return header, [
            [res["n"], k, res["statistic"], v, c, res["total"]] for v, c in res["pmf"]
        ]
    if record.command == "bounds":
        terms = res["overlapping_window_terms"]
        header = [
            "n", "k", "rate", "rate_asymptotic", "tv_bound", "void_probability",
            "void_error_bound", "void_gap_bound", "squared_over_rate",
            "cross_over_rate", "joint_over_rate",
        ]
        return header, [[
            res["n"], res["k"], res["rate"], res["rate_asymptotic"],
            res["tv_bound"], res["void_probability"], res["void_error_bound"],
            res["void_gap_bound"], terms["squared_over_rate"],
            terms["cross_over_rate"], terms["joint_over_rate"],
        ]]
    if record.command == "simulate":
        header = ["n", "statistic", "k", "value", "count", "trials", "seed"]
        rows = []
        for dist in res["distributions"]:
            k = "" if dist["k"] is None else dist["k"]
            for v, c in dist["counts"]:
                rows.append([res["n"], dist["statistic"], k, v, c, res["trials"], record.seed])
        return header, rows
    if record.command == "converge":
        header = [
            "n", "target", "mean_longest", "median_longest", "ratio", "trials",
            "window_x", "window_hit_rate", "window_probability", "window_in_range",
            "coin_target", "coin_mean", "coin_ratio",
        ]
        coin = {p["n"]: p for p in res.get("coin", {}).get("points", [])}
        rows = []
        for p in res["points"]:
            c = coin.get(p["n"])
            rows.append([
                p["n"], p["target"], p["mean_longest"], p["median_longest"],
                p["ratio"], p["trials"], p["window_x"], p["window_hit_rate"],
                p["window_probability"], p["window_in_range"],
                c["target"] if c else "", c["mean_run"] if c else "",
                c["ratio"] if c else "",
            ])
        return header, rows
    raise MonorunError(f"no CSV flattening for command {record.command!r}")


def _render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return record.to_json()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header, rows = _csv_rows(record)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    parser.add_argument("--out", metavar="FILE", help="write output to FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monorun",
        description=(
            "Consecutive monotone block statistics of random permutations: "
            "scanners, Poisson approximations, exact enumeration, simulation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="scan one permutation")
    p_scan.add_argument("perm", nargs="+", type=int, help="permutation of 1..n")
    p_scan.add_argument(
        "--k", action="append", type=int, default=[], help="window length (repeatable)"
    )
    _add_output_options(p_scan)
    p_scan.set_defaults(handler=_cmd_scan)

    p_exact = sub.add_parser("exact", help="exact law by exhaustive enumeration")
    p_exact.add_argument("--n", type=int, required=True)
    p_exact.add_argument("--k", type=int, default=None)
    p_exact.add_argument(
        "--stat",
        choices=(scan.LONGEST_BLOCK, scan.MONOTONE_WINDOWS, scan.STRICT_BLOCKS),
        default=scan.MONOTONE_WINDOWS,
    )
    _add_output_options(p_exact)
    p_exact.set_defaults(handler=_cmd_exact)

    p_bounds = sub.add_parser("bounds", help="closed-form rates and error bounds")
    p_bounds.add_argument("--n", type=int, required=True)
    p_bounds.add_argument("--k", type=int, required=True)
    _add_output_options(p_bounds)
    p_bounds.set_defaults(handler=_cmd_bounds)

    p_sim = sub.add_parser("simulate", help="seeded Monte Carlo trials")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument(
        "--k", action="append", type=int, default=[], help="window length (repeatable)"
    )
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument("--workers", type=int, default=1)
    _add_output_options(p_sim)
    p_sim.set_defaults(handler=_cmd_simulate)

    p_conv = sub.add_parser("converge", help="trajectory along the exponential grid")
    p_conv.add_argument("--grid-min", type=int, default=16)
    p_conv.add_argument("--grid-max", type=int, required=True)
    p_conv.add_argument(
        "--trials", type=int, default=None,
        help="trials per grid point (default: fixed-budget schedule)",
    )
    p_conv.add_argument("--x", type=float, default=2.0, help="window half-width")
    p_conv.add_argument("--gamma-mode", choices=("gamma", "round"), default="gamma")
    p_conv.add_argument("--coin-p", type=float, default=0.5)
    p_conv.add_argument("--skip-coin", action="store_true")
    p_conv.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_conv.add_argument("--workers", type=int, default=1)
    _add_output_options(p_conv)
    p_conv.set_defaults(handler=_cmd_converge)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        record = args.handler(args)
    except InvalidPermutationError as err:
        print(f"monorun: invalid permutation: {err}", file=sys.stderr)
        return EXIT_INVALID_PERMUTATION
    except EnumerationCapError as err:
        print(f"monorun: {err}", file=sys.stderr)
        return EXIT_ENUMERATION_CAP
    except ParameterError as err:
        print(f"monorun: invalid parameter: {err}", file=sys.stderr)
        return EXIT_PARAMETER
    except MonorunError as err:
        print(f"monorun: {err}", file=sys.stderr)
        return EXIT_ERROR
    text = _render(record, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
