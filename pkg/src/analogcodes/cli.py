"""Command-line interface.

One binary, verb subcommands; every run is fully determined by its flags
(all randomness flows from explicit --seed values).  Exit codes: 0 success,
1 usage or parameter error, 2 numeric/rank failure, 3 I/O or file format
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import codes, metrics, simulate
from .matio import format_entry
from .validation import MatrixFormatError


class UsageError(ValueError):
    """Bad flags or bad config content; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_mds_flags(sub, default_mode):
    sub.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default=default_mode)
    sub.add_argument("--samples", type=int, default=1000, help="subset count for sampled mode")
    sub.add_argument("--cond-tol", type=float, default=metrics.MDS_COND_TOL)
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="analogcodes", description=__doc__)
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = verbs.add_parser("construct", help="build a generator and write it to a file")
    p.add_argument("--family", required=True, choices=["dft", "dct", "dst", "repetition", "random"])
    p.add_argument("--n", type=int, help="codeword length (transform and random families)")
    p.add_argument("--k", type=int, help="source length")
    p.add_argument("--rows", help="comma-separated row indices (transform families)")
    p.add_argument("--t", type=int, help="repetition count")
    p.add_argument("--seed", type=int, default=0, help="entry stream seed (random family)")
    p.add_argument("--normalize", action="store_true", help="rescale to encoding power gain 1")
    p.add_argument("--out", required=True, help="output generator file")
    p.set_defaults(func=cmd_construct)

    p = verbs.add_parser("analyze", help="print the metrics report of a generator file")
    p.add_argument("generator", help="generator file path")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--rel-tol", type=float, default=metrics.MDRE_REL_TOL, help="relative eigenvalue spread tolerance")
    _add_mds_flags(p, default_mode="auto")
    p.set_defaults(func=cmd_analyze)

    p = verbs.add_parser("simulate", help="run one config's MSE sweep to CSV")
    p.add_argument("config", help="JSON config file")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--json-out", help="optional JSON result path")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = verbs.add_parser("compare", help="sweep several configs on one grid, all codes rescaled to gain 1")
    p.add_argument("configs", nargs="+", help="JSON config files sharing one SNR grid")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--json-out", help="optional JSON result path")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = verbs.add_parser("mds-check", help="scan k-column submatrices for singularity")
    p.add_argument("generator", help="generator file path")
    _add_mds_flags(p, default_mode="exhaustive")
    p.set_defaults(func=cmd_mds_check)

    p = verbs.add_parser("witness", help="print a source vector with codeword weight below epsilon")
    p.add_argument("generator", help="generator file path")
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_witness)

    return parser


def _parse_rows(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"--rows must be comma-separated integers, got {text!r}") from None


def cmd_construct(args) -> int:
    family = args.family
    if family in ("dft", "dct", "dst"):
        if args.n is None:
            raise UsageError(f"--n is required for family {family}")
        if args.k is None and args.rows is None:
            raise UsageError(f"--k or --rows is required for family {family}")
        cls = {"dft": codes.DFTCode, "dct": codes.DCTCode, "dst": codes.DSTCode}[family]
        code = cls(n=args.n, k=args.k, row_indices=_parse_rows(args.rows), normalize=args.normalize)
    elif family == "repetition":
        if args.k is None or args.t is None:
            raise UsageError("--k and --t are required for family repetition")
        code = codes.RepetitionCode(k=args.k, t=args.t, normalize=args.normalize)
    else:
        if args.k is None or args.n is None:
            raise UsageError("--k and --n are required for family random")
        code = codes.RandomCode(k=args.k, n=args.n, seed=args.seed, normalize=args.normalize)
    code.fit()
    codes.save_generator(code, args.out)
    gamma = metrics.encoding_power_gain(code.generator_)
    spread = metrics.eigenvalue_spread(code.generator_)
    print(f"wrote {args.out} ({code.k_}x{code.n_} {family})")
    print(f"gamma={gamma!r} relative_eigenvalue_spread={spread!r}")
    return 0


def cmd_analyze(args) -> int:
    code = codes.load_generator(args.generator)
    report = metrics.metrics_report(
        code.generator_,
        mdre_rel_tol=args.rel_tol,
        mds_mode=args.mode,
        mds_samples=args.samples,
        mds_cond_tol=args.cond_tol,
        seed=args.seed,
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return 0
    d = report.to_dict()
    for key in ("gamma", "min_distance_ratio", "mdre", "mdre_relative_spread", "mds",
                "mds_worst_condition", "mse_lower_bound_per_sigma2"):
        print(f"{key}={d[key]!r}")
    print("eigenvalues=" + " ".join(repr(x) for x in d["eigenvalues"]))
    print(f"tolerances={d['tolerances']!r}")
    return 0


def _load_config(path) -> simulate.SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON: {exc}") from None
    try:
        return simulate.SimConfig.from_dict(payload)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _summary_lines(result: simulate.SimResult) -> str:
    first, last = result.points[0], result.points[-1]
    return (
        f"{result.code_id}: per-symbol MSE {first.mc_mse:.6e} at {first.snr_db:g} dB "
        f"down to {last.mc_mse:.6e} at {last.snr_db:g} dB ({len(result.points)} points)"
    )


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    result = simulate.run_sweep(config, workers=args.workers)
    simulate.emit_csv(result, args.out)
    if args.json_out:
        simulate.emit_json(result, args.json_out)
    print(_summary_lines(result))
    print(f"wrote {args.out}")
    return 0


def cmd_compare(args) -> int:
    configs = [_load_config(path) for path in args.configs]
    table = simulate.compare_codes(configs, workers=args.workers)
    simulate.emit_csv(table, args.out)
    if args.json_out:
        simulate.emit_json(table, args.json_out)
    print(table.to_text())
    for row in table.rows:
        print(_summary_lines(row.result))
    print(f"wrote {args.out}")
    return 0


def cmd_mds_check(args) -> int:
    code = codes.load_generator(args.generator)
    mode = args.mode
    if mode == "auto":
        mode = (
            "exhaustive"
            if math.comb(code.n_, code.k_) <= metrics.MDS_EXHAUSTIVE_LIMIT
            else "sampled"
        )
    verdict = metrics.is_mds(
        code.generator_, mode=mode, samples=args.samples, cond_tol=args.cond_tol, seed=args.seed
    )
    print(f"verdict={verdict.verdict}")
    print(
        f"worst_condition_ratio={verdict.worst_ratio!r} at columns "
        f"{list(verdict.worst_subset)} over {verdict.subsets_checked} subsets"
    )
    return 0


def cmd_witness(args) -> int:
    code = codes.load_generator(args.generator)
    u, weight = metrics.small_weight_witness(code.generator_, args.epsilon)
    if not np.any(u != 0):
        print("note: witness amplitude underflowed to zero; the all-zero vector is reported")
    print("u = " + " ".join(format_entry(complex(z)) for z in u))
    print(f"weight={weight!r} epsilon={args.epsilon!r}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (MatrixFormatError, OSError) as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
