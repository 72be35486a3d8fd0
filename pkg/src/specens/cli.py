"""Command line front end: single runs, sweeps, and synthetic data generation."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dataset import CorruptionSpec, make_half_ring, save_csv
from .errors import ConfigError
from .harness import METHODS, SWEEP_AXES, SYNTH_KINDS, RunConfig, run, run_sweep, sweep_rows, write_sweep_csv


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("data source")
    source.add_argument("--data", help="CSV file with a header row")
    source.add_argument("--label", help="name of the label column in --data")
    source.add_argument("--synth", choices=SYNTH_KINDS, help="generate a synthetic dataset instead")
    source.add_argument("--n", type=int, default=400, help="synthetic instance count")
    source.add_argument("--noise-std", type=float, default=0.05, help="synthetic jitter std")
    parser.add_argument("--k", type=int, help="final cluster count (default: from labels)")
    parser.add_argument("--d", type=int, default=0, help="retained directions after the linear map, 0 keeps all")
    parser.add_argument("--d-frac", type=float, help="retained directions as a fraction of the feature count")
    parser.add_argument("--knn", type=int, default=0, help="neighbors per node, 0 picks max(7, log2 n)")
    parser.add_argument("--unsquared", action="store_true", help="use plain distances in the kernel exponent")
    parser.add_argument("--ensemble-size", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--method", choices=METHODS, default="wsce")
    corruption = parser.add_mutually_exclusive_group()
    corruption.add_argument("--noise", type=float, help="rate of cells hit by additive unit Gaussian noise")
    corruption.add_argument("--missing", type=float, help="rate of cells replaced by mean imputation")
    parser.add_argument("--corrupt-seed", type=int, help="seed for picking corrupted cells (default: --seed)")
    parser.add_argument("--out-dir", default=".", help="where manifests and CSVs are written")


def _config_from_args(args) -> RunConfig:
    corruption = None
    if args.noise is not None:
        corruption = CorruptionSpec("noise", args.noise, args.corrupt_seed if args.corrupt_seed is not None else args.seed)
    elif args.missing is not None:
        corruption = CorruptionSpec("missing", args.missing, args.corrupt_seed if args.corrupt_seed is not None else args.seed)
    return RunConfig(
        data_path=args.data,
        label_column=args.label,
        synth=args.synth,
        synth_n=args.n,
        synth_noise_std=args.noise_std,
        k=args.k,
        d=args.d,
        d_frac=args.d_frac,
        knn=args.knn,
        unsquared=args.unsquared,
        ensemble_size=args.ensemble_size,
        repeats=args.repeats,
        seed=args.seed,
        method=args.method,
        corruption=corruption,
    )


def _cmd_run(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dump_dir = out_dir / "intermediates" if args.dump_intermediates else None
    manifest = run(_config_from_args(args), dump_dir=dump_dir)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(manifest.to_json())
    if manifest.accuracy_mean is None:
        print(f"{manifest.method} on {manifest.dataset_name}: no labels, accuracy not computed")
    else:
        print(
            f"{manifest.method} on {manifest.dataset_name}: "
            f"accuracy {manifest.accuracy_mean:.4f} +/- {manifest.accuracy_std:.4f} "
            f"over {len(manifest.accuracies)} repeats"
        )
    print(f"manifest: {manifest_path}")
    return 0


def _cmd_sweep(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    methods = [m.strip() for m in args.methods.split(",") if m.strip()] if args.methods else None
    if methods:
        for method in methods:
            if method not in METHODS:
                raise ConfigError(f"unknown method '{method}' in --methods")
    cells = run_sweep(_config_from_args(args), args.axis, values, methods)
    csv_path = out_dir / "sweep.csv"
    write_sweep_csv(cells, csv_path)
    for value, method, mean, std in sweep_rows(cells):
        print(f"{args.axis}={value:g} {method}: mean={mean:.4f} std={std:.4f}")
    failed = [cell for cell in cells if cell.error is not None]
    for cell in failed:
        print(f"failed cell {args.axis}={cell.value:g} {cell.method}: {cell.error}", file=sys.stderr)
    print(f"sweep table: {csv_path}")
    return 0


def _cmd_synth(args) -> int:
    ds = make_half_ring(args.n, args.noise_std, args.seed)
    save_csv(ds, args.out)
    print(f"wrote {ds.n}x{ds.m} {args.kind} dataset to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specens", description="Weighted spectral cluster ensembles")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one method on one dataset")
    _add_run_options(p_run)
    p_run.add_argument("--dump-intermediates", action="store_true", help="write first-repeat matrices as CSVs")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="rerun over a grid of corruption rates or d fractions")
    _add_run_options(p_sweep)
    p_sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated ascending grid values")
    p_sweep.add_argument("--methods", help="comma-separated methods (default: --method)")
    p_sweep.set_defaults(func=_cmd_sweep, dump_intermediates=False)

    p_synth = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    p_synth.add_argument("--kind", choices=SYNTH_KINDS, default="half_ring")
    p_synth.add_argument("--n", type=int, default=400)
    p_synth.add_argument("--noise-std", type=float, default=0.05)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
