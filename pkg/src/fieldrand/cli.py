"""Command-line entry point.

Four subcommands: ``certify`` evaluates one configuration and prints the
report, ``sweep`` runs a grid (preset or spec file) to CSV, ``compare-rwa``
does the same with the single-mode reference columns forced on, and
``diagnose-appendix`` tabulates per-mode window amplitudes for a resonant
cavity. ``--plot`` renders a PNG next to any sweep CSV.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace

from .kernels import compute_kernels
from .params import (
    ConfigError,
    FieldrandError,
    _parse_items,
    _to_float,
    config_from_items,
    parse_config_file,
    scenario_name,
)
from .randomness import certify
from .rwa import ResonantSetup, mode_amplitude_diagnostic, resonant_length
from .sweep import PRESET_NAMES, emit_csv, parse_sweep_file, preset, run_sweep

__all__ = ["main"]


def _cmd_certify(args: argparse.Namespace) -> int:
    config = parse_config_file(args.config)
    kernels = compute_kernels(config)
    report = certify(config, kernels=kernels)
    basis = report.optimal_basis
    print(f"scenario = {scenario_name(config.scenario)}")
    print("purity = %.12g" % report.purity)
    print("guessing_probability = %.12g" % report.guessing_probability)
    print("min_entropy_bits = %.12g" % report.min_entropy_bits)
    if basis is not None:
        print("basis_theta = %.12g" % basis.theta)
        print("basis_phi = %.12g" % basis.phi)
    print("kernel_err = %.3g" % kernels.error)
    return 0


def _load_spec(args: argparse.Namespace):
    if args.preset is not None:
        return preset(args.preset)
    return parse_sweep_file(args.config)


def _run_to_csv(args: argparse.Namespace, spec) -> int:
    if args.threads is not None:
        spec = replace(spec, threads=args.threads)
    result = run_sweep(spec)
    out = args.out or spec.output or ((args.preset or "sweep") + ".csv")
    emit_csv(result, out)
    failed = sum(1 for row in result.rows if row.error)
    note = f" ({failed} error rows)" if failed else ""
    print(f"wrote {len(result.rows)} rows to {out}{note}")
    if args.plot:
        from .plots import render_plot

        print(f"wrote {render_plot(result, out)}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    return _run_to_csv(args, _load_spec(args))


def _cmd_compare_rwa(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    if args.preset is not None and not spec.compare_rwa:
        raise ConfigError(
            f"preset {args.preset!r} is not a comparison sweep; "
            "use fig7-periodic or fig7-dirichlet"
        )
    return _run_to_csv(args, replace(spec, compare_rwa=True))


def _cmd_diagnose(args: argparse.Namespace) -> int:
    items = _parse_items(args.config)
    if "mode_index" not in items:
        raise ConfigError(f"{args.config}: diagnose-appendix requires mode_index")
    mode_index = int(_to_float(items.pop("mode_index"), "mode_index", args.config))
    n_max = int(_to_float(items.pop("n_max", "50"), "n_max", args.config))
    setup = ResonantSetup(mode_index)

    kind = items.setdefault("scenario", "periodic")
    if kind != "free_space" and "length" not in items:
        if "gap" not in items:
            raise ConfigError(f"{args.config}: missing required key 'gap'")
        gap = _to_float(items["gap"], "gap", args.config)
        items["length"] = repr(resonant_length(setup, gap, kind))
    config = config_from_items(items, args.config)

    rows = mode_amplitude_diagnostic(config, setup, range(1, n_max + 1))
    try:
        fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "omega_n", "rotating", "counter_rotating"])
            for n, omega_n, rotating, counter in rows:
                writer.writerow(
                    [n, "%.12g" % omega_n, "%.12g" % rotating, "%.12g" % counter]
                )
        finally:
            if args.out:
                fh.close()
    except OSError as exc:
        raise FieldrandError(f"cannot write CSV to {args.out}: {exc}") from exc
    if args.out:
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _add_sweep_io(sub: argparse.ArgumentParser) -> None:
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--preset", choices=PRESET_NAMES, help="named grid matching a published panel"
    )
    source.add_argument("--config", help="sweep spec file (key = value plus sweep.* grids)")
    sub.add_argument("--out", help="CSV output path (default: <preset>.csv or sweep.csv)")
    sub.add_argument("--threads", type=int, help="parallel evaluation threads")
    sub.add_argument(
        "--plot", action="store_true", help="also render a PNG next to the CSV"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldrand",
        description="Certified randomness from a field-coupled two-level detector.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    certify_p = sub.add_parser("certify", help="evaluate one configuration")
    certify_p.add_argument("--config", required=True, help="key = value config file")
    certify_p.set_defaults(func=_cmd_certify)

    sweep_p = sub.add_parser("sweep", help="run a parameter grid to CSV")
    _add_sweep_io(sweep_p)
    sweep_p.set_defaults(func=_cmd_sweep)

    compare_p = sub.add_parser(
        "compare-rwa", help="grid with single-mode reference columns (h_rwa, R)"
    )
    _add_sweep_io(compare_p)
    compare_p.set_defaults(func=_cmd_compare_rwa)

    diag_p = sub.add_parser(
        "diagnose-appendix", help="per-mode window amplitudes for a resonant cavity"
    )
    diag_p.add_argument("--config", required=True, help="config file with mode_index")
    diag_p.add_argument("--out", help="CSV output path (default: stdout)")
    diag_p.set_defaults(func=_cmd_diagnose)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FieldrandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
