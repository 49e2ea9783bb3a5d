"""Command-line entry point.

Subcommands: simulate, compare, tensor, validate, dump-generator.
Exit codes: 0 success, 1 validation failure, 2 config error.
"""

import argparse
import sys
from pathlib import Path

from .config import ConfigError, config_from_dict, load_config
from .runs import (
    build_generator,
    generator_csv,
    run_compare,
    run_trajectory,
    run_validate,
    tensor_table_csv,
    trajectory_csv,
)


def _add_common(parser):
    parser.add_argument("--config", help="YAML config file")
    parser.add_argument("--model", help="builtin model name (three_level | pe545)")
    parser.add_argument("--variant", choices=["gamma1", "gamma2"], help="spectral tensor variant")
    parser.add_argument("--form", choices=["lindblad", "redfield"], help="master-equation form")
    parser.add_argument("--secular", choices=["true", "false"], help="apply the secular approximation")
    parser.add_argument("--out", help="output path (file or directory, per subcommand)")
    parser.add_argument("--print-config", action="store_true",
                        help="echo the resolved config as YAML and exit")


def _overrides(args) -> dict:
    ov = {}
    if args.model:
        ov["model"] = args.model
    if args.variant:
        ov["variant"] = args.variant
    if args.form:
        ov["form"] = args.form
    if args.secular is not None:
        ov["secular"] = args.secular == "true"
    if args.out:
        ov["out"] = args.out
    return ov


def _load(args):
    ov = _overrides(args)
    if args.config:
        return load_config(args.config, ov)
    return config_from_dict({}, ov)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oqsim",
                                description="Open-quantum-system dynamics with secular/non-secular "
                                            "Lindblad and Redfield generators")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [
        ("simulate", "propagate one configuration and write a trajectory CSV"),
        ("compare", "run all 8 generator combinations and write panel CSVs plus a manifest"),
        ("tensor", "dump spectral-tensor tables (both variants vs the quadrature oracle)"),
        ("validate", "run the bath-oracle and generator-equivalence suite"),
        ("dump-generator", "write the dense generator matrix as CSV"),
    ]:
        sp = sub.add_parser(name, help=text)
        _add_common(sp)
        if name == "tensor":
            sp.add_argument("--points", type=int, default=25, help="grid size over [-3 Omega, 3 Omega]")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2

    if args.print_config:
        print(config.to_yaml(), end="")
        return 0

    try:
        if args.command == "simulate":
            traj = run_trajectory(config)
            Path(config.out).write_text(trajectory_csv(traj))
            print(f"wrote {config.out}")
            return 0
        if args.command == "compare":
            out_dir = args.out or "compare_out"
            manifest = run_compare(config, out_dir)
            failures = [k for k, v in manifest["panels"].items() if "error" in v]
            print(f"wrote {out_dir}/manifest.yaml ({8 - len(failures)}/8 panels)")
            return 1 if failures else 0
        if args.command == "tensor":
            from .bath import BathSpec  # grid sized from the configured bath
            from .runs import tensor_grid
            csv = tensor_table_csv(config.bath, tensor_grid(config.bath, args.points))
            out = args.out or "tensor.csv"
            Path(out).write_text(csv)
            print(f"wrote {out}")
            return 0
        if args.command == "validate":
            ok, checks = run_validate(config)
            for c in checks:
                print(c.line())
            print("validation " + ("PASSED" if ok else "FAILED"))
            return 0 if ok else 1
        if args.command == "dump-generator":
            l = build_generator(config)
            out = args.out or "generator.csv"
            Path(out).write_text(generator_csv(l))
            print(f"wrote {out}")
            return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
