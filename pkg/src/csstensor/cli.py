"""Command line front end: build, compose, analyze, sweep, verify.

Exit codes: 0 success, 1 verification failure, 2 parse/usage error,
3 construction error, 4 resource ceiling.  All randomness sits behind
``--seed`` (default fixed), so runs are reproducible by default; stdout
tables omit wall-clock columns, which only go to output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import css, families, tensorops, verify
from .css import CssCode, KIsZero, OrthogonalityViolation
from .families import FamilyParseError, NotADivisor
from .tensorops import DEFAULT_SEED, PowerSpec, ResourceCeiling

RESOURCE_CEILING_ENV = "CSSTENSOR_MAX_N"
DEFAULT_CEILING = 100_000

EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_CONSTRUCTION = 3
EXIT_RESOURCE = 4


def _ceiling() -> int:
    raw = os.environ.get(RESOURCE_CEILING_ENV)
    return int(raw) if raw else DEFAULT_CEILING


def _load_code(path: str) -> CssCode:
    name, code = _load_named_code(path)
    del name
    return code


def _load_named_code(path: str) -> tuple[str, CssCode]:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return obj.get("name", ""), css.code_from_json(obj)


def _dump_json(obj: dict | list, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_code(code: CssCode, name: str, path: str | None) -> None:
    if path:
        _dump_json(css.code_to_json(code, name), path)


def cmd_family(args: argparse.Namespace) -> int:
    name, code = families.parse_family_spec(args.spec)
    _write_code(code, name, args.out)
    print(f"n={code.n} k={css.dimension_k(code)}")
    return 0


def cmd_tensor(args: argparse.Namespace) -> int:
    left = _load_code(args.left)
    right = _load_code(args.right)
    product = tensorops.css_tensor(left, right)
    _write_code(product, f"tensor({args.left},{args.right})", args.out)
    print(f"n={product.n} k={css.dimension_k(product)}")
    return 0


def cmd_power(args: argparse.Namespace) -> int:
    base_name, base = _load_named_code(args.input)
    x = css.to_complex(base)
    if args.reduced:
        predicted = tensorops.reduced_power_length(x, args.ell)
    else:
        predicted = tensorops.power_length(x.dims, args.ell)
    code = tensorops.css_power(
        base, args.ell, reduced=args.reduced, max_n=None if args.reduced else _ceiling()
    )
    if args.ell == 1 and not args.reduced:
        name = base_name  # the first power is the code itself
    else:
        name = f"power(ell={args.ell},reduced={args.reduced})"
    _write_code(code, name, args.out)
    print(f"predicted_n={predicted} actual_n={code.n} k={css.dimension_k(code)}")
    if predicted != code.n:
        print("warning: predicted and constructed lengths disagree", file=sys.stderr)
        return EXIT_CONSTRUCTION
    if code.n == 0:
        print("warning: reduced power is empty (exact input)", file=sys.stderr)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    code = _load_code(args.input)
    report = css.analyze(
        code,
        exact_up_to=args.exact_up_to,
        trials=args.trials,
        seed=args.seed,
        time_budget=args.time_budget,
    )
    _dump_json(report.to_json_dict(), args.out)
    return 0


def cmd_criterion(args: argparse.Namespace) -> int:
    code = _load_code(args.input)
    report = tensorops.check_distance_criterion(code)
    _dump_json(report.to_json_dict(), args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    _, base = families.parse_family_spec(args.spec)
    records = tensorops.sweep(
        PowerSpec(base, 1, reduced=args.reduced),
        args.ell_max,
        weight_cap=args.weight_cap,
        time_budget=args.time_budget,
        trials=args.trials,
        seed=args.seed,
        max_n=_ceiling(),
    )
    if args.format == "json":
        payload = [r.to_json_dict() for r in records]
        if args.out:
            _dump_json(payload, args.out)
        for r in records:
            row = r.to_json_dict()
            row.pop("seconds")
            sys.stdout.write(json.dumps(row, sort_keys=True) + "\n")
    else:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(tensorops.sweep_to_csv(records, with_seconds=True))
        sys.stdout.write(tensorops.sweep_to_csv(records, with_seconds=False))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = verify.run_suite(args.suite, args.seed)
    sys.stdout.write(verify.format_report(results))
    return 0 if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csstensor",
        description="CSS codes, chain complexes over GF(2), tensor products and sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="build a code family instance")
    p.add_argument("spec", help="family spec, e.g. steane or tz:hamming3,hamming3")
    p.add_argument("--out", help="write the code as JSON")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("tensor", help="tensor product of two code files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("power", help="iterated tensor power of a code file")
    p.add_argument("input")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("analyze", help="full parameter report for a code file")
    p.add_argument("input")
    p.add_argument("--exact-up-to", type=int, default=css.DEFAULT_WEIGHT_CAP)
    p.add_argument("--trials", type=int, default=css.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--time-budget", type=float, default=60.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("criterion", help="distance criterion report for a code file")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("sweep", help="power sweep table for a family spec")
    p.add_argument("spec")
    p.add_argument("--ell-max", type=int, required=True)
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--weight-cap", type=int, default=css.DEFAULT_WEIGHT_CAP)
    p.add_argument("--time-budget", type=float, default=60.0)
    p.add_argument("--trials", type=int, default=css.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("suite", choices=("fast", "full"))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FamilyParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceCeiling as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OrthogonalityViolation, NotADivisor, KIsZero) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
