"""Command line front end.

Three subcommands:

* ``bound``   evaluate the full bound catalog on a problem file
* ``verify``  run the verification checklist on a problem file or on a
  generated instance, exiting 1 when any check fails
* ``sweep``   tabulate slack ratios over generated instances as CSV

Exit codes: 0 success, 1 a verification check failed, 2 bad input,
3 a norm iteration did not converge.

Reports are emitted with fixed key order, two-space indent, LF line
endings, and 17 significant digits, so identical invocations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import bounds, harness, problemio, vectors
from .cbs import OperatorFamily
from .errors import NoConvergence, SchemaError
from .problemio import format_float


def _jfloat(x: float) -> str:
    # json.loads accepts Infinity/NaN, %.17g's "inf" it does not.
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if math.isnan(x):
        return "NaN"
    return format_float(float(x))


def _jbool(flag: bool) -> str:
    return "true" if flag else "false"


def _jstr(s: str) -> str:
    return json.dumps(str(s))


def _parse_grid(text):
    if text is None:
        return None
    values = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            values.append(float(piece))
        except ValueError:
            raise SchemaError(f"bad grid entry {piece!r}") from None
    if not values:
        raise SchemaError("empty exponent grid")
    return tuple(values)


def _parse_seed_single(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise SchemaError(f"bad seed {text!r}; expected an integer") from None


def _parse_seed_range(text: str):
    text = text.strip()
    if ":" in text:
        lo_text, _, hi_text = text.partition(":")
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError:
            raise SchemaError(f"bad seed range {text!r}; expected START:STOP") from None
        if hi < lo:
            raise SchemaError(f"bad seed range {text!r}; STOP must be >= START")
        return range(lo, hi)
    return [_parse_seed_single(text)]


def _check_mode(pf, mode) -> None:
    if mode is not None and mode != pf.mode:
        raise SchemaError(f"problem file is in {pf.mode} mode but --mode {mode} was requested")


def _write_text(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_weighted_family(args):
    """Shared by bound/verify: problem file -> (weights, label, family or gram data)."""
    pf = problemio.load_problem(args.input)
    _check_mode(pf, args.mode)
    return pf


def _cmd_bound(args) -> int:
    pf = _load_weighted_family(args)
    grid = _parse_grid(args.grid)
    if pf.mode == "operators":
        weights = pf.weights
        label = "explicit"
        reports = bounds.catalog_reports(weights, OperatorFamily(pf.operators), grid)
        lhs_key = "lhs_sq"
    else:
        vf = vectors.VectorFamily(pf.vectors)
        if pf.weights is None:
            weights = vectors.bessel_weighting(vf)
            label = "bessel"
        else:
            weights = pf.weights
            label = "explicit"
        # Per unit probe norm: the reported left side and bounds are the
        # coefficients of ||x||^2.
        reports = vectors.gram_catalog_reports(weights, vf, 1.0, grid)
        lhs_key = "lhs_sq_per_unit_probe"

    best = reports[0]
    for rep in reports[1:]:
        if rep.bound < best.bound:
            best = rep

    lines = ["{"]
    lines.append(f'  "mode": {_jstr(pf.mode)},')
    lines.append(f'  "dim": {pf.dim},')
    lines.append(f'  "count": {pf.count},')
    lines.append(f'  "weights": {_jstr(label)},')
    lines.append(f'  "{lhs_key}": {_jfloat(reports[0].lhs_sq)},')
    lines.append('  "bounds": [')
    for i, rep in enumerate(reports):
        tail = "," if i + 1 < len(reports) else ""
        lines.append(f'    {{"name": {_jstr(rep.name)}, "exponents": {_jstr(rep.exponents)}, '
                     f'"value": {_jfloat(rep.bound)}, "slack_ratio": {_jfloat(rep.slack_ratio)}}}{tail}')
    lines.append("  ],")
    lines.append(f'  "tightest": {{"name": {_jstr(best.name)}, "exponents": {_jstr(best.exponents)}, '
                 f'"value": {_jfloat(best.bound)}}}')
    lines.append("}")
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _verify_text(origin: str, result) -> str:
    lines = ["{"]
    lines.append(f"  {origin},")
    lines.append(f'  "all_hold": {_jbool(result.all_hold)},')
    lines.append(f'  "worst_violation": {_jfloat(result.worst_violation)},')
    lines.append('  "checks": [')
    for i, chk in enumerate(result.checks):
        tail = "," if i + 1 < len(result.checks) else ""
        lines.append(f'    {{"name": {_jstr(chk.name)}, "lhs": {_jfloat(chk.lhs)}, '
                     f'"bound": {_jfloat(chk.bound)}, "holds": {_jbool(chk.holds)}, '
                     f'"slack_ratio": {_jfloat(chk.slack_ratio)}}}{tail}')
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_verify(args) -> int:
    grid = _parse_grid(args.grid)
    if args.input is not None:
        pf = _load_weighted_family(args)
        if pf.mode == "operators":
            weights = pf.weights
            family = OperatorFamily(pf.operators)
        else:
            vf = vectors.VectorFamily(pf.vectors)
            weights = pf.weights if pf.weights is not None else vectors.bessel_weighting(vf)
            family = vectors.rank_one_family(vf)
        result = harness.verify_instance(weights, family, args.tol, exponent_grid=grid)
        origin = f'"input": {_jstr(args.input)}'
    else:
        if args.kind is None or args.dim is None or args.count is None:
            raise SchemaError("verify needs --input, or all of --kind, --dim, --count")
        spec = harness.InstanceSpec(kind=args.kind, dim=args.dim, count=args.count,
                                    seed=_parse_seed_single(args.seed))
        result = harness.verify_spec(spec, args.tol, exponent_grid=grid)
        origin = (f'"instance": {{"kind": {_jstr(spec.kind)}, "dim": {spec.dim}, '
                  f'"count": {spec.count}, "seed": {spec.seed}}}')
    _write_text(_verify_text(origin, result), args.out)
    return 0 if result.all_hold else 1


def _cmd_sweep(args) -> int:
    grid = _parse_grid(args.grid)
    kinds = [k.strip() for k in args.kind.split(",") if k.strip()]
    if not kinds:
        raise SchemaError("no instance kinds given")
    seeds = _parse_seed_range(args.seed)
    specs = [harness.InstanceSpec(kind=kind, dim=args.dim, count=args.count, seed=seed)
             for kind in kinds for seed in seeds]
    rows = harness.slack_sweep(specs, grid)
    harness.write_slack_csv(rows, args.out)
    sys.stdout.write(f"wrote {len(rows)} rows to {args.out}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opsumbounds",
        description="Norm bounds for weighted sums of operators: evaluate, verify, sweep.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    b = sub.add_parser("bound", help="evaluate the bound catalog on a problem file")
    b.add_argument("--input", required=True, help="problem file (JSON syntax)")
    b.add_argument("--mode", choices=("operators", "vectors"),
                   help="require the problem file to be in this mode")
    b.add_argument("--grid", help="comma-separated exponents for the tunable entries, e.g. 1.25,1.5,2")
    b.add_argument("--out", help="write the report here instead of stdout")

    v = sub.add_parser("verify", help="run the verification checklist")
    v.add_argument("--input", help="problem file to verify")
    v.add_argument("--mode", choices=("operators", "vectors"),
                   help="require the problem file to be in this mode")
    v.add_argument("--grid", help="comma-separated exponents for the tunable entries")
    v.add_argument("--tol", type=float, default=1e-9, help="relative tolerance for the checks")
    v.add_argument("--kind", choices=harness.KINDS,
                   help="verify a generated instance of this kind instead of a file")
    v.add_argument("--dim", type=int, help="dimension for generated instances")
    v.add_argument("--count", type=int, help="family size for generated instances")
    v.add_argument("--seed", default="0", help="seed for generated instances")
    v.add_argument("--out", help="write the report here instead of stdout")

    s = sub.add_parser("sweep", help="slack-ratio table over generated instances")
    s.add_argument("--kind", default="GaussianDense", help="instance kind, or a comma-separated list")
    s.add_argument("--dim", type=int, required=True, help="dimension of every instance")
    s.add_argument("--count", type=int, required=True, help="family size of every instance")
    s.add_argument("--seed", default="0", help="seed N, or a range START:STOP (STOP excluded)")
    s.add_argument("--grid", help="comma-separated exponents for the tunable entries")
    s.add_argument("--out", required=True, help="CSV output path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"bound": _cmd_bound, "verify": _cmd_verify, "sweep": _cmd_sweep}[args.command]
    try:
        return handler(args)
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
