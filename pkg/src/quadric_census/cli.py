"""Command-line surface for reproduction runs and report generation.

Subcommands:

    count      census rows (B, N, N1, N2, raw_count, elapsed_ms)
    sigma      mod-8 character-sum table with closed-form verdicts
    constant   leading-constant report as JSON
    check      place-by-place local solubility of one diagonal quadric
    bilinear   bilinear character-sum sweep over cutoffs z
    identity   exhaustive indicator-vs-Hasse identity box

Exit codes: 0 success; 2 invalid input; 3 identity or consistency failure
(the mathematics disagreed with itself); 4 resource ceiling exceeded.
Randomized modes take --seed (default 0) and are deterministic for a fixed
seed.  Output goes to stdout or --out PATH; JSON sweeps emit one object
per line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .arith import CeilingExceeded
from .charsum import (
    BILINEAR_CEILING,
    BILINEAR_MODES,
    bilinear_hyperbolic_sum,
    identity_suite,
    sigma_table,
)
from .constant import VARIANT_KEYS, constant_cri, leading_constant
from .counting import (
    CENSUS_CEILING,
    census,
    results_to_csv,
    results_to_json_lines,
)
from .solubility import (
    Verdict,
    bad_primes,
    local_indicator_2,
    local_indicator_odd,
    normalize,
    solvable_real,
)

__all__ = ["main"]


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_int_list(raw: str, what: str):
    try:
        values = [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError("could not parse %s list %r" % (what, raw))
    if not values:
        raise ValueError("empty %s list" % what)
    return values


# ------------------------------------------------------------------ count

def _cmd_count(args) -> int:
    if args.b is None and args.b_list is None:
        raise ValueError("need --b or --b-list")
    b_values = [args.b] if args.b is not None else _parse_int_list(args.b_list, "B")
    rows = census(b_values, workers=args.workers, ceiling=args.ceiling)
    if args.format == "csv":
        _emit(results_to_csv(rows), args.out)
    else:
        _emit(results_to_json_lines(rows), args.out)
    return 0


# ------------------------------------------------------------------ sigma

def _cmd_sigma(args) -> int:
    from .solubility import mod8_set_A1, mod8_set_A2

    m_values = _parse_int_list(args.m_values, "m")
    rows = sigma_table(m_values)
    failures = 0
    lines = []
    for row in rows:
        ok = (row["sigma_r2"] == row["expected_r2"]
              and row["sigma_13"] == row["expected_13"]
              and row["sigma_23"] == row["expected_23"])
        failures += not ok
        payload = dict(row)
        payload["pass"] = bool(ok)
        lines.append(json.dumps(payload, sort_keys=True))
    a1 = mod8_set_A1()
    a2 = mod8_set_A2()
    summary = {
        "rows": len(rows),
        "failures": failures,
        "A1_restricted": sum(1 for q in a1 if q[0] * q[1] * q[2] * q[3] % 8 == 1),
        "A2_restricted": sum(1 for q in a2 if q[0] * q[1] * q[2] * q[3] % 8 == 1),
        "verdict": "PASS" if failures == 0 else "FAIL",
    }
    lines.append(json.dumps(summary, sort_keys=True))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if failures == 0 else 3


# --------------------------------------------------------------- constant

def _cmd_constant(args) -> int:
    result = leading_constant(args.prime_limit)
    variants = {
        "%d,%d" % key: constant_cri(key, args.prime_limit).value
        for key in VARIANT_KEYS
    }
    payload = {
        "value": result.value,
        "prime_limit": result.prime_limit,
        "tail_radius": result.tail_radius,
        "variants": variants,
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


# ------------------------------------------------------------------ check

def _verdict_word(v: Verdict) -> str:
    return v.name.lower()


def _cmd_check(args) -> int:
    a = tuple(_parse_int_list(args.quadric, "coefficient"))
    if len(a) != 4 or any(x == 0 for x in a):
        raise ValueError("need four nonzero coefficients, got %r" % (a,))
    na = normalize(a)
    lines = ["place verdict"]
    overall = True
    v = solvable_real(na)
    overall &= v is Verdict.SOLUBLE
    lines.append("inf %s" % _verdict_word(v))
    v = local_indicator_2(na)
    overall &= v is Verdict.SOLUBLE
    lines.append("2 %s" % _verdict_word(v))
    for p in bad_primes(na):
        v = local_indicator_odd(na, p)
        overall &= v is Verdict.SOLUBLE
        lines.append("%d %s" % (p, v.name.lower()))
    lines.append("overall %s" % ("soluble" if overall else "insoluble"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# --------------------------------------------------------------- bilinear

def _cmd_bilinear(args) -> int:
    modes = list(BILINEAR_MODES) if args.mode == "all" else [args.mode]
    z_values = _parse_int_list(args.z_list, "z")
    rows = []
    for mode in modes:
        for z in z_values:
            s, normalized = bilinear_hyperbolic_sum(
                args.X, z, coeff_mode=mode, seed=args.seed, ceiling=args.ceiling)
            rows.append((args.X, z, mode, s, normalized))
    if args.format == "csv":
        lines = ["X,z,mode,S,normalized"]
        lines += ["%d,%d,%s,%d,%.6g" % row for row in rows]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit("".join(
            json.dumps({"X": x, "z": z, "mode": mode, "S": s,
                        "normalized": normalized}, sort_keys=True) + "\n"
            for x, z, mode, s, normalized in rows), args.out)
    return 0


# --------------------------------------------------------------- identity

def _cmd_identity(args) -> int:
    box = _parse_int_list(args.box, "box")
    if len(box) != 2:
        raise ValueError("--box needs two integers s_max,m_max, got %r" % (args.box,))
    report = identity_suite(box[0], box[1])
    lines = [
        "identity box: s_i <= %d, m_ij <= %d" % (box[0], box[1]),
        "checked: %d" % report["checked"],
        "mismatches: %d" % report["mismatch_count"],
    ]
    for miss in report["mismatches"]:
        lines.append("MISMATCH %s" % json.dumps(miss, sort_keys=True))
    lines.append("all PASS" if report["mismatch_count"] == 0 else "FAIL")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if report["mismatch_count"] == 0 else 3


# ------------------------------------------------------------------ parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadric-census",
        description="Census of everywhere-locally-soluble diagonal quadric "
                    "surfaces over the split quadric base.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="census rows for height bounds")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--b", type=int, help="single height bound")
    group.add_argument("--b-list", help="comma-separated height bounds")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--ceiling", type=int, default=CENSUS_CEILING)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("sigma", help="mod-8 character-sum table")
    p.add_argument("--m-values", default="1,2,3,5",
                   help="component pool for the m tuples")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sigma)

    p = sub.add_parser("constant", help="leading-constant report")
    p.add_argument("--prime-limit", type=int, default=10**5)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_constant)

    p = sub.add_parser("check", help="local solubility of one quadric")
    p.add_argument("quadric", help="four comma-separated coefficients, e.g. 1,1,1,-7")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("bilinear", help="bilinear character-sum sweep")
    p.add_argument("--X", type=int, default=10**4)
    p.add_argument("--z-list", default="10,100,1000")
    p.add_argument("--mode", choices=BILINEAR_MODES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ceiling", type=int, default=BILINEAR_CEILING)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bilinear)

    p = sub.add_parser("identity", help="indicator-vs-Hasse identity box")
    p.add_argument("--box", default="15,6", help="s_max,m_max")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_identity)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CeilingExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
