"""Command line entry point ``ffgcd``.

Every command prints canonical JSON (sorted keys) on stdout.  Exit status
is 0 when clean, 1 when a verified inequality fails (a FINDING), and 2 on
usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .derivation import D_u
from .ffcore import INFINITY, FieldError, PlaceSet, RationalFunction, counting, divisor, gcd_counting, height
from .harness.suites import SUITES, InstanceSpec, dumps, run_suite, write_report
from .mvpoly import MvPoly
from .parsing import ParseError, variable_names
from .pisot import ExpPoly, HypothesisError, InsufficientWitnesses, divisor_identity_holds, pisot_factor
from .refinement import Caps, CapExceeded, key_inequality_check

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2

#: positional arguments per command, used to turn a config file into argv
POSITIONAL = {"eval": ["expr"], "height": ["expr"], "gcdcount": ["f", "g"], "suite": ["name"]}


class UsageError(Exception):
    pass


def _poly(text: str, nvars: int | None = None) -> MvPoly:
    return MvPoly.parse(text, nvars)


def _nvars(*texts: str) -> int:
    idx = [int(v[1:]) for s in texts for v in variable_names(s) if v[0] == "x" and v[1:].isdigit()]
    return max(idx, default=1)


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_eval(a) -> tuple[dict, bool]:
    f = RationalFunction.parse(a.expr)
    out = {"value": str(f)}
    if not f.is_zero():
        out["divisor"] = {str(p): v for p, v in divisor(f).items()}
    return out, False


def cmd_height(a):
    f = RationalFunction.parse(a.expr)
    return {"value": str(f), "height": height(f)}, False


def cmd_gcdcount(a):
    f, g = RationalFunction.parse(a.f), RationalFunction.parse(a.g)
    S = PlaceSet.parse(a.S or "")
    return {
        "f": str(f), "g": str(g), "S": str(S),
        "N_gcd": gcd_counting(f, g, S, "N"),
        "h_gcd": gcd_counting(f, g, None, "h"),
        "N_S_f": counting(f, S, "N"),
        "N_S_g": counting(g, S, "N"),
    }, False


def cmd_du(a):
    n = max(_nvars(a.poly), len(a.units))
    F = _poly(a.poly, n)
    u = [RationalFunction.parse(x) for x in a.units]
    if len(u) != n:
        raise UsageError(f"{len(u)} units given for a polynomial in {n} variables")
    DF = D_u(F, u)
    return {"F": F.to_str(), "u": [str(x) for x in u], "D_u": DF.to_str(),
            "value_identity": F.evaluate(u).derivative() == DF.evaluate(u)}, False


def cmd_refine(a):
    n = max(_nvars(a.F1, a.F2), len(a.units))
    F1, F2 = _poly(a.F1, n), _poly(a.F2, n)
    g = [RationalFunction.parse(x) for x in a.units]
    S = PlaceSet.parse(a.S) if a.S else PlaceSet.support(*g, extra=[INFINITY])
    caps = Caps(max_m=a.max_m, max_r=max(a.r, 1))
    rep = key_inequality_check(F1, F2, g, S, a.m, a.r, 0, caps)
    return rep.to_dict(), rep.finding


def cmd_pisot(a):
    with open(a.input, encoding="utf-8") as fh:
        text = " ".join(line.split("#", 1)[0] for line in fh)
    b = ExpPoly.parse(text)
    fac = pisot_factor(b, a.d, M_cap=a.m_cap)
    out = fac.to_dict()
    bad = [m for m in range(11) if not divisor_identity_holds(fac, b, m)]
    out["divisor_identity_failures"] = bad
    return out, bool(bad)


def cmd_suite(a):
    if a.name not in SUITES:
        raise UsageError(f"unknown suite {a.name!r}; known: {', '.join(sorted(SUITES))}")
    spec = InstanceSpec(a.name, a.seed, a.count, _params(a.param))
    report = run_suite(spec)
    if a.out:
        write_report(report, a.out, a.csv)
        out = {"suite": report["suite"], "summary": report["summary"], "out": a.out, "finding": report["finding"]}
    else:
        out = report
    return out, report["finding"]


def cmd_suites(a):
    return {name: {"doc": s.doc, "params": {k: str(v) if isinstance(v, Fraction) else v
                                             for k, v in sorted(s.defaults.items())}}
            for name, s in sorted(SUITES.items())}, False


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffgcd", description="Exact gcd and height computations over Q(t).")
    p.add_argument("--config", help="JSON file with a 'command' key and option values")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("eval", help="normalize an element of Q(t) and print its divisor")
    s.add_argument("expr")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("height", help="height of an element of Q(t)")
    s.add_argument("expr")
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("gcdcount", help="N_{S,gcd}(f, g) and h_gcd(f, g)")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--S", default="", help="comma separated places, e.g. 't,t+1,inf'")
    s.set_defaults(func=cmd_gcdcount)

    s = sub.add_parser("du", help="the operator D_u applied to a polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--units", nargs="+", required=True)
    s.set_defaults(func=cmd_du)

    s = sub.add_parser("refine", help="linear forms for (F1, F2)_m and the gcd inequality chain")
    s.add_argument("--F1", required=True)
    s.add_argument("--F2", required=True)
    s.add_argument("--units", nargs="+", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--S", default=None, help="places; default: support of the units and infinity")
    s.add_argument("--max-m", dest="max_m", type=int, default=8)
    s.set_defaults(func=cmd_refine)

    s = sub.add_parser("pisot", help="d-th root factorization of an exponential polynomial")
    s.add_argument("--input", required=True, help="file holding '(B ; beta) ...' with B in T")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--m-cap", dest="m_cap", type=int, default=200)
    s.set_defaults(func=cmd_pisot)

    s = sub.add_parser("suite", help="run a named verification suite")
    s.add_argument("name")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--out", default=None)
    s.add_argument("--csv", default=None, help="also write a CSV summary to this path")
    s.add_argument("--param", action="append", default=[], help="suite parameter key=value")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("suites", help="list suites and their parameters")
    s.set_defaults(func=cmd_suites)
    return p


def config_argv(cfg: dict) -> list[str]:
    """Turn {'command': ..., key: value, ...} into an argument list."""
    if not isinstance(cfg, dict) or "command" not in cfg:
        raise UsageError("config must be a JSON object with a 'command' key")
    cmd = cfg["command"]
    argv = [cmd]
    pos = POSITIONAL.get(cmd, [])
    for name in pos:
        if name in cfg:
            argv.append(str(cfg[name]))
    for key, value in cfg.items():
        if key == "command" or key in pos:
            continue
        flag = "--" + key.replace("_", "-") if key in ("max_m", "m_cap") else "--" + key
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        elif isinstance(value, list):
            if key == "param":
                for v in value:
                    argv += [flag, str(v)]
            else:
                argv += [flag] + [str(v) for v in value]
        elif isinstance(value, dict) and key == "param":
            for k, v in sorted(value.items()):
                argv += [flag, f"{k}={v}"]
        else:
            argv += [flag, str(value)]
    return argv


def _after_command(argv: list[str], command: str) -> list[str]:
    skip = False
    for k, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--config":
            skip = True
            continue
        if tok == command:
            return argv[k + 1:]
    return []


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
            if args.command is None:
                args = parser.parse_args(config_argv(cfg))
            else:
                # config values act as defaults; flags given on the command line come later and win
                rest = _after_command(argv, args.command)
                opts = config_argv({k: v for k, v in cfg.items() if k not in POSITIONAL.get(args.command, [])}
                                   | {"command": args.command})[1:]
                args = parser.parse_args([args.command] + opts + rest)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        out, finding = args.func(args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except (UsageError, ParseError, json.JSONDecodeError, OSError) as exc:
        print(f"ffgcd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FieldError, ValueError, CapExceeded, HypothesisError, InsufficientWitnesses) as exc:
        print(f"ffgcd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(dumps(out))
    return EXIT_FINDING if finding else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
