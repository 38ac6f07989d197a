"""Command-line entry point.

Every run is a pure function of its flags (plus an optional flat
``key=value`` config file), so the same command line always writes the
same bytes.  Exit codes: 0 success/pass/found, 1 fail/inconclusive/guard
violation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .bitseq import (
    BitStream, Champernowne, Complemented, Constant, EventuallyPeriodic,
    IndexRangeError, PrefixThen, Shifted, Word, _as_word,
)
from .interval import (
    EscapeError, MapSpecError, PrecisionError, PwlMap, RationalInterval,
    parse_map, parse_rational, pwl_compose,
)
from .tau import DEFAULT_K, DEFAULT_MAX_STAGE, TauParams, tau_bit, tau_prefix, tau_segment
from .turbulence import theorem6_pipeline, turbulence_check, TurbulenceCertificate
from .witness import (
    WitnessStream, chaos_witness_search, decimal_str, distance_series,
    li_yorke_search, map_system, scheduled_coincidence_check,
    scheduled_divergence_check, scheduled_tracking_check, shift_system,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Argument parsing helpers
# --------------------------------------------------------------------------

def parse_stream(text: str) -> BitStream:
    """Inverse of ``BitStream.describe`` for the rule types the CLI knows.

    ``const0 | const1 | champ | ep:<pre>:<per> | pre:<word>:<spec> |
    not:<spec> | shift:<n>:<spec> | wit:<head>:<spec>``
    """
    t = text.strip()
    if t in ("const0", "const1"):
        return Constant(int(t[-1]))
    if t == "champ":
        return Champernowne()
    head, _, rest = t.partition(":")
    try:
        if head == "ep":
            pre, sep, per = rest.partition(":")
            if not sep:
                raise ValueError("ep needs ep:<pre>:<per>")
            return EventuallyPeriodic(Word.from_str(pre), Word.from_str(per))
        if head == "not":
            return Complemented(parse_stream(rest))
        if head in ("pre", "wit", "shift"):
            arg, sep, inner = rest.partition(":")
            if not sep:
                raise ValueError(f"{head} needs {head}:<arg>:<stream>")
            if head == "shift":
                return Shifted(parse_stream(inner), int(arg))
            if head == "pre":
                return PrefixThen(Word.from_str(arg), parse_stream(inner))
            return WitnessStream(parse_stream(inner), Word.from_str(arg))
    except ValueError as exc:
        raise UsageError(f"bad stream spec {text!r}: {exc}") from None
    raise UsageError(f"unknown stream spec {text!r}; expected const0, const1, champ, ep:<pre>:<per>, ...")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except MapSpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _open_interval(text: str) -> RationalInterval:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"interval must be lo,hi; got {text!r}")
    try:
        lo, hi = parse_rational(parts[0]), parse_rational(parts[1])
    except MapSpecError as exc:
        raise UsageError(str(exc)) from None
    if lo >= hi:
        raise UsageError(f"empty interval ({lo}, {hi})")
    return RationalInterval(lo, hi)


def _load_map(text: str):
    try:
        return parse_map(text)
    except MapSpecError as exc:
        raise UsageError(f"map spec error: {exc}") from None


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment, dashes map to underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _tau_params(args) -> TauParams:
    gamma = parse_stream(args.gamma)
    family = tuple(parse_stream(s) for s in args.family.split(",")) if args.family else ()
    b = _as_word(args.prefix) if args.prefix else None
    try:
        return TauParams(gamma, k=args.k, b=b, family=family, max_stage=args.max_stage)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --------------------------------------------------------------------------
# Commands; each returns (exit_code, text)
# --------------------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_tau(args):
    p = _tau_params(args)
    if args.action == "dump":
        if args.len is None:
            raise UsageError("tau dump needs --len")
        return EXIT_OK, str(tau_prefix(p, args.len)) + "\n"
    if args.n is None:
        raise UsageError(f"tau {args.action} needs --n")
    seg = tau_segment(p, args.n)
    if args.action == "segment":
        return EXIT_OK, str(seg) + "\n"
    bit = tau_bit(p, args.n)
    if args.format == "json":
        return EXIT_OK, _dump({"n": args.n, "bit": bit, "segment": str(seg)})
    return EXIT_OK, f"bit {bit}\nsegment {seg}\n"


def cmd_schedule(args):
    p = _tau_params(args)
    q = p.with_gamma(parse_stream(args.beta))
    try:
        if args.check == "divergence":
            res = scheduled_divergence_check(p, q, args.s, args.m, args.precision)
        elif args.check == "coincidence":
            res = scheduled_coincidence_check(p, q, args.i, args.j, args.m, args.precision)
        else:
            res = scheduled_tracking_check(p, args.i, args.j, args.m, args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return (EXIT_OK if res.passed else EXIT_FAIL), _dump(res.to_dict())


def _system_and_points(args):
    y = getattr(args, "y", None)
    if args.map == "shift":
        return shift_system(), parse_stream(args.x), parse_stream(y) if y else None
    f = _load_map(args.map)
    return map_system(f), _parse_point(args.x), _parse_point(y) if y else None


def _parse_point(text):
    try:
        return parse_rational(text)
    except MapSpecError as exc:
        raise UsageError(str(exc)) from None


def cmd_pairscan(args):
    sys_, x, y = _system_and_points(args)
    if y is None:
        raise UsageError("pairscan needs --y")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    series = distance_series(sys_, x, y, args.n, args.precision, args.workers)
    rows = [(n, series.numerator(n), args.precision, decimal_str(d)) for n, d in series.entries]
    if args.format == "json":
        return EXIT_OK, _dump([
            {"n": n, "numerator": str(num), "precision": prec, "decimal": dec}
            for n, num, prec, dec in rows
        ])
    lines = ["n,numerator,precision,decimal"] + [f"{n},{num},{prec},{dec}" for n, num, prec, dec in rows]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_witness(args):
    sys_, x, _ = _system_and_points(args)
    kw = dict(delta=args.delta, epsilon=args.epsilon, horizon=args.horizon, seed=args.seed,
              precision=args.precision, workers=args.workers)
    if sys_.kind == "rational":
        kw["strategy"] = args.strategy
    try:
        if args.li_yorke:
            if args.radius is None:
                raise UsageError("--li-yorke needs --radius")
            rep = li_yorke_search(sys_, x, args.radius, **kw)
        else:
            if args.V is None:
                raise UsageError("witness needs --V (cylinder word or lo,hi)")
            V = Word.from_str(args.V) if sys_.kind == "bitstream" else _open_interval(args.V)
            rep = chaos_witness_search(sys_, x, V, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return (EXIT_OK if rep.found else EXIT_FAIL), _dump(rep.to_dict())


def _pwl(args) -> PwlMap:
    f = _load_map(args.map)
    if not isinstance(f, PwlMap):
        raise UsageError("turbulence needs a piecewise-linear map")
    return f


def cmd_turbulence(args):
    f = _pwl(args)
    m = pwl_compose(f, f) if args.square else f
    cert = turbulence_check(m)
    out = {"map": str(f), "square": args.square, **cert.to_dict()}
    return (EXIT_OK if isinstance(cert, TurbulenceCertificate) else EXIT_FAIL), _dump(out)


def cmd_pipeline(args):
    f = _pwl(args)
    W = _open_interval(args.V) if args.V else None
    rep = theorem6_pipeline(f, args.delta, args.epsilon, args.horizon, args.seed, open_set=W)
    return (EXIT_FAIL if rep.implication == "violated" else EXIT_OK), _dump(rep.to_dict())


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _tau_flags(p):
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--gamma", default="const0", help="stream spec for gamma")
    p.add_argument("--prefix", default=None, help="prefix word b of length k! (default all zeros)")
    p.add_argument("--family", default=None, help="comma list of stream specs for x_1, x_2, ...")
    p.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)


def _search_flags(p):
    p.add_argument("--delta", type=_rational, default=None)
    p.add_argument("--epsilon", type=_rational, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="flat key=value file mirroring flags")
    common.add_argument("--output", default=None, help="write to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="symdyn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tau", parents=[common], help="bits, segments and prefixes of tau")
    t.add_argument("action", choices=["bit", "dump", "segment"])
    _tau_flags(t)
    t.add_argument("--n", type=int, default=None)
    t.add_argument("--len", type=int, default=None)
    t.add_argument("--format", choices=["text", "json"], default="text")
    t.set_defaults(func=cmd_tau)

    s = sub.add_parser("schedule", parents=[common], help="exact checks at scheduled times")
    s.add_argument("check", choices=["divergence", "coincidence", "tracking"])
    _tau_flags(s)
    s.set_defaults(gamma="const1")
    s.add_argument("--beta", default="const0", help="second gamma for divergence/coincidence")
    s.add_argument("--m", type=int, required=False, default=6)
    s.add_argument("--s", type=int, default=0)
    s.add_argument("--i", type=int, default=0)
    s.add_argument("--j", type=int, default=0)
    s.add_argument("--precision", type=int, default=64)
    s.set_defaults(func=cmd_schedule)

    ps = sub.add_parser("pairscan", parents=[common], help="distance series of a pair as CSV")
    ps.add_argument("--map", default="shift", help="shift, tent, g, h, logistic:mu or pwl: ...")
    ps.add_argument("--x", required=True)
    ps.add_argument("--y", required=True)
    ps.add_argument("--n", type=int, default=16)
    ps.add_argument("--precision", type=int, default=64)
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--format", choices=["csv", "json"], default="csv")
    ps.set_defaults(func=cmd_pairscan)

    w = sub.add_parser("witness", parents=[common], help="search for a chaos witness")
    w.add_argument("--map", default="shift")
    w.add_argument("--x", required=True)
    w.add_argument("--V", default=None, help="cylinder word (shift) or lo,hi (interval maps)")
    _search_flags(w)
    w.add_argument("--li-yorke", action="store_true", help="search a neighborhood of x instead")
    w.add_argument("--radius", type=_rational, default=None)
    w.add_argument("--strategy", default="auto")
    w.add_argument("--precision", type=int, default=64)
    w.add_argument("--workers", type=int, default=1)
    w.set_defaults(func=cmd_witness)

    tb = sub.add_parser("turbulence", parents=[common], help="turbulence certificate for a map")
    tb.add_argument("--map", required=True)
    tb.add_argument("--square", action="store_true", help="test f o f instead of f")
    tb.set_defaults(func=cmd_turbulence)

    pl = sub.add_parser("pipeline", parents=[common],
                        help="witness from a fixed point, then a certificate for f o f")
    pl.add_argument("--map", required=True)
    pl.add_argument("--V", default=None, help="open set lo,hi (default: seeded sample)")
    _search_flags(pl)
    pl.set_defaults(func=cmd_pipeline)
    return ap


def _apply_config(parser: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    """Parse argv with values from ``--config`` as defaults; explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config:
        choices = parser._subparsers._group_actions[0].choices
        command = next((tok for tok in argv if tok in choices), None)
        if command is None:
            return parser.parse_args(argv)
        sub = choices[command]
        actions = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, raw in read_config(known.config).items():
            action = actions.get(key)
            if action is None or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r} for {command}")
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = raw.lower() in ("1", "true", "yes")
            else:
                try:
                    defaults[key] = action.type(raw) if action.type else raw
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"config key {key!r}: {exc}") from None
            action.required = False
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


_NEGATIVE = re.compile(r"^-\d")


def _glue_negatives(argv: list) -> list:
    """``--x -2/3`` becomes ``--x=-2/3``; argparse would read -2/3 as a flag."""
    out = []
    for tok in argv:
        if out and _NEGATIVE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = _glue_negatives(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        code, text = args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"symdyn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IndexRangeError, EscapeError, PrecisionError) as exc:
        print(f"symdyn: guard violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"symdyn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
