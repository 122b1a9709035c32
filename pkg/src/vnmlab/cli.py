"""Command-line front end.

Every subcommand writes JSON to stdout: one RunTrace document for the
algorithm commands, one JSON line per row for ``report``, one JSON line per
property for ``verify``.  Exit codes: 0 success, 1 usage error, 2 a property
failed under ``verify``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import algorithms as alg
from . import oracles as orc
from .errors import VnmlabError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vnmlab", description="State-vector runs of oracle algorithms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simon", help="one Simon run on a xor-periodic oracle")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=_int, required=True)
    s.add_argument("--no-intermediate", action="store_true",
                   help="skip the intermediate measurement of F")
    s.add_argument("--random-values", action="store_true",
                   help="draw the pair values from the seed instead of 0, 1, 2, ...")
    s.add_argument("--seed", type=int, required=True)

    s = sub.add_parser("shor", help="one period-finding run for a^x mod L")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--L", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)

    s = sub.add_parser("deutsch", help="standard or extended Deutsch run")
    s.add_argument("--extended", action="store_true")
    s.add_argument("--k", default=None, help="function label 00, 01, 10 or 11")
    s.add_argument("--seed", type=int, required=True)

    s = sub.add_parser("grover", help="Grover search at n=2")
    s.add_argument("--extended", action="store_true")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--seed", type=int, required=True)

    s = sub.add_parser("report", help="classical vs quantum query ledger")
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--seeds", type=int, required=True)
    s.add_argument("--no-intermediate", action="store_true")

    s = sub.add_parser("verify", help="run the property suite")
    s.add_argument("--quick", action="store_true", help="smaller sample counts")
    return p


def _emit(out, doc) -> None:
    out.write(doc if isinstance(doc, str) else json.dumps(doc, separators=(",", ":")))
    out.write("\n")


def _dispatch(args, out) -> int:
    cmd = args.command
    if cmd == "simon":
        if args.random_values:
            oracle = orc.make_xor_periodic(args.n, args.r, np.random.default_rng([args.seed, 1]))
        else:
            oracle = orc.make_xor_periodic(args.n, args.r, values=range(1 << (args.n - 1)))
        trace = alg.simon_run(oracle, not args.no_intermediate, args.seed)
        doc = trace.to_dict()
        doc["oracle"] = oracle.to_dict()
        _emit(out, doc)
    elif cmd == "shor":
        _emit(out, alg.shor_period_run(args.a, args.L, args.n, args.seed).to_json())
    elif cmd == "deutsch":
        if args.extended:
            trace = alg.deutsch_extended_run(args.seed)
        else:
            if args.k is None:
                raise UsageError("standard deutsch needs --k")
            trace = alg.deutsch_standard_run(args.k, args.seed)
        _emit(out, trace.to_json())
    elif cmd == "grover":
        if not args.extended and args.k is None:
            raise UsageError("standard grover needs --k")
        _emit(out, alg.grover_run(args.k, args.extended, args.seed).to_json())
    elif cmd == "report":
        if not 1 <= args.n_min <= args.n_max or args.seeds < 1:
            raise UsageError("need 1 <= n-min <= n-max and seeds >= 1")
        for row in alg.speedup_report(range(args.n_min, args.n_max + 1), args.seeds,
                                      intermediate=not args.no_intermediate):
            _emit(out, row)
    elif cmd == "verify":
        from .verify import run_all

        ok = True
        for name, passed, detail in run_all(quick=args.quick):
            ok &= passed
            _emit(out, {"property": name, "status": "PASS" if passed else "FAIL", "detail": detail})
        return 0 if ok else 2
    return 0


def run_command(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args, out)
    except UsageError as exc:
        err.write(f"vnmlab: usage error: {exc}\n")
        return 1
    except VnmlabError as exc:
        err.write(f"vnmlab: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
