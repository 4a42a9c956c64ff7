"""Command-line front end: ``maxmam eval|oracle|compare|check|bench``.

Exit codes:
  0  success / agreement
  1  parse error, bad usage, unknown family, bare variable given to check
  2  fuel exhausted
  3  invariant violation (``--debug-invariants``)
  4  compare found a mismatch
  5  the ``--env`` file is not well-labeled
"""

from __future__ import annotations

import argparse
import json
import sys

from maxmam.checking import check
from maxmam.environment import Environment, Label
from maxmam.machine import is_well_labeled
from maxmam.mam import InvariantViolation, run
from maxmam.metrics import FAMILIES, bench_family, to_csv
from maxmam.oracle import max_reduce
from maxmam.syntax import ParseError, parse, pretty
from maxmam.terms import Name, Var, alpha_eq, well_name

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FUEL = 2
EXIT_INVARIANT = 3
EXIT_MISMATCH = 4
EXIT_ENV = 5

DEFAULT_FUEL = 100_000
BENCH_FUEL = 10**7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "fuel exhausted"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=None, help=f"transition budget (default {DEFAULT_FUEL}; 0 only parses and echoes)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--trace", action="store_true", help="print every step")
    common.add_argument("--debug-invariants", action="store_true", help="check machine invariants after every transition")

    term = argparse.ArgumentParser(add_help=False)
    term.add_argument("term", nargs="?", help="the term; read from --file or stdin when omitted")
    term.add_argument("--file", help="read the term from this file")

    p = _Parser(prog="maxmam", description="Maximal-strategy evaluation of lambda terms with the Max MAM.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("eval", parents=[common, term], help="normalize with the Max MAM")
    sub.add_parser("oracle", parents=[common, term], help="normalize with the reference reducer")
    sub.add_parser("compare", parents=[common, term], help="run both engines and compare")
    chk = sub.add_parser("check", parents=[common, term], help="usefulness label of a code")
    chk.add_argument("--env", help="environment file: 'x <- term : abs|neu|red n' per line, newest first")
    bench = sub.add_parser("bench", parents=[common], help="CSV table for a benchmark family")
    bench.add_argument("--family", required=True, help=", ".join(FAMILIES))
    bench.add_argument("--n", type=int, required=True, help="largest instance")
    return p


def read_term_text(args, stdin=None) -> str:
    if args.term is not None and args.file is not None:
        raise UsageError("give the term either inline or with --file, not both")
    if args.term is not None:
        return args.term
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read()
    return (stdin or sys.stdin).read()


def parse_env_file(text: str) -> Environment:
    """Entries ``x <- term : label``, one per line, newest first."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        var, arrow, rest = line.partition("<-")
        code, colon, label = rest.rpartition(":")
        if not arrow or not colon:
            raise UsageError(f"env line {lineno}: expected 'x <- term : label'")
        try:
            entries.append((Name.parse(var.strip()), parse(code), Label.parse(label.strip())))
        except (ParseError, ValueError) as exc:
            raise UsageError(f"env line {lineno}: {exc}") from exc
    return Environment.from_entries(entries)


def _emit(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False))


def _summary(rep) -> str:
    return (
        f"m={rep.m_count} e={rep.e_count} c={rep.c_count} check_steps={rep.check_steps} "
        f"transitions={rep.transitions} env_len={rep.env_len} status={rep.status}"
    )


def cmd_eval(args, t) -> int:
    try:
        rep = run(t, args.fuel, trace=args.trace, assert_invariants=args.debug_invariants)
    except InvariantViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVARIANT
    if args.json:
        _emit(rep.to_json())
    else:
        if args.trace:
            for rec in rep.trace:
                _emit(rec)
        if rep.completed:
            print(pretty(rep.normal_form))
        print(_summary(rep), file=sys.stderr if args.trace else sys.stdout)
    if not rep.completed:
        print(f"fuel exhausted after {rep.transitions} transitions", file=sys.stderr)
        return EXIT_FUEL
    return EXIT_OK


def cmd_oracle(args, t) -> int:
    res = max_reduce(t, args.fuel, keep_trace=args.trace)
    if args.json:
        out = {"status": res.status, "final": pretty(res.final), "steps": res.steps}
        if args.trace:
            out["trace"] = [pretty(u) for u in res.trace]
        _emit(out)
    else:
        if args.trace:
            for u in res.trace:
                print(pretty(u))
        else:
            print(pretty(res.final))
        print(f"steps={res.steps} status={res.status}", file=sys.stderr if args.trace else sys.stdout)
    if not res.normal:
        print(f"fuel exhausted after {res.steps} steps", file=sys.stderr)
        return EXIT_FUEL
    return EXIT_OK


def compare_budget(n: int, size: int) -> int:
    """Transition cap for ``n`` multiplicative steps, from the proven bounds."""
    e = n * n + n
    return n + e + 3 * (1 + e) * size


def compare(t, fuel: int, *, trace: bool = False, assert_invariants: bool = False):
    """``(agree, oracle_result, machine_report)`` with oracle fuel = machine m-budget."""
    res = max_reduce(t, fuel, keep_trace=trace)
    rep = run(t, compare_budget(fuel, t.size), m_budget=fuel, trace=trace, assert_invariants=assert_invariants)
    if res.normal:
        agree = rep.completed and rep.m_count == res.steps and alpha_eq(rep.normal_form, res.final)
    else:
        agree = not rep.completed and rep.m_count >= fuel
    return agree, res, rep


def cmd_compare(args, t) -> int:
    try:
        agree, res, rep = compare(t, args.fuel, assert_invariants=args.debug_invariants)
        if not agree:
            _, res, rep = compare(t, args.fuel, trace=True)
    except InvariantViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVARIANT
    verdict = "AGREE" if agree else "MISMATCH"
    if args.json:
        out = {
            "verdict": verdict,
            "oracle": {"status": res.status, "steps": res.steps, "final": pretty(res.final)},
            "machine": rep.to_json(),
        }
        if not agree:
            out["oracle"]["trace"] = [pretty(u) for u in res.trace]
        _emit(out)
    elif res.normal and rep.completed:
        print(f"{verdict} steps={res.steps} m={rep.m_count} {pretty(rep.normal_form)}")
    elif agree:
        print(f"{verdict} both exhausted the budget of {args.fuel} steps")
    else:
        print(f"{verdict} oracle: {res.status} after {res.steps} steps; machine: {rep.status} with m={rep.m_count}")
    if not agree and not args.json:
        print("oracle trace:")
        for u in res.trace:
            print("  " + pretty(u))
        print("machine trace:")
        for rec in rep.trace:
            print("  " + json.dumps(rec, ensure_ascii=False))
    return EXIT_OK if agree else EXIT_MISMATCH


def cmd_check(args, t) -> int:
    env = Environment()
    if args.env is not None:
        with open(args.env, encoding="utf-8") as fh:
            env = parse_env_file(fh.read())
        if not is_well_labeled(env):
            print("environment is not well-labeled", file=sys.stderr)
            return EXIT_ENV
    if type(t) is Var:
        raise UsageError("check needs an application or an abstraction, not a bare variable")
    code = well_name(t, reserved=env.names())
    rep = check(code, env, trace=args.trace)
    if args.json:
        out = {"label": str(rep.label), "steps": rep.steps, "counters": {k.value: v for k, v in rep.counters.items()}}
        if args.trace:
            out["trace"] = rep.trace
        _emit(out)
    else:
        if args.trace:
            for rec in rep.trace:
                _emit(rec)
        print(rep.label)
        print(f"steps={rep.steps}", file=sys.stderr if args.trace else sys.stdout)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; known: {', '.join(FAMILIES)}")
    if args.n < 1:
        raise UsageError("--n must be positive")
    rows = bench_family(args.family, args.n, fuel=args.fuel)
    if args.json:
        _emit([r.to_json() for r in rows])
    else:
        sys.stdout.write(to_csv(rows))
    return EXIT_OK


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            if args.fuel is None:
                args.fuel = BENCH_FUEL
            return cmd_bench(args)
        if args.fuel is None:
            args.fuel = DEFAULT_FUEL
        if args.fuel < 0:
            raise UsageError("--fuel must be non-negative")
        t = parse(read_term_text(args))
        if args.fuel == 0:
            print(pretty(t))
            return EXIT_OK
        handler = {"eval": cmd_eval, "oracle": cmd_oracle, "compare": cmd_compare, "check": cmd_check}[args.command]
        return handler(args, t)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
