"""
Command line interface.

    cpfskein compute --strands 2 --word "1 1" --colors "a b"
    cpfskein compute --batch - < jobs.json
    cpfskein oracle --strands 3 --word "1 -2 1 -2" --colors "a a a"
    cpfskein verify --suite invariance --trials 100 --seed 42

Exit codes: 0 ok, 1 verification failure, 2 braid not closable, 3 parse
error, 4 internal assertion, 5 timeout.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import threading
import traceback
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from typing import Any, Sequence

from .algebra import AlgebraError, DenomFactor, Fraction, LaurentPoly
from .braid import BraidError, ColoredBraid, NotClosableError, is_closable, parse_word
from .cpf import cpf_closed_braid, to_alexander, uncolored
from .hartley import normalized_invariant, oracle_invariant, resolve_unit

EXIT_OK, EXIT_VERIFY, EXIT_NOT_CLOSABLE, EXIT_PARSE, EXIT_INTERNAL, EXIT_TIMEOUT = 0, 1, 2, 3, 4, 5


class ParseError(ValueError):
    pass


class Timeout(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# JSON form of fractions


def poly_to_json(p: LaurentPoly, colors: Sequence[str]) -> list[dict[str, Any]]:
    names = [f"t_{c}" for c in colors]
    return [
        {"coef": str(c), "exps": {colors[i]: e[i] for i in range(len(colors)) if e[i]}}
        for e, c in p.sorted_terms(names)
    ]


def poly_from_json(items: Sequence[dict], colors: Sequence[str]) -> LaurentPoly:
    index = {c: i for i, c in enumerate(colors)}
    terms: dict[tuple[int, ...], int] = {}
    for item in items:
        e = [0] * len(colors)
        for c, k in item["exps"].items():
            e[index[c]] = int(k)
        terms[tuple(e)] = terms.get(tuple(e), 0) + int(item["coef"])
    return LaurentPoly(len(colors), terms)


def fraction_to_json(value: Fraction, colors: Sequence[str]) -> dict[str, Any]:
    out: dict[str, Any] = {
        "colors": list(colors),
        "num": poly_to_json(value.num, colors),
        "den": [
            {"kind": f.kind, "colors": [colors[v] for v in f.colors], "mult": m}
            for f, m in value.den
        ],
    }
    if value.general is not None:
        out["general"] = poly_to_json(value.general, colors)
    return out


def fraction_from_json(obj: dict[str, Any]) -> tuple[Fraction, tuple[str, ...]]:
    colors = tuple(obj["colors"])
    index = {c: i for i, c in enumerate(colors)}
    num = poly_from_json(obj["num"], colors)
    den = {}
    for d in obj["den"]:
        vs = [index[c] for c in d["colors"]]
        den[DenomFactor(d["kind"], *vs)] = int(d["mult"])
    general = poly_from_json(obj["general"], colors) if "general" in obj else None
    return Fraction(num, den, general), colors


# ---------------------------------------------------------------------------
# compute


def parse_colored(strands: int, word: str, colors: str | Sequence[str]) -> ColoredBraid:
    try:
        if strands < 1:
            raise ParseError("strand count must be positive")
        w = parse_word(word, strands)
        cols = tuple(colors.split()) if isinstance(colors, str) else tuple(str(c) for c in colors)
        if len(cols) != strands:
            raise ParseError(f"expected {strands} colors, got {len(cols)}")
        return ColoredBraid(w, cols)
    except (BraidError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc


def compute_item(strands: int, word: str, colors, outputs: Sequence[str] = ()) -> dict[str, Any]:
    """One computation; raises NotClosableError, ParseError or AlgebraError."""
    cb = parse_colored(strands, word, colors)
    if not is_closable(cb):
        raise NotClosableError(f"braid [{cb.word}] with colors {' '.join(cb.top_colors)} is not closable")
    v = cpf_closed_braid(cb)
    result: dict[str, Any] = {
        "cpf": v.to_str(),
        "cpf_json": fraction_to_json(v.value, v.colors),
        "components": v.components,
    }
    if "alexander" in outputs:
        result["alexander"] = to_alexander(v).to_str()
    if "uncolored" in outputs:
        try:
            result["uncolored"] = uncolored(v).value.to_str(["t"])
        except AlgebraError as exc:
            result["uncolored"] = f"undefined ({exc})"
    if "oracle" in outputs:
        o = oracle_invariant(cb, choices=2)
        unit = resolve_unit(o.value, v.value)
        result["oracle_agrees"] = unit is not None
        result["oracle_exact"] = normalized_invariant(cb) == v.value
    return result


def _format_text(result: dict[str, Any]) -> str:
    lines = [result["cpf"]]
    for key in ("alexander", "uncolored"):
        if key in result:
            lines.append(f"{key}: {result[key]}")
    if "oracle_agrees" in result:
        lines.append(f"oracle: {'agrees' if result['oracle_agrees'] else 'DISAGREES'} up to a unit; "
                     f"normalised {'equal' if result['oracle_exact'] else 'DIFFERENT'}")
    return "\n".join(lines)


def _with_alarm(seconds: float | None, fn, *args):
    if not seconds or threading.current_thread() is not threading.main_thread():
        return fn(*args)

    def on_alarm(signum, frame):
        raise Timeout(f"timed out after {seconds} s")

    old = signal.signal(signal.SIGALRM, on_alarm)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        return fn(*args)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _error_exit(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def run_compute(args) -> int:
    if args.batch is not None:
        return run_batch(args)
    if args.strands is None or args.word is None or args.colors is None:
        return _error_exit(EXIT_PARSE, "compute needs --strands, --word and --colors (or --batch)")
    outputs = [k for k in ("alexander", "uncolored", "oracle") if getattr(args, k)]
    try:
        result = _with_alarm(args.timeout, compute_item, args.strands, args.word, args.colors, outputs)
    except ParseError as exc:
        return _error_exit(EXIT_PARSE, str(exc))
    except NotClosableError as exc:
        return _error_exit(EXIT_NOT_CLOSABLE, str(exc))
    except Timeout as exc:
        return _error_exit(EXIT_TIMEOUT, str(exc))
    except (AlgebraError, AssertionError, RuntimeError) as exc:
        return _error_exit(EXIT_INTERNAL, f"{type(exc).__name__}: {exc} "
                           f"(word {args.word!r}, colors {args.colors!r})")
    if args.format == "json":
        print(json.dumps(result, sort_keys=True))
    else:
        print(_format_text(result))
    return EXIT_OK


def _threads() -> int:
    raw = os.environ.get("CPF_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(4, os.cpu_count() or 1))


def run_batch(args) -> int:
    try:
        text = sys.stdin.read() if args.batch == "-" else open(args.batch).read()
        job = json.loads(text)
        items = job["items"] if isinstance(job, dict) else job
        limits = job.get("limits", {}) if isinstance(job, dict) else {}
        parsed = []
        for idx, item in enumerate(items):
            cb = parse_colored(int(item["strands"]), str(item["word"]), item["colors"])
            if "max_strands" in limits and cb.strands > int(limits["max_strands"]):
                raise ParseError(f"item {idx} exceeds max_strands")
            if "max_length" in limits and len(cb.word) > int(limits["max_length"]):
                raise ParseError(f"item {idx} exceeds max_length")
            if not is_closable(cb):
                print(f"error: item {idx} is not closable", file=sys.stderr)
                return EXIT_NOT_CLOSABLE
            parsed.append(item)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        return _error_exit(EXIT_PARSE, f"bad batch input: {exc}")
    timeout = limits.get("timeout", args.timeout)
    pool = ThreadPoolExecutor(max_workers=_threads())
    futures = [
        pool.submit(compute_item, int(it["strands"]), str(it["word"]), it["colors"], it.get("outputs", []))
        for it in parsed
    ]
    results, code = [], EXIT_OK
    for idx, fut in enumerate(futures):
        try:
            results.append(fut.result(timeout=timeout))
        except FutureTimeout:
            results.append({"error": "timeout"})
            code = EXIT_TIMEOUT
        except (AlgebraError, AssertionError, RuntimeError) as exc:
            results.append({"error": f"{type(exc).__name__}: {exc}"})
            code = max(code, EXIT_INTERNAL) if code != EXIT_TIMEOUT else code
    print(json.dumps(results, sort_keys=True))
    sys.stdout.flush()
    if code == EXIT_TIMEOUT:
        # abandon workers that are still running
        os._exit(code)
    pool.shutdown()
    return code


# ---------------------------------------------------------------------------
# oracle and verify


def run_oracle(args) -> int:
    try:
        cb = parse_colored(args.strands, args.word, args.colors)
        if not is_closable(cb):
            raise NotClosableError("braid is not closable")
        o = oracle_invariant(cb, choices=args.choices)
        v = cpf_closed_braid(cb)
    except ParseError as exc:
        return _error_exit(EXIT_PARSE, str(exc))
    except NotClosableError as exc:
        return _error_exit(EXIT_NOT_CLOSABLE, str(exc))
    except (AlgebraError, AssertionError, RuntimeError) as exc:
        return _error_exit(EXIT_INTERNAL, f"{type(exc).__name__}: {exc}")
    names = [f"t_{c}" for c in o.colors]
    unit = resolve_unit(o.value, v.value)
    print(f"oracle: {o.value.to_str(names)}")
    print(f"engine: {v.to_str()}")
    if unit is None:
        print("unit: none (values disagree)")
        return EXIT_VERIFY
    sign, exps = unit
    mono = "*".join(f"{n}^{e}" for n, e in zip(names, exps) if e) or "1"
    print(f"unit: {'-' if sign < 0 else '+'}{mono}")
    return EXIT_OK


def run_verify(args) -> int:
    from .verify import SUITES

    fn = SUITES[args.suite]
    kwargs: dict[str, Any] = {}
    if args.suite not in ("identities", "table1"):
        kwargs = dict(trials=args.trials, seed=args.seed, max_strands=args.max_strands,
                      max_length=args.max_length)
        if args.trials is None:
            kwargs.pop("trials")
    try:
        report = fn(**kwargs)
    except (AlgebraError, AssertionError, RuntimeError) as exc:
        traceback.print_exc()
        return _error_exit(EXIT_INTERNAL, f"{type(exc).__name__}: {exc}")
    for line in report.lines(verbose=args.verbose):
        print(line)
    return EXIT_OK if report.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cpfskein", description="Conway potential function of closed colored braids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="evaluate the potential function")
    c.add_argument("--strands", type=int)
    c.add_argument("--word", help='whitespace separated signed generators, e.g. "1 -2 1"')
    c.add_argument("--colors", help='one color name per strand, e.g. "a b a"')
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--alexander", action="store_true", help="also print the Alexander polynomial")
    c.add_argument("--uncolored", action="store_true", help="also print the one-variable value")
    c.add_argument("--oracle", action="store_true", help="cross-check with the Fox calculus oracle")
    c.add_argument("--timeout", type=float, default=None, help="seconds per item")
    c.add_argument("--batch", metavar="FILE", help="JSON job file, '-' for stdin")
    c.set_defaults(func=run_compute)

    o = sub.add_parser("oracle", help="compare the engine with the Fox calculus oracle")
    o.add_argument("--strands", type=int, required=True)
    o.add_argument("--word", required=True)
    o.add_argument("--colors", required=True)
    o.add_argument("--choices", type=int, default=3, help="number of (row, column) deletions to try")
    o.set_defaults(func=run_oracle)

    v = sub.add_parser("verify", help="run a seeded property suite")
    v.add_argument("--suite", required=True,
                   choices=("axioms", "invariance", "identities", "table1", "oracle", "knots", "merge"))
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-strands", type=int, default=4)
    v.add_argument("--max-length", type=int, default=10)
    v.add_argument("--verbose", action="store_true", help="print passing checks too")
    v.set_defaults(func=run_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
