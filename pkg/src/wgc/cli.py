"""Command line front end: ``wgc enum|gram|weingarten|integrate|law|bp|sweep|verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from contextlib import contextmanager
from typing import Sequence

from .categories import (
    BoundExceeded, category_of, enumerate_category, parse_category, parse_group,
)
from .laws import PrecisionError, bp_check, law_moments, moments_to_cumulants, parse_law
from .partitions import format_word, parse_word
from .verify import SUITES, run_suite
from .weingarten import (
    MODES, SingularGramError, char_moment, char_moment_limit, gram,
    hypergeometric_equality, integrate, integrate_sphere, weingarten,
)

EXIT_OK, EXIT_USAGE, EXIT_BOUND, EXIT_NUMERIC, EXIT_FAILED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def parse_range(text: str) -> list[int]:
    """``"2..8"`` -> [2, ..., 8]; ``"3"`` -> [3]; ``"1,4,5"`` -> [1, 4, 5]."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None


def parse_index(text: str | None, length: int) -> tuple[int, ...]:
    """``"1121"`` for single digits, or ``"1,12,3"`` when N >= 10."""
    if text is None:
        return (1,) * length
    parts = text.split(",") if "," in text else list(text)
    try:
        index = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad index {text!r}") from None
    if len(index) != length:
        raise UsageError(f"index {text!r} has length {len(index)}, expected {length}")
    return index


def read_config(path: str) -> list[str]:
    """Turn ``key=value`` lines into flags; booleans become bare flags when true."""
    flags: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line {raw.strip()!r} is not key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = ("-" if len(key) == 1 else "--") + key.replace("_", "-")
            if value.lower() in ("true", "yes", "on"):
                flags.append(flag)
            elif value.lower() not in ("false", "no", "off"):
                flags += [flag, value]
    return flags


# ------------------------------------------------------------------ output

def _cell(value) -> str:
    return str(value)


def emit(args, columns: list[str], rows: list[dict], meta: dict | None = None) -> str:
    """Render rows as pretty text, CSV or JSON; rationals stay exact ``p/q`` strings."""
    columns = list(columns)
    if args.float:
        extra = []
        for c in columns:
            extra.append(c)
            if rows and isinstance(rows[0].get(c), Fraction):
                extra.append(c + "_float")
                for r in rows:
                    r[c + "_float"] = f"{float(r[c]):.12g}"
        columns = extra
    if args.format == "json":
        payload = dict(meta or {})
        payload["columns"] = columns
        payload["rows"] = [{c: _cell(r[c]) for c in columns} for r in rows]
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    table = [[_cell(r[c]) for c in columns] for r in rows]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(table)
        return buf.getvalue()
    widths = [max([len(c)] + [len(row[n]) for row in table]) for n, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in table]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def _word_from(args) -> tuple[int, ...]:
    if getattr(args, "word", None) is not None:
        return parse_word(args.word)
    if getattr(args, "k", None) is not None:
        return (0,) * args.k
    raise UsageError("give a color word with --word or a length with -k")


def cmd_enum(args) -> str:
    cat = parse_category(args.category)
    word = cat.normalize_word(_word_from(args))
    D = enumerate_category(cat, word)
    rows = [{"index": n, "partition": str(p), "blocks": p.n_blocks} for n, p in enumerate(D)]
    meta = {"category": str(cat), "word": format_word(word), "count": len(D)}
    text = emit(args, ["index", "partition", "blocks"], rows, meta)
    if args.format == "pretty":
        text = f"{len(D)} partitions in {cat} on word {format_word(word) or '(empty)'}\n" + text
    return text


def _matrix_output(args, matrix, cat, word) -> str:
    names = [str(p) for p in matrix.index]
    rows = [dict({"partition": names[a]}, **{names[b]: matrix.entries[a][b]
                                              for b in range(len(names))})
            for a in range(len(names))]
    meta = {"category": str(cat), "N": args.N, "word": format_word(word),
            "matrix_index": names}
    return emit(args, ["partition"] + names, rows, meta)


def cmd_gram(args) -> str:
    cat = parse_category(args.category)
    word = cat.normalize_word(_word_from(args))
    return _matrix_output(args, gram(cat, word, args.N), cat, word)


def cmd_weingarten(args) -> str:
    cat = parse_category(args.category)
    word = cat.normalize_word(_word_from(args))
    return _matrix_output(args, weingarten(cat, word, args.N, args.mode), cat, word)


def cmd_integrate(args) -> str:
    group = parse_group(args.group)
    word = _word_from(args)
    cat = category_of(group)
    k = len(word)
    if args.char:
        if args.s is None:
            raise UsageError("--char needs -s")
        value = char_moment(group, args.N, word, args.s, args.twist, args.mode)
        kind = "character"
    elif args.sphere:
        value = integrate_sphere(group, args.N, word, parse_index(args.i, k), args.twist,
                                 args.mode)
        kind = "sphere"
    else:
        value = integrate(group, args.N, word, parse_index(args.i, k), parse_index(args.j, k),
                          args.twist, args.mode)
        kind = "group"
    D = enumerate_category(cat, cat.normalize_word(word))
    record = {"category": str(cat), "N": args.N, "word": format_word(word), "value": str(value),
              "matrix_index": [str(p) for p in D]}
    if args.format == "json":
        record["integral"] = kind
        if args.float:
            record["float"] = f"{float(value):.12g}"
        return json.dumps(record, indent=2, ensure_ascii=False) + "\n"
    if args.format == "csv":
        return emit(args, ["category", "N", "word", "value"],
                    [{"category": str(cat), "N": args.N, "word": format_word(word),
                      "value": value}])
    return f"{value}\t{float(value):.12g}\n" if args.float or args.format == "pretty" \
        else f"{value}\n"


def cmd_law(args) -> str:
    law = parse_law(args.law)
    m = law_moments(law, args.k)
    columns = ["k", "moment"]
    rows = [{"k": k, "moment": m[k]} for k in range(args.k + 1)]
    if args.cumulants:
        c = moments_to_cumulants(m, args.cumulants)
        columns.append(f"{args.cumulants}_cumulant")
        for row in rows:
            row[columns[-1]] = c[row["k"]] if row["k"] else Fraction(0)
    return emit(args, columns, rows, {"law": str(law)})


def cmd_bp(args) -> str:
    report = bp_check(parse_law(args.classical), parse_law(args.free), args.k)
    rows = [{"n": n, "classical_cumulant": a, "free_cumulant": b, "equal": a == b}
            for n, (a, b) in enumerate(zip(report.classical_cumulants,
                                           report.free_cumulants), start=1)]
    meta = {"ok": report.ok, "first_discrepancy": report.first_discrepancy}
    text = emit(args, ["n", "classical_cumulant", "free_cumulant", "equal"], rows, meta)
    if args.format == "pretty":
        verdict = "match" if report.ok else f"differ first at order {report.first_discrepancy}"
        text += f"cumulants {verdict}\n"
    return text


def cmd_sweep(args) -> str:
    rows: list[dict] = []
    if args.kind == "char":
        group = parse_group(_require(args.group, "group"))
        t = Fraction(args.t)
        columns = ["N", "k", "s", "value", "limit"]
        for N in parse_range(_require(args.N, "--N")):
            s = max(1, int(t * N))
            for k in parse_range(_require(args.k, "--k")):
                rows.append({"N": N, "k": k, "s": s,
                             "value": char_moment(group, N, k, s, mode=args.mode),
                             "limit": char_moment_limit(group, t, k)})
    elif args.kind == "sphere":
        group = parse_group(_require(args.group, "group"))
        columns = ["N", "k", "value"]
        for N in parse_range(_require(args.N, "--N")):
            for k in parse_range(_require(args.k, "--k")):
                rows.append({"N": N, "k": k,
                             "value": integrate_sphere(group, N, k, (1,) * k, mode=args.mode)})
    else:
        columns = ["n", "k", "lhs", "rhs", "equal"]
        for n in parse_range(_require(args.n, "--n")):
            for k in parse_range(_require(args.k, "--k")):
                lhs, rhs = hypergeometric_equality(n, k, args.mode)
                rows.append({"n": n, "k": k, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs})
    return emit(args, columns, rows, {"sweep": args.kind})


def _require(value, name: str):
    if value is None:
        raise UsageError(f"this sweep needs {name}")
    return value


def cmd_verify(args) -> tuple[str, bool]:
    kwargs: dict = {}
    if args.max_k is not None:
        kwargs["max_k"] = args.max_k
    if args.N is not None:
        kwargs["Ns"] = parse_range(args.N)
    if args.l is not None:
        kwargs["ls"] = parse_range(args.l)
    start = time.perf_counter()
    results = run_suite(args.suite, **kwargs)
    ok = all(r.passed for r in results)
    if args.format == "json":
        payload = {"suite": args.suite, "passed": ok,
                   "seconds": round(time.perf_counter() - start, 3),
                   "checks": [r.to_json() for r in results]}
        return json.dumps(payload, indent=2, ensure_ascii=False, default=str) + "\n", ok
    rows = [{"criterion": r.criterion, "name": r.name, "result": "PASS" if r.passed else "FAIL",
             "seconds": f"{r.seconds:.2f}"} for r in results]
    text = emit(args, ["criterion", "name", "result", "seconds"], rows)
    if args.format == "pretty":
        for r in results:
            if not r.passed:
                text += f"criterion {r.criterion} details: " + \
                    json.dumps(r.details, ensure_ascii=False, default=str) + "\n"
    return text, ok


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    common.add_argument("--float", action="store_true", help="add decimal columns")
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--config", help="key=value file of default flags")
    common.add_argument("--max-points", type=int, help="enumeration bound (default 12)")
    common.add_argument("--mode", choices=MODES, default="strict",
                        help="pseudo inverts singular Gram matrices on a maximal independent set")

    parser = _Parser(prog="wgc", description="Exact Weingarten integration for easy groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enum", parents=[common], help="list D(k) for a category")
    p.add_argument("category")
    p.add_argument("-k", "--k", type=int)
    p.add_argument("--word")
    p.set_defaults(run=cmd_enum)

    for name, fn in (("gram", cmd_gram), ("weingarten", cmd_weingarten)):
        p = sub.add_parser(name, parents=[common], help=f"dump the {name} matrix")
        p.add_argument("category")
        p.add_argument("-N", "--N", type=int, required=True)
        p.add_argument("-k", "--k", type=int)
        p.add_argument("--word")
        p.set_defaults(run=fn)

    p = sub.add_parser("integrate", parents=[common], help="evaluate one integral")
    p.add_argument("group")
    p.add_argument("-N", "--N", type=int, required=True)
    p.add_argument("-k", "--k", type=int)
    p.add_argument("--word")
    p.add_argument("-i", "--i")
    p.add_argument("-j", "--j")
    p.add_argument("--sphere", action="store_true")
    p.add_argument("--char", action="store_true")
    p.add_argument("-s", "--s", type=int)
    p.add_argument("--twist", action="store_true")
    p.set_defaults(run=cmd_integrate)

    p = sub.add_parser("law", parents=[common], help="moments of a named law")
    p.add_argument("law")
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--cumulants", choices=("classical", "free"))
    p.set_defaults(run=cmd_law)

    p = sub.add_parser("bp", parents=[common], help="compare classical and free cumulants")
    p.add_argument("classical")
    p.add_argument("free")
    p.add_argument("-k", "--k", type=int, required=True)
    p.set_defaults(run=cmd_bp)

    p = sub.add_parser("sweep", parents=[common], help="tables over ranges of N, k, t")
    p.add_argument("kind", choices=("char", "sphere", "hypergeom"))
    p.add_argument("group", nargs="?")
    p.add_argument("-N", "--N")
    p.add_argument("-n", "--n")
    p.add_argument("-k", "--k")
    p.add_argument("-t", "--t", default="1")
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--max-k", type=int)
    p.add_argument("-N", "--N")
    p.add_argument("-l", "--l")
    p.set_defaults(run=cmd_verify)
    return parser


def _apply_config(argv: list[str]) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config or not argv:
        return argv
    return argv[:1] + read_config(known.config) + argv[1:]


@contextmanager
def _bound(limit: int | None):
    """Set the enumeration bound for one run only."""
    if limit is None:
        yield
        return
    saved = os.environ.get("WGC_MAX_POINTS")
    os.environ["WGC_MAX_POINTS"] = str(limit)
    try:
        yield
    finally:
        if saved is None:
            del os.environ["WGC_MAX_POINTS"]
        else:
            os.environ["WGC_MAX_POINTS"] = saved


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_apply_config(argv))
        with _bound(args.max_points):
            result = args.run(args)
        text, ok = result if isinstance(result, tuple) else (result, True)
    except UsageError as exc:
        print(f"wgc: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceeded as exc:
        print(f"wgc: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (SingularGramError, PrecisionError) as exc:
        print(f"wgc: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"wgc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
