"""Command-line front end: ``lyndonrf <subcommand> ...``.

Results go to stdout as JSON (default), CSV or aligned text, always with
the run metadata needed to reproduce them. Progress goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from typing import Any

from . import __version__
from .counting import atom_mass, count_report
from .factorize import enumerate_lyndon, factorization_tree, standard_right_factor
from .runs_blocks import BlockParams, classify_good, decompose_blocks
from .sampling import GENERATOR_NAME, lyndon_batch, make_rng, sample_word, sample_word_geometric
from .stats import CHUNK, exact_r_distribution, montecarlo_r, tail_check_runs
from .words import AlphabetError, Word

DEFAULT_EPSILON = 0.2


class UsageError(Exception):
    pass


def _metadata(args, start: float, seed=None, workers: int = 1, streams=None) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    meta = {"command": args.command, "parameters": params, "seed": seed,
            "generator": GENERATOR_NAME if seed is not None else None,
            "streams": streams, "workers": workers, "version": __version__,
            "duration_s": round(time.perf_counter() - start, 3)}
    return meta


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _text(result: Any, meta: dict) -> str:
    lines = [f"# {k}: {json.dumps(_jsonable(v))}" for k, v in meta.items()]
    if isinstance(result, dict):
        width = max((len(str(k)) for k in result), default=0)
        for k, v in result.items():
            lines.append(f"{str(k):<{width}}  {json.dumps(_jsonable(v))}")
    elif isinstance(result, list):
        lines += [" ".join(str(c) for c in row) if isinstance(row, (list, tuple)) else str(row)
                  for row in result]
    else:
        lines.append(str(result))
    return "\n".join(lines) + "\n"


def _csv(header: list[str], rows: list, meta: dict) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {json.dumps(_jsonable(v))}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, result: Any, meta: dict, header=None, rows=None) -> str:
    fmt = args.format
    if fmt == "csv":
        if header is None:
            if isinstance(result, dict):
                header, rows = list(result), [[_jsonable(v) for v in result.values()]]
            else:
                raise UsageError(f"{args.command} has no CSV form")
        return _csv(header, rows, meta)
    if fmt == "text":
        return _text(result, meta)
    return json.dumps({"metadata": _jsonable(meta), "result": _jsonable(result)}, indent=2) + "\n"


def _word(args) -> Word:
    try:
        return Word.parse(args.word, args.q)
    except AlphabetError as exc:
        raise UsageError(str(exc)) from None


def _params(args, n: int, q: int) -> BlockParams:
    from dataclasses import replace
    p = BlockParams.for_length(n, q, args.epsilon)
    overrides = {k: getattr(args, k) for k in ("min_run", "min_block_len", "max_run",
                                               "min_separation", "h_lo", "h_hi")
                 if getattr(args, k, None) is not None}
    return replace(p, **overrides)


# -- subcommands -------------------------------------------------------------

def cmd_count(args, start):
    if args.table:
        try:
            lo, hi = (int(x) for x in args.table.split(".."))
        except ValueError:
            raise UsageError("--table expects a range like 1..20") from None
        rows = []
        for n in range(lo, hi + 1):
            rep = count_report(n, args.q)
            am = atom_mass(n, args.q) if n >= 2 else None
            rows.append([n, args.q, rep.primitive_count, rep.lyndon_count, rep.nonprimitive_count,
                         "" if am is None else f"{am.numerator}/{am.denominator}",
                         "" if am is None else float(am)])
        header = ["n", "q", "primitive_count", "lyndon_count", "nonprimitive_count",
                  "atom_mass", "atom_mass_float"]
        args.format = "csv" if args.format == "json" else args.format
        meta = _metadata(args, start)
        if args.format == "text":
            return _text([header] + rows, meta)
        return _csv(header, rows, meta)
    if args.n is None:
        raise UsageError("count needs --n (or --table)")
    result = count_report(args.n, args.q).to_dict()
    if args.n >= 2:
        am = atom_mass(args.n, args.q)
        result["atom_mass"] = f"{am.numerator}/{am.denominator}"
        result["atom_mass_float"] = float(am)
    return _emit(args, result, _metadata(args, start))


def cmd_enumerate(args, start):
    words = []
    for i, w in enumerate(enumerate_lyndon(args.n, args.q)):
        if args.limit is not None and i >= args.limit:
            break
        words.append(str(w))
    meta = _metadata(args, start)
    if args.format == "csv":
        return _csv(["word"], [[w] for w in words], meta)
    return _emit(args, words, meta)


def cmd_factor(args, start):
    w = _word(args)
    try:
        f = standard_right_factor(w)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _emit(args, f.to_dict(), _metadata(args, start))


def cmd_tree(args, start):
    w = _word(args)
    try:
        tree = factorization_tree(w)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        return _emit(args, {"height": tree.height, "tree": tree.to_dict()}, _metadata(args, start))
    meta = _metadata(args, start)
    header = "".join(f"# {k}: {json.dumps(_jsonable(v))}\n" for k, v in meta.items())
    return header + tree.render() + "\n"


def cmd_blocks(args, start):
    w = _word(args)
    if len(w) < 2:
        raise UsageError("blocks needs a word of length >= 2")
    params = _params(args, len(w), w.q)
    dec = decompose_blocks(w, params)
    result = dec.to_dict()
    try:
        result["good"] = classify_good(w, params, dec).to_dict()
    except ValueError:
        result["good"] = None
    return _emit(args, result, _metadata(args, start))


def cmd_sample(args, start):
    rng = make_rng(args.seed)
    if args.lyndon:
        mat, rejected = lyndon_batch(args.n, args.q, args.count, rng)
        words = [str(Word._wrap(row, args.q)) for row in mat]
        extra = {"rejections": rejected}
    else:
        draw = sample_word_geometric if args.geometric else sample_word
        words = [str(draw(args.n, args.q, rng)) for _ in range(args.count)]
        extra = {}
    meta = _metadata(args, start, seed=args.seed, streams=1)
    if args.summary:
        return _emit(args, {"count": len(words), "distinct": len(set(words)), **extra}, meta)
    if args.format == "csv":
        return _csv(["word"], [[w] for w in words], meta)
    return _emit(args, {"words": words, **extra} if extra else words, meta)


def cmd_exact_dist(args, start):
    try:
        dist = exact_r_distribution(args.n, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = _metadata(args, start)
    if args.format == "csv":
        rows = [[r, f"{p.numerator}/{p.denominator}", float(p)] for r, p in dist.support.items()]
        return _csv(["R", "probability", "probability_float"], rows, meta)
    return _emit(args, dist.to_dict(), meta)


def _mc_output(args, report, start):
    streams = -(-report.sample_count // CHUNK)
    meta = _metadata(args, start, seed=args.seed, workers=args.workers, streams=streams)
    if args.format == "csv":
        return _csv(["n", "R_n", "r_n", "is_atom", "is_good", "d_n"],
                    report.per_sample_rows(), meta)
    return _emit(args, report.to_dict(), meta)


def cmd_limit_check(args, start):
    report = montecarlo_r(args.n, args.q, args.samples, args.seed, args.epsilon,
                          workers=args.workers, with_blocks=not args.no_blocks,
                          progress=args.progress)
    return _mc_output(args, report, start)


def cmd_dn_check(args, start):
    report = montecarlo_r(args.n, args.q, args.samples, args.seed, args.epsilon,
                          workers=args.workers, min_good=args.min_good, progress=args.progress)
    return _mc_output(args, report, start)


def cmd_tails(args, start):
    report = tail_check_runs(args.n, args.q, args.samples, args.seed, args.epsilon)
    return _emit(args, report.to_dict(), _metadata(args, start, seed=args.seed, streams=-(-args.samples // CHUNK)))


# -- parser ------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _alphabet(text: str) -> int:
    v = _positive(text)
    if v < 2:
        raise argparse.ArgumentTypeError("alphabet size q must be >= 2")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return v


def _epsilon(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lyndonrf", description="Random Lyndon words and their standard right factor.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv", "text"), default="json",
                     help="output format (default: json)")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv",
                     help="shorthand for --format csv")
    word_q = argparse.ArgumentParser(add_help=False)
    word_q.add_argument("--q", type=_alphabet, default=None,
                        help="alphabet size (default: inferred, at least 2)")
    nq = argparse.ArgumentParser(add_help=False)
    nq.add_argument("--n", type=_positive, required=True, help="word length")
    nq.add_argument("--q", type=_alphabet, default=2, help="alphabet size (default: 2)")
    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default: 0)")
    mc.add_argument("--epsilon", type=_epsilon, default=DEFAULT_EPSILON,
                    help=f"block threshold parameter (default: {DEFAULT_EPSILON})")
    mc.add_argument("--workers", type=_positive, default=1,
                    help="worker processes; output does not depend on it (default: 1)")
    mc.add_argument("--progress", action="store_true", help="report progress on stderr")

    p = sub.add_parser("count", parents=[fmt], help="exact primitive/Lyndon counts and atom mass")
    p.add_argument("--n", type=_positive, help="word length")
    p.add_argument("--q", type=_alphabet, default=2, help="alphabet size (default: 2)")
    p.add_argument("--table", help="range n1..n2; emits one CSV row per n")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", parents=[fmt, nq], help="list Lyndon words in lexicographic order")
    p.add_argument("--limit", type=_positive, default=None, help="stop after this many words")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("factor", parents=[fmt, word_q], help="standard factorization of a Lyndon word")
    p.add_argument("word", help='letters ("aab") or comma-separated integers ("0,0,1")')
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("tree", parents=[word_q], help="recursive factorization tree")
    p.add_argument("word")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="indented text or JSON (default: text)")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("blocks", parents=[fmt, word_q], help="long/short block decomposition")
    p.add_argument("word")
    p.add_argument("--epsilon", type=_epsilon, default=DEFAULT_EPSILON,
                   help=f"block threshold parameter (default: {DEFAULT_EPSILON})")
    for name in ("min-run", "min-block-len", "max-run", "min-separation"):
        p.add_argument(f"--{name}", type=_positive, default=None,
                       help="override the threshold derived from n, q and epsilon")
    p.add_argument("--h-lo", type=float, default=None, help="override lower long-block count bound")
    p.add_argument("--h-hi", type=float, default=None, help="override upper long-block count bound")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("sample", parents=[fmt, nq], help="draw random words")
    p.add_argument("--count", type=_positive, default=1, help="number of words (default: 1)")
    p.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default: 0)")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--lyndon", action="store_true", help="uniform Lyndon words")
    kind.add_argument("--geometric", action="store_true", help="build words from geometric runs")
    p.add_argument("--summary", action="store_true", help="print counts instead of words")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("exact-dist", parents=[fmt, nq], help="exact law of R_n by enumeration")
    p.set_defaults(func=cmd_exact_dist)

    p = sub.add_parser("limit-check", parents=[fmt, nq, mc], help="Monte Carlo law of r_n = R_n/n")
    p.add_argument("--samples", type=_positive, default=20000, help="number of Lyndon words (default: 20000)")
    p.add_argument("--no-blocks", action="store_true", help="skip good-word classification and d_n")
    p.set_defaults(func=cmd_limit_check)

    p = sub.add_parser("dn-check", parents=[fmt, nq, mc], help="Monte Carlo law of d_n on good words")
    p.add_argument("--samples", type=_positive, default=1024, help="minimum number of draws (default: 1024)")
    p.add_argument("--min-good", type=_positive, default=5000, help="keep drawing until this many good words (default: 5000)")
    p.set_defaults(func=cmd_dn_check)

    p = sub.add_parser("tails", parents=[fmt, nq, mc], help="run-statistic tail frequencies")
    p.add_argument("--samples", type=_positive, default=10000, help="number of Lyndon words (default: 10000)")
    p.set_defaults(func=cmd_tails)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        out = args.func(args, start)
    except (UsageError, AlphabetError) as exc:
        print(f"lyndonrf {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"lyndonrf {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"lyndonrf {args.command}: internal check failed: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
