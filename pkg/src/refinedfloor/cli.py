"""Command-line front end.

Subcommands:
  count    direct enumeration of marked floor diagrams (itemized report)
  recurse  the same count via the recursion (memoized, cacheable)
  check    both methods; non-zero exit on any disagreement
  bps      relative BPS (with --mu1/--mu2) or surface BPS polynomial
  table    batch recursion over a grid of classes/types, JSON lines
  cache    inspect / verify / clear the persistent cache

Exit codes: 0 ok, 2 flag errors, 3 invalid problem data, 4 cross-check
mismatch, 5 divisibility/integrality failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations_with_replacement

from . import bps as bps_mod
from . import partitions
from .chrec import MemoCache, ch_count
from .classes import CurveClass, SpecInvalid
from .counts import count_refined, report
from .markings import MarkingSpec
from .partitions import partitions_of
from .qalgebra import HalfLaurent, NotDivisible

EXIT_SPEC_INVALID = 3
EXIT_MISMATCH = 4
EXIT_NOT_DIVISIBLE = 5


def _add_key_flags(p: argparse.ArgumentParser, need_class: bool = True) -> None:
    p.add_argument("--k", type=int, default=None, help="number of blown-up points (0-6)")
    p.add_argument("--class", dest="cls", required=need_class,
                   help='curve class "a;b1,...,bk"')
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--mu1", default="", help='fixed tangencies, e.g. "1,2" (empty = none)')
    p.add_argument("--mu2", default="", help='free tangencies, e.g. "1,1,2" (empty = none)')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cache", default=None, help="persistent cache path (JSON lines)")
    p.add_argument("--cache-read-only", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for batch work")


def _parse_key(args) -> tuple[CurveClass, int, tuple, tuple]:
    d = CurveClass.from_text(args.cls, k=args.k)
    return d, args.genus, partitions.parse(args.mu1), partitions.parse(args.mu2)


def _cache_from(args) -> MemoCache:
    path = args.cache or os.environ.get("REFINED_FLOOR_CACHE")
    return MemoCache(path, read_only=getattr(args, "cache_read_only", False))


def _emit_value(value: HalfLaurent, fmt: str, extra: dict | None = None) -> None:
    if fmt == "json":
        obj = {"value": value.to_json_obj(), "text": value.to_text()}
        obj.update(extra or {})
        print(json.dumps(obj))
    else:
        print(value.to_text())


def _cmd_count(args) -> int:
    d, g, mu1, mu2 = _parse_key(args)
    rep = report(MarkingSpec(d, g, mu1, mu2))
    if args.format == "json":
        print(rep.to_json())
    else:
        print(rep.to_table())
    return 0


def _cmd_recurse(args) -> int:
    d, g, mu1, mu2 = _parse_key(args)
    cache = _cache_from(args)
    value = ch_count(d, g, mu1, mu2, cache)
    _emit_value(value, args.format)
    return 0


def _cmd_check(args) -> int:
    d, g, mu1, mu2 = _parse_key(args)
    cache = _cache_from(args)
    enum = count_refined(MarkingSpec(d, g, mu1, mu2))
    rec = ch_count(d, g, mu1, mu2, cache)
    agree = enum == rec
    if args.format == "json":
        print(json.dumps({
            "enumerate": enum.to_text(),
            "recurse": rec.to_text(),
            "agree": agree,
        }))
    else:
        print(f"enumerate: {enum.to_text()}")
        print(f"recurse:   {rec.to_text()}")
        print("agree" if agree else "MISMATCH")
    return 0 if agree else EXIT_MISMATCH


def _cmd_bps(args) -> int:
    d, g, mu1, mu2 = _parse_key(args)
    cache = _cache_from(args)
    if mu1 or mu2:
        value = bps_mod.relative_bps(d, g, mu1, mu2, cache=cache)
    elif d.k == 6:
        value = bps_mod.bps_cubic(d, g, cache)
    else:
        value = bps_mod.bps_delpezzo_high(d.k, d, g, cache)
    if not (value.has_only_integer_powers() and value.has_integer_coefficients()):
        print(f"integrality failure: {value.to_text()}", file=sys.stderr)
        return EXIT_NOT_DIVISIBLE
    if args.format == "json":
        print(bps_mod.decompose_bps(value, g).to_json())
    else:
        _emit_value(value, args.format)
    return 0


def _table_job(job) -> str:
    (k, a, b, g, mu1, mu2, cache_path) = job
    d = CurveClass(k, a, b)
    value = ch_count(d, g, mu1, mu2, MemoCache(cache_path, read_only=True)
                     if cache_path else None)
    return json.dumps({
        "k": k, "class": d.to_text(), "genus": g,
        "mu1": list(mu1), "mu2": list(mu2),
        "value": value.to_json_obj(), "text": value.to_text(),
    })


def _cmd_table(args) -> int:
    k = args.k if args.k is not None else 6
    jobs = []
    for a in range(1, args.max_degree + 1):
        for b in combinations_with_replacement(range(2 * a, -1, -1), k):
            b = tuple(sorted(b, reverse=True))
            d = CurveClass(k, a, b)
            if d.dot_E() < 0:
                continue
            for g in range(args.max_genus + 1):
                for s1 in range(d.dot_E() + 1):
                    for m1 in partitions_of(s1):
                        for m2 in partitions_of(d.dot_E() - s1):
                            jobs.append((k, a, b, g, m1, m2, args.cache))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for line in pool.map(_table_job, jobs):
                print(line)
    else:
        cache = _cache_from(args)
        for (k_, a, b, g, m1, m2, _) in jobs:
            d = CurveClass(k_, a, b)
            value = ch_count(d, g, m1, m2, cache)
            print(json.dumps({
                "k": k_, "class": d.to_text(), "genus": g,
                "mu1": list(m1), "mu2": list(m2),
                "value": value.to_json_obj(), "text": value.to_text(),
            }))
    return 0


def _cmd_cache(args) -> int:
    path = args.cache or os.environ.get("REFINED_FLOOR_CACHE")
    if not path:
        print("no cache path given (--cache or REFINED_FLOOR_CACHE)", file=sys.stderr)
        return 2
    if args.action == "clear":
        if os.path.exists(path):
            os.remove(path)
        print("cleared")
        return 0
    if not os.path.exists(path):
        print("cache file does not exist")
        return 0
    bad = 0
    n = 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            n += 1
            try:
                rec = json.loads(line)
                if MemoCache._checksum(rec["key"], rec["value"]) != rec["checksum"]:
                    bad += 1
            except (ValueError, KeyError):
                bad += 1
    print(f"{n} records, {bad} corrupt")
    return 0 if (args.action == "inspect" or bad == 0) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="refinedfloor", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn in (("count", _cmd_count), ("recurse", _cmd_recurse),
                     ("check", _cmd_check), ("bps", _cmd_bps)):
        p = sub.add_parser(name)
        _add_key_flags(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("table")
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--max-genus", type=int, default=0)
    p.add_argument("--cache", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_table)

    p = sub.add_parser("cache")
    p.add_argument("action", choices=("inspect", "verify", "clear"))
    p.add_argument("--cache", default=None)
    p.set_defaults(fn=_cmd_cache)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except SpecInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC_INVALID
    except NotDivisible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DIVISIBLE
    return code


if __name__ == "__main__":
    sys.exit(main())
