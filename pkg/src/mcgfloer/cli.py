"""Command-line entry point.

Exit codes: 0 success, 2 bad input, 3 verification failure, 1 internal or
computation error.  JSON output (``--json``) is wrapped in an envelope
``{"schema": SCHEMA_VERSION, "command": ..., "result": ...}`` described by
``schema/output.schema.json``; it contains no timings unless ``--timings``
is given, so repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .errors import MCGFloerError, NonStabilized, ParseError, SpecInvalid, UnknownName

SCHEMA_VERSION = "mcgfloer-output/1"

log = logging.getLogger("mcgfloer")

EXIT_OK, EXIT_ERROR, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _InputError(message)


def _progress(msg: str) -> None:
    log.info(msg)


def _emit(args, command: str, result: dict, text: str) -> None:
    if args.json:
        doc = {"schema": SCHEMA_VERSION, "command": command, "result": result}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _graded_text(graded) -> str:
    if graded is None:
        return "n/a"
    return ", ".join("grade %s: %s" % kv for kv in sorted(graded.items()))


# subcommands

def cmd_hh(args) -> int:
    from .mcg import hh_of_word, invert_word, parse_word
    w = parse_word(args.word)
    if args.inverse:
        w = invert_word(w)
    res = hh_of_word(w, graded=args.graded, sandwich=args.sandwich, K_start=args.k_start,
                     K_max=args.k_max, bar=args.bar, progress=_progress)
    out = {"word": str(w), "inverse_applied": args.inverse, **res.as_dict()}
    text = ["word: %s" % (str(w) or "(identity)"),
            "rank HH: %d" % res.total,
            "graded: %s" % _graded_text(res.graded),
            "method: %s" % res.method]
    if res.stable_at is not None:
        text.append("stable from bar length %d; complex sizes %s" % (res.stable_at, res.sizes))
    text += ["note: " + n for n in res.notes]
    _emit(args, "hh", out, "\n".join(text))
    return EXIT_OK


def cmd_fixed_points(args) -> int:
    from .mcg import fixed_point_rank, parse_word
    w = parse_word(args.word)
    rows = []
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(args.jobs) as ex:
            futs = [ex.submit(_timed_fixed_point, str(w), n, args.sandwich) for n in range(1, args.powers + 1)]
            for n, f in enumerate(futs, 1):
                rank, secs = f.result()
                _progress("power %d: rank %d (%.2fs)" % (n, rank, secs))
                rows.append((n, rank, secs))
    else:
        for n in range(1, args.powers + 1):
            _progress("power %d of %d" % (n, args.powers))
            t = time.perf_counter()
            rank = fixed_point_rank(w ** n, sandwich=args.sandwich, progress=_progress).total
            rows.append((n, rank, time.perf_counter() - t))
    table = []
    for n, rank, secs in rows:
        row = {"n": n, "rank": rank}
        if args.timings:
            row["seconds"] = round(secs, 3)
        table.append(row)
    out = {"word": str(w), "quantity": "rank HH(N((w^n)^-1))", "rows": table}
    text = ["n  rank  seconds"] + ["%d  %d  %.2f" % r for r in rows]
    _emit(args, "fixed-points", out, "\n".join(text))
    return EXIT_OK


def _timed_fixed_point(word: str, n: int, sandwich: bool):
    from .mcg import fixed_point_rank, parse_word
    t = time.perf_counter()
    rank = fixed_point_rank(parse_word(word) ** n, sandwich=sandwich).total
    return rank, time.perf_counter() - t


def verify_seeds() -> dict:
    from .bimodule import check_relations, is_bounded
    from .calculus import is_isomorphic, reduce
    from .seeddata import CORPUS_NAMES, builtin, corpus_grading
    entries = []
    for name in CORPUS_NAMES:
        _progress("structure equations: %s" % name)
        m = builtin(name)
        rep = check_relations(m)
        entries.append({"name": name, "check": "structure-equations", "passed": rep.passed,
                        "detail": "%d generators, %d actions, %d violations"
                                  % (len(m.generators), len(m.actions), len(rep.violations))})
    ib = builtin("I_bounded")
    bd = is_bounded(ib)
    entries.append({"name": "I_bounded", "check": "acyclic", "passed": bd.bounded,
                    "detail": "" if bd.bounded else "cycle " + " -> ".join(bd.cycle)})
    iso = is_isomorphic(reduce(ib), builtin("I")) is not None
    entries.append({"name": "I_bounded", "check": "reduces-to-identity", "passed": iso, "detail": ""})
    try:
        gr = corpus_grading()
        entries.append({"name": "corpus", "check": "mod-2 grading", "passed": True,
                        "detail": "solved for %d bimodules" % len(gr.generator_grades)})
    except MCGFloerError as e:
        entries.append({"name": "corpus", "check": "mod-2 grading", "passed": False, "detail": str(e)})
    return {"suite": "seeds", "entries": entries, "passed": all(e["passed"] for e in entries)}


def verify_relation_suite(jobs: int = 1) -> dict:
    from .mcg import verify_relations
    _progress("relation suite")
    entries = [e.as_dict() for e in verify_relations(jobs=jobs)]
    return {"suite": "relations", "entries": entries, "passed": all(e["passed"] for e in entries)}


def cmd_verify(args) -> int:
    suites = []
    if args.suite in ("seeds", "all"):
        suites.append(verify_seeds())
    if args.suite in ("relations", "all"):
        suites.append(verify_relation_suite(args.jobs))
    ok = all(s["passed"] for s in suites)
    text = []
    for s in suites:
        for e in s["entries"]:
            label = e["name"] if "check" not in e else "%s [%s]" % (e["name"], e["check"])
            if "kind" in e:
                label = "%s [%s]" % (e["name"], e["kind"])
            text.append("%s  %s  %s" % ("ok  " if e["passed"] else "FAIL", label, e["detail"]))
    text.append("all passed" if ok else "FAILURES")
    _emit(args, "verify", {"suites": suites, "passed": ok}, "\n".join(text))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_crosscheck(args) -> int:
    from .fpfloer import CurveSystemSpec, crosscheck, parse_curve_map
    spec = CurveSystemSpec.make(parse_curve_map(args.right), parse_curve_map(args.left))
    spec.validate()
    rep = crosscheck(spec, sandwich=args.sandwich)
    hf = rep.hf
    text = ["spec: %s" % rep.spec,
            "word: %s" % (rep.word or "(identity)"),
            "HH(N(w^-1)): total %d; %s" % (rep.hh_total, _graded_text(rep.hh_graded)),
            "HF: total %d; by degree %s" % (hf.total, list(hf.by_degree)),
            "totals match: %s" % ("yes" if rep.match else "no"),
            "grade g <-> degree g+1 match: %s" % {True: "yes", False: "no", None: "n/a"}[rep.graded_match]]
    _emit(args, "crosscheck", rep.as_dict(), "\n".join(text))
    return EXIT_OK if rep.match and rep.graded_match is not False else EXIT_VERIFY


def cmd_classify(args) -> int:
    from .mcg import classify, parse_word
    w = parse_word(args.word)
    if args.max_power < 3:
        raise _InputError("--max-power must be at least 3")
    c = classify(w, args.max_power, jobs=args.jobs, progress=_progress, sandwich=args.sandwich)
    out = {"word": str(w), **c.as_dict()}
    text = ["word: %s" % (str(w) or "(identity)"), "ranks: %s" % ", ".join(map(str, c.ranks)),
            "verdict: %s (%s)" % (c.verdict, c.note)]
    _emit(args, "classify", out, "\n".join(text))
    return EXIT_OK


def _read_seed(path: str):
    from .seeddata import default_registry, parse_bimodule
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _InputError("cannot read %s: %s" % (path, e.strerror)) from None
    return parse_bimodule(text, default_registry().copy())


def _write_out(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_reduce(args) -> int:
    from .calculus import reduce
    from .seeddata import serialize_bimodule
    m = _read_seed(args.inputs[0])
    r = reduce(m)
    _progress("reduced %d -> %d generators" % (len(m.generators), len(r.generators)))
    _write_out(args.out, serialize_bimodule(r))
    return EXIT_OK


def cmd_tensor(args) -> int:
    from .calculus import box_tensor, reduce
    from .seeddata import serialize_bimodule
    if len(args.inputs) != 2:
        raise _InputError("tensor needs exactly two --in files")
    m, n = (_read_seed(p) for p in args.inputs)
    if m.right_algebra.name != n.left_algebra.name:
        raise _InputError("right circle %s of the first does not match left circle %s of the second"
                          % (m.right_algebra.name, n.left_algebra.name))
    t = box_tensor(m, n)
    if args.reduce:
        t = reduce(t)
    _write_out(args.out, serialize_bimodule(t))
    return EXIT_OK


def cmd_dump(args) -> int:
    from .seeddata import builtin, graded_builtin, serialize_bimodule
    m = graded_builtin(args.name) if args.graded else builtin(args.name)
    _write_out(args.out, serialize_bimodule(m))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mcgfloer", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    p.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    quiet = argparse.ArgumentParser(add_help=False)
    quiet.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                       help="no progress on stderr")

    def common(sp, jobs=False, sandwich=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if jobs:
            sp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
        if sandwich:
            sp.add_argument("--sandwich", action="store_true",
                            help="pair with the bounded identity model and use the finite self-pairing")

    s = sub.add_parser("hh", parents=[quiet], help="Hochschild homology of N(w)")
    s.add_argument("--word", required=True)
    s.add_argument("--inverse", action="store_true", help="use w^-1")
    s.add_argument("--graded", action="store_true", help="split ranks by mod-2 grade")
    s.add_argument("--k-start", type=int, default=2)
    s.add_argument("--k-max", type=int, default=12)
    s.add_argument("--bar", choices=("koszul", "full"), default="koszul")
    common(s)
    s.set_defaults(func=cmd_hh)

    s = sub.add_parser("fixed-points", parents=[quiet], help="rank HH(N((w^n)^-1)) for n = 1..N")
    s.add_argument("--word", required=True)
    s.add_argument("--powers", type=int, required=True)
    s.add_argument("--timings", action="store_true", help="include timings in JSON")
    common(s, jobs=True)
    s.set_defaults(func=cmd_fixed_points)

    s = sub.add_parser("verify", parents=[quiet], help="corpus and relation checks")
    s.add_argument("--suite", choices=("seeds", "relations", "all"), default="all")
    common(s, jobs=True, sandwich=False)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("crosscheck", parents=[quiet], help="HH of N(w^-1) against fixed point Floer ranks")
    s.add_argument("--right", default="", help="e.g. A:5,B:1,C:1")
    s.add_argument("--left", default="")
    common(s)
    s.set_defaults(func=cmd_crosscheck)

    s = sub.add_parser("classify", parents=[quiet], help="growth of rank HH(N((w^n)^-1))")
    s.add_argument("--word", required=True)
    s.add_argument("--max-power", type=int, required=True)
    common(s, jobs=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("reduce", parents=[quiet], help="cancel a seed file")
    s.add_argument("--in", dest="inputs", action="append", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("tensor", parents=[quiet], help="box tensor product of two seed files")
    s.add_argument("--in", dest="inputs", action="append", required=True)
    s.add_argument("--out")
    s.add_argument("--reduce", action="store_true")
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("dump", parents=[quiet], help="print a built-in bimodule in seed format")
    s.add_argument("--name", required=True)
    s.add_argument("--graded", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dump)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _InputError as e:
        print("mcgfloer: error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    if not log.handlers:
        h = logging.StreamHandler(sys.stderr)
        h.setFormatter(logging.Formatter("[mcgfloer] %(message)s"))
        log.addHandler(h)
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    log.propagate = False
    try:
        return args.func(args)
    except (_InputError, ParseError, SpecInvalid, UnknownName) as e:
        print("mcgfloer: bad input: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    except NonStabilized as e:
        print("mcgfloer: %s; trajectory %s" % (e, e.trajectory), file=sys.stderr)
        return EXIT_ERROR
    except MCGFloerError as e:
        print("mcgfloer: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:  # noqa: BLE001 - report, never traceback-dump by default
        print("mcgfloer: internal error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
