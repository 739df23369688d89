"""Command-line interface.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success (for
``typed``: every requested class certified type D), 1 some class not of type
D, 2 some class undecided, 64 usage error, 65 bad input data.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import __version__
from .basecodec import CodecError, base_of, decode, encode, is_base
from .classes import (
    DEFAULT_CLASS_THRESHOLD,
    ClassTableError,
    conjugacy_classes,
    quasi_real_classes,
    real_classes,
    structure_constant,
)
from .group import GroupError, RandomSource, group_from_generators
from .groupio import (
    DATA_ENV,
    GroupFileError,
    LogError,
    LogRecord,
    bundled_names,
    encode_witness,
    read_log,
    resolve_group,
    write_log,
)
from .perm import Permutation, PermutationError, parse_perm
from .typed import (
    NotTypeD,
    SearchConfig,
    TypeD,
    TypeDError,
    Unknown,
    classify_class,
    fusion_map,
    typed_exhaustive,
    typed_maximal,
    typed_random,
)

log = logging.getLogger("pgtyped")

EXIT_OK, EXIT_NOT_D, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA = 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(spec: str):
    try:
        return resolve_group(spec)
    except GroupError as e:
        if "unknown group" in str(e):
            raise UsageError(str(e)) from None
        raise


def _table(G, seed: int):
    return conjugacy_classes(G, RandomSource(seed))


def _class_index(table, name: str) -> int:
    try:
        return table.index(name)
    except KeyError as e:
        raise UsageError(e.args[0]) from None


def _stamp(args) -> Optional[str]:
    if not args.stamp:
        return None
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _points(text: Sequence[str]) -> list[int]:
    out = []
    for t in text:
        for tok in t.replace(",", " ").split():
            try:
                out.append(int(tok))
            except ValueError:
                raise UsageError(f"not a point: {tok!r}") from None
    return out


# -- classes ------------------------------------------------------------------

def cmd_classes(args) -> int:
    G = _load(args.group)
    T = _table(G, args.seed)
    print(f"# {G.name or args.group}  order {G.order}  {len(T)} classes")
    print(f"{'class':<6} {'order':>5} {'size':>14} {'centralizer':>14}  cycle type")
    for c in T:
        ct = ".".join(f"{L}^{m}" if m > 1 else str(L) for L, m in _runs(c.cycle_type))
        print(f"{c.name:<6} {c.element_order:>5} {c.size:>14} {c.centralizer_order:>14}  {ct}")
    return EXIT_OK


def _runs(ctype):
    out = []
    for L in ctype:
        if out and out[-1][0] == L:
            out[-1][1] += 1
        else:
            out.append([L, 1])
    return out


# -- typed --------------------------------------------------------------------

_worker_state: dict = {}


def _worker_init(spec: str, seed: int) -> None:
    G = resolve_group(spec)
    _worker_state["G"] = G
    _worker_state["T"] = _table(G, seed)


def _run_one(mode: str, c: int, cfg: SearchConfig, G=None, T=None):
    G = G if G is not None else _worker_state["G"]
    T = T if T is not None else _worker_state["T"]
    try:
        if mode == "exhaustive":
            v = typed_exhaustive(G, T, c, threshold=cfg.threshold, seed=cfg.seed)
        elif mode == "random":
            v = typed_random(G, T, c, cfg)
        else:
            v = classify_class(G, T, c, cfg)
        note = None
    except TypeDError as e:
        v, note = Unknown(0), str(e)
    return c, v, note, os.getpid()


def _embed(H, degree: int):
    """Pad a subgroup on fewer points so it fixes the extra points."""
    if H.degree == degree:
        return H
    if H.degree > degree:
        raise UsageError(f"subgroup {H.name} has degree {H.degree} > {degree}")
    gens = [Permutation(g.images + tuple(range(H.degree, degree))) for g in H.generators]
    return group_from_generators(gens, name=H.name)


def _record(args, G, T, c, v, mode, worker, source=None) -> LogRecord:
    rec = LogRecord(G.name or args.group, T[c].name, mode, v.label, seed=args.seed,
                    worker=worker, source=source, timestamp=_stamp(args))
    if isinstance(v, TypeD):
        rec.value = v.witness.subgroup_order
        rec.witnesses, rec.base = encode_witness(G, v.witness)
        rec.iterations = v.iterations
    elif isinstance(v, Unknown):
        rec.iterations = v.iterations_used
    return rec


def _describe(v, note=None) -> str:
    if isinstance(v, TypeD):
        extra = f", {v.iterations} iterations" if v.iterations is not None else ""
        return f"TypeD      |<r,s>| = {v.witness.subgroup_order}{extra}"
    if isinstance(v, NotTypeD):
        return "NotTypeD   exhaustive"
    if note:
        return f"Unknown    {note}"
    return f"Unknown    after {v.iterations_used} iterations"


def cmd_typed(args) -> int:
    if args.iters < 0:
        raise UsageError("--iters must be >= 0")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    if args.subgroup and args.mode != "maximal":
        raise UsageError("--subgroup is only meaningful with --mode maximal")
    G = _load(args.group)
    T = _table(G, args.seed)
    if args.classes:
        wanted = [_class_index(T, n) for n in args.classes]
    else:
        wanted = [i for i, c in enumerate(T) if c.element_order > 1]
    cfg = SearchConfig(iterations=args.iters, seed=args.seed, threshold=args.threshold)
    subs = [_embed(_load(s), G.degree) for s in args.subgroup]
    print(f"# {G.name or args.group}  order {G.order}  mode {args.mode}")

    verdicts: dict[int, tuple] = {}
    if args.mode == "maximal":
        res = typed_maximal(G, T, subs, cfg)
        for c in wanted:
            v = res.verdicts.get(c)
            if v is None:
                v = NotTypeD() if T[c].size == 1 else classify_class(G, T, c, cfg)
            verdicts[c] = (v, None, 0, res.sources.get(c))
    elif args.workers == 1:
        for c in wanted:
            _, v, note, _ = _run_one(args.mode, c, cfg, G, T)
            verdicts[c] = (v, note, 0, None)
    else:
        with ProcessPoolExecutor(args.workers, initializer=_worker_init,
                                 initargs=(args.group, args.seed)) as ex:
            results = list(ex.map(_run_one, [args.mode] * len(wanted), wanted, [cfg] * len(wanted)))
        pids: dict[int, int] = {}  # process id -> worker number, by first appearance
        for c, v, note, pid in results:
            verdicts[c] = (v, note, pids.setdefault(pid, len(pids)), None)

    records = []
    for c in wanted:
        v, note, worker, source = verdicts[c]
        cls = T[c]
        src = f"  via {source}" if source and source != (G.name or "group") else ""
        print(f"{cls.name:<6} {cls.size:>14}  {_describe(v, note)}{src}")
        records.append(_record(args, G, T, c, v, args.mode, worker, source))
    if args.out:
        write_log(args.out, records, append=args.append)

    labels = {verdicts[c][0].label for c in wanted}
    summary = {lab: [T[c].name for c in wanted if verdicts[c][0].label == lab]
               for lab in ("NotTypeD", "Unknown")}
    for lab, names in summary.items():
        if names:
            print(f"# {lab}: {' '.join(names)}")
    if "NotTypeD" in labels:
        return EXIT_NOT_D
    if "Unknown" in labels:
        return EXIT_UNKNOWN
    return EXIT_OK


# -- structure constants, real classes -----------------------------------------

def cmd_structconst(args) -> int:
    G = _load(args.group)
    T = _table(G, args.seed)
    c1, c2, c3 = (_class_index(T, n) for n in (args.c1, args.c2, args.c3))
    val = structure_constant(T, c1, c2, c3, threshold=args.threshold)
    print(val)
    if args.out:
        rec = LogRecord(G.name or args.group, f"{args.c1},{args.c2},{args.c3}", "structconst",
                        value=val, seed=args.seed, timestamp=_stamp(args))
        write_log(args.out, [rec], append=args.append)
    return EXIT_OK


def cmd_quasireal(args) -> int:
    G = _load(args.group)
    T = _table(G, args.seed)
    real = real_classes(T)
    qr = quasi_real_classes(T)
    qr_idx = {q.class_index for q in qr}
    neither = [i for i in range(len(T)) if i not in real and i not in qr_idx]
    print("real: " + " ".join(T[i].name for i in sorted(real)))
    print("quasi-real:")
    for q in qr:
        line = f"  {T[q.class_index].name:<6} j={q.j}  g^(j^2) != g: {'yes' if q.j_squared_moves else 'no'}"
        if args.all_j:
            line += "  qualifying j: " + ",".join(map(str, q.qualifying))
        print(line)
    print("neither: " + " ".join(T[i].name for i in neither))
    if args.out:
        recs = [LogRecord(G.name or args.group, T[q.class_index].name, "quasireal", "quasi-real",
                          value=q.j, seed=args.seed, timestamp=_stamp(args)) for q in qr]
        write_log(args.out, recs, append=args.append)
    return EXIT_OK


# -- bases --------------------------------------------------------------------

def cmd_base(args) -> int:
    G = _load(args.group)
    if args.check:
        B = _points(args.check)
        ok = is_base(G, B)
        print("base" if ok else "not a base")
        return EXIT_OK if ok else EXIT_NOT_D
    print(" ".join(map(str, base_of(G))))
    return EXIT_OK


def cmd_encode(args) -> int:
    G = _load(args.group)
    B = _points(args.base) if args.base else base_of(G)
    if not is_base(G, B):
        raise UsageError("the given points are not a base of the group")
    g = parse_perm(args.perm, G.degree)
    print(" ".join(map(str, encode(G, B, g).images)))
    return EXIT_OK


def cmd_decode(args) -> int:
    G = _load(args.group)
    B = _points(args.base) if args.base else base_of(G)
    print(decode(G, B, _points(args.images)))
    return EXIT_OK


def cmd_fusion(args) -> int:
    G = _load(args.group)
    H = _load(args.subgroup)
    TG, TH = _table(G, args.seed), _table(H, args.seed)
    fus = fusion_map(G, TG, H, TH)
    for i, j in sorted(fus.entries.items()):
        print(f"{TH[i].name:<6} -> {TG[j].name}")
    return EXIT_OK


def cmd_groups(args) -> int:
    print("S<n>, A<n>, C<n>, D<n> for n <= 16; products written XxY")
    for name in bundled_names():
        print(name)
    return EXIT_OK


def cmd_checklog(args) -> int:
    recs = read_log(args.log, resolve_group)
    print(f"{len(recs)} records verified")
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pgtyped", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--data-dir", help=f"extra directory of group files (also ${DATA_ENV})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, out=True):
        sp.add_argument("group", help="catalog name (A9, S12, M11, A9xS3, ...) or .grp file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threshold", type=int, default=DEFAULT_CLASS_THRESHOLD,
                        help="largest class enumerated explicitly (default 2^20)")
        if out:
            sp.add_argument("--out", help="write JSONL records to this file")
            sp.add_argument("--append", action="store_true", help="append instead of overwrite")
            sp.add_argument("--stamp", action="store_true",
                            help="record wall-clock timestamps (breaks byte-reproducibility)")

    sp = sub.add_parser("classes", help="list conjugacy classes")
    common(sp, out=False)
    sp.set_defaults(func=cmd_classes)

    sp = sub.add_parser("typed", help="type-D classification of classes")
    common(sp)
    sp.add_argument("--mode", choices=("exhaustive", "random", "maximal", "auto"), default="auto")
    sp.add_argument("--class", dest="classes", action="append", default=[], metavar="NAME")
    sp.add_argument("--iters", type=int, default=1000, help="random-search budget N (default 1000)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--subgroup", action="append", default=[], metavar="GROUP",
                    help="subgroup for --mode maximal (repeatable)")
    sp.set_defaults(func=cmd_typed)

    sp = sub.add_parser("structconst", help="structure constant S(C1,C2,C3)")
    common(sp)
    for c in ("c1", "c2", "c3"):
        sp.add_argument(c)
    sp.set_defaults(func=cmd_structconst)

    sp = sub.add_parser("quasireal", help="real, quasi-real and other classes")
    common(sp)
    sp.add_argument("--all-j", action="store_true", help="list every qualifying j")
    sp.set_defaults(func=cmd_quasireal)

    sp = sub.add_parser("base", help="print the base, or test points with --check")
    sp.add_argument("group")
    sp.add_argument("--check", nargs="+", metavar="POINT")
    sp.set_defaults(func=cmd_base)

    sp = sub.add_parser("encode", help="base images of an element")
    sp.add_argument("group")
    sp.add_argument("perm", help="cycle notation, e.g. '(1,2,3)(4,5)'")
    sp.add_argument("--base", nargs="+", metavar="POINT")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="element from base images")
    sp.add_argument("group")
    sp.add_argument("images", nargs="+")
    sp.add_argument("--base", nargs="+", metavar="POINT")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("fusion", help="class fusion of a subgroup")
    sp.add_argument("group")
    sp.add_argument("subgroup")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_fusion)

    sp = sub.add_parser("groups", help="catalog listing")
    sp.add_argument("action", choices=("list",))
    sp.set_defaults(func=cmd_groups)

    sp = sub.add_parser("checklog", help="re-verify every witness in a JSONL log")
    sp.add_argument("log")
    sp.set_defaults(func=cmd_checklog)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s: %(message)s")
    if args.data_dir:
        os.environ[DATA_ENV] = os.pathsep.join(filter(None, [args.data_dir, os.environ.get(DATA_ENV)]))
    try:
        return args.func(args)
    except UsageError as e:
        print(f"pgtyped: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GroupFileError, GroupError, PermutationError, CodecError, ClassTableError, LogError) as e:
        print(f"pgtyped: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"pgtyped: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
