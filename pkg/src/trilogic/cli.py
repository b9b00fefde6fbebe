"""The ``trilogic`` command line."""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import repr as rep
from .errors import TrilogicError
from .evaluate import check_generic, evaluate, witness_universe
from .logic import LANG_TAGS, Query, check, free_vars, parse, parse_queries, signature, to_text
from .model import Database, can_tr_inverse, format_database, load_database, snapshot, times
from .sampling import random_affinity, random_st_transform
from .translate import lift, lower


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trilogic", description="Triangle logics over exact rational geometry.")
    p.add_argument("command", choices=["eval", "translate", "aftr", "check-generic", "svg", "snapshot"])
    p.add_argument("--db", help="database file")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--query", help="file of 'query NAME(vars) := formula ;' blocks")
    src.add_argument("--formula", help="inline formula")
    p.add_argument("--lang", choices=sorted(LANG_TAGS), help="language (default: tri, or tri-st-v for st databases)")
    p.add_argument("--dir", choices=["lower", "lift"], default="lower", help="translation direction")
    p.add_argument("--level", type=int, default=0, help="witness universe level")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=["A", "AC", "V"], help="transform group for st genericity checks")
    p.add_argument("--time", help="snapshot time (rational)")
    p.add_argument("--relation", help="restrict aftr to one relation")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write output to this file instead of stdout")
    return p


def _need(args, name):
    if getattr(args, name) is None:
        raise UsageError(f"{args.command} needs --{name}")
    return getattr(args, name)


def _lang(args, db: Database | None = None) -> str:
    if args.lang:
        return LANG_TAGS[args.lang]
    if db is not None and db.mode == "st":
        return "TRI_ST_V"
    return "TRI"


def _queries(args, lang: str) -> list[Query]:
    if args.formula is not None:
        f = parse(args.formula, lang)
        return [Query("result", tuple(free_vars(f)), f)]
    if args.query is None:
        raise UsageError(f"{args.command} needs --query or --formula")
    return list(parse_queries(Path(args.query).read_text(), lang).values())


def _relation_text(name: str, arity: int, rows: list) -> list[str]:
    lines = [f"rel {name} {arity} {{"]
    lines += ["  (" + ", ".join(repr(t) for t in row) + ")" for row in rows]
    lines.append("}")
    return lines


def cmd_eval(args, out) -> None:
    db = load_database(_need(args, "db"))
    lang = _lang(args, db)
    sig = signature(lang)
    universe = witness_universe(db, args.level)
    lines = [f"mode {db.mode}",
             f"# witness universe level {args.level}: {len(universe.points)} points",
             "# each listed triangle tuple stands for all of its corner permutations"]
    for q in _queries(args, lang):
        check(q.formula, db.schema, points=sig.points)
        res = evaluate(q.formula, db, universe, lang=lang, free=q.params, threads=args.threads)
        if not q.params:
            lines.append(f"# {q.name}: {'true' if res.truth else 'false'}")
            continue
        head = f"# {q.name}({', '.join(q.params)}): "
        if sig.points:
            rows = sorted(res.relation)
            if len(q.params) % 3 == 0:
                grouped = sorted(can_tr_inverse(r, db.mode == "st") for r in rows)
                lines.append(head + f"{len(grouped)} tuples, grouped three points per triangle")
                lines += _relation_text(q.name, len(q.params) // 3, grouped)
            else:
                lines.append(head + f"{len(rows)} point tuples")
                lines += ["#   (" + ", ".join(repr(p) for p in r) + ")" for r in rows]
            continue
        reps = res.reps()
        lines.append(head + f"{len(reps)} orbits")
        lines += _relation_text(q.name, len(q.params), reps)
    out.write("\n".join(lines) + "\n")


def cmd_translate(args, out) -> None:
    lang = LANG_TAGS[_need(args, "lang")]
    for q in _queries(args, lang):
        if args.dir == "lower":
            rep_ = lower(q.formula, lang)
        else:
            rep_ = lift(q.formula, lang)
        out.write(f"# {q.name}: {args.dir} {rep_.source} -> {rep_.target}\n")
        for v, vs in rep_.var_map.items():
            out.write(f"# {v} -> {' '.join(vs)}\n")
        out.write(to_text(rep_.output) + "\n")


def cmd_aftr(args, out) -> None:
    db = load_database(_need(args, "db"))
    if db.mode != "spatial":
        raise UsageError("aftr needs a spatial database")
    names = [args.relation] if args.relation else sorted(db.relations)
    lines = ["mode spatial", "# affine finite triangle representation; same drawing as the input"]
    for name in names:
        if name not in db.relations:
            raise UsageError(f"no relation {name!r}")
        r = db.relations[name]
        if r.arity != 1:
            lines.append(f"# {name}: skipped, arity {r.arity}")
            continue
        lines += _relation_text(name, 1, rep.aftr(r).reps())
    out.write("\n".join(lines) + "\n")


def cmd_check_generic(args, out) -> None:
    db = load_database(_need(args, "db"))
    lang = _lang(args, db)
    rng = random.Random(args.seed)
    if db.mode == "st":
        kind = args.kind or "V"
        ts = times(db)
        sampler = lambda: random_st_transform(rng, kind, ts)
    else:
        sampler = lambda: random_affinity(rng)
    for q in _queries(args, lang):
        check(q.formula, db.schema, points=signature(lang).points)
        report = check_generic(db, q.formula, sampler, args.trials, level=args.level, lang=lang)
        for i, t in enumerate(report.trials, 1):
            status = "pass" if t.ok else f"FAIL under {t.transform}"
            out.write(f"{q.name} trial {i}: {status}\n")
        out.write(f"{q.name}: {report.passed}/{len(report.trials)} passed\n")


def cmd_svg(args, out) -> None:
    db = load_database(_need(args, "db"))
    if db.mode == "st":
        db = snapshot(db, _need(args, "time"))
    out.write(rep.export_svg(db))


def cmd_snapshot(args, out) -> None:
    db = load_database(_need(args, "db"))
    out.write(format_database(snapshot(db, _need(args, "time"))))


COMMANDS = {
    "eval": cmd_eval,
    "translate": cmd_translate,
    "aftr": cmd_aftr,
    "check-generic": cmd_check_generic,
    "svg": cmd_svg,
    "snapshot": cmd_snapshot,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1 or args.level < 0 or args.trials < 0:
            raise UsageError("--threads must be positive; --level and --trials non-negative")
        if args.out:
            with open(args.out, "w") as fh:
                COMMANDS[args.command](args, fh)
        else:
            COMMANDS[args.command](args, sys.stdout)
        return 0
    except (UsageError, TrilogicError, OSError, ValueError) as e:
        print(f"trilogic: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # invariant violations and bugs
        print(f"trilogic: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
