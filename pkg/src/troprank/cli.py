"""Command line entry point: ``troprank <command> ...``.

Exit codes: 0 success, 1 parse error, 2 validation failure, 3 non-regular
subdivision, 4 any other precondition failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import compare as cmp
from .curves import (Strategy, best_upper_bound, lemma22_defect_bound, rank_with_certificate,
                     three_nontrivial_values)
from .errors import NonRegular, ParseError, TropRankError
from .hypersurface import best_upper_bound_nd, nonsimplex_cells, ordered_values_nd, rank_with_certificate_nd
from .io import ParamCurveFile, SkeletonFile, SubdivisionFile, dump, load
from .param import bounded_components_rank, expected_rank_of_curve, p_vertices_bound, param_oracle_rank
from .rank import ORACLE, RankReport, expected_rank_embedded, oracle_rank
from .search import search_defect
from .skeleton import lower_bound_r3, lower_bound_r4, skeleton_metrics, skeleton_of_surface
from .subdivision import adjacent_pairs, pick_interior_coefficients, validate
from .surface import algo_bounds, best_algo_bounds
from .svg import render

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NONREGULAR, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 3, 4, 64


GLOBAL_DEFAULTS = {"seed": 0, "budget": None, "format": "text"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Invalid(Exception):
    pass


def _emit(args, text: str, record: dict):
    if args.format == "machine":
        print(json.dumps(cmp._plain(record), sort_keys=True))
    else:
        print(text)


def _load_valid(path):
    inst = load(path)
    if isinstance(inst, SubdivisionFile):
        rep = validate(inst.subdivision)
        if not rep.ok:
            raise _Invalid(str(rep))
    elif isinstance(inst, ParamCurveFile):
        probs = inst.curve.problems()
        if probs:
            raise _Invalid("\n".join(probs))
    return inst


# ------------------------------------------------------------------ commands

def cmd_validate(args):
    inst = load(args.file)
    if isinstance(inst, SubdivisionFile):
        problems = [str(v) for v in validate(inst.subdivision).violations]
    elif isinstance(inst, ParamCurveFile):
        problems = inst.curve.problems()
    else:
        try:
            skeleton_metrics(inst.skeleton)
            problems = []
        except TropRankError as e:
            problems = [str(e)]
    _emit(args, "ok" if not problems else "\n".join(problems), {"ok": not problems, "violations": problems})
    return EXIT_OK if not problems else EXIT_INVALID


def _subdivision_report(inst: SubdivisionFile, strategy: Strategy) -> RankReport:
    s = inst.subdivision
    if inst.coefficients is not None:
        oracle_rank(s, inst.coefficients)  # certifies the supplied lift
    if s.n == 2:
        return rank_with_certificate(s, strategy=strategy)
    if s.n >= 3:
        return rank_with_certificate_nd(s, strategy=strategy)
    value = oracle_rank(s)
    return RankReport.exact(value, ORACLE, oracle=value, defect=value - expected_rank_embedded(s))


def cmd_rank(args):
    inst = _load_valid(args.file)
    if isinstance(inst, SubdivisionFile):
        rep = _subdivision_report(inst, _strategy(args))
        exp = expected_rank_embedded(inst.subdivision)
        text = f"expected {exp}, oracle {rep.oracle}, {rep}\ndefect {rep.defect}"
        _emit(args, text, {"expected": exp, "oracle": rep.oracle, "defect": rep.defect, "lower": rep.lower,
                           "upper": rep.upper, "certificate": rep.certificate, "notes": rep.notes})
    elif isinstance(inst, ParamCurveFile):
        c = inst.curve
        exp = expected_rank_of_curve(c)
        orc = param_oracle_rank(c, inst.identifications)
        _emit(args, f"expected {exp}, oracle {orc}", {"expected": exp, "oracle": orc})
    else:
        return cmd_skeleton(args)
    return EXIT_OK


def _strategy(args) -> Strategy:
    kind = getattr(args, "strategy", "auto")
    return Strategy(kind, args.seed, args.budget if args.budget is not None else 200)


def cmd_oracle(args):
    inst = _load_valid(args.file)
    if isinstance(inst, SubdivisionFile):
        value = oracle_rank(inst.subdivision, inst.coefficients)
    elif isinstance(inst, ParamCurveFile):
        value = param_oracle_rank(inst.curve, inst.identifications)
    else:
        raise TropRankError("skeleton files have no oracle; use the skeleton command")
    _emit(args, str(value), {"oracle": value})
    return EXIT_OK


def cmd_bounds(args):
    inst = _load_valid(args.file)
    rec: dict = {}
    if isinstance(inst, SubdivisionFile):
        s = inst.subdivision
        rec["expected"] = expected_rank_embedded(s)
        oracle_rank(s, inst.coefficients)
        strat = _strategy(args)
        if s.n == 2:
            rec["nontrivial"] = len(s.nontrivial_cells())
            rec["lemma22_bound"] = lemma22_defect_bound(s)
            rec["ordered_upper"] = best_upper_bound(s, strat)
            if rec["nontrivial"] == 3:
                vals = three_nontrivial_values(s)
                rec["three_formula"] = min(vals.values())
                rec["three_formula_by_order"] = {",".join(map(str, k)): v for k, v in vals.items()}
            bc = bounded_components_rank(s, inst.coefficients)
            rec["components_formula"] = bc.value
            rec["components"] = bc.notes["bounded_components"]
            rec["rank_M"] = bc.notes["rank_M"]
            rec["components_coarse_upper"] = bc.notes["coarse_upper"]
        elif s.n >= 3:
            rec["nonsimplex"] = len(nonsimplex_cells(s))
            rec["ordered_upper"] = best_upper_bound_nd(s, strat)
            if rec["nonsimplex"] <= 3:
                vals = ordered_values_nd(s)
                rec["few_nonsimplex_formula"] = min(vals.values())
                rec["few_nonsimplex_by_order"] = {",".join(map(str, k)): v for k, v in vals.items()}
            if s.n == 3:
                rec["algo_bounds"] = list(best_algo_bounds(s))
    elif isinstance(inst, ParamCurveFile):
        c = inst.curve
        rec["expected"] = expected_rank_of_curve(c)
        bound, p = p_vertices_bound(c, inst.identifications)
        rec["p"] = p
        rec["p_vertices_bound"] = bound
    else:
        return cmd_skeleton(args)
    text = "\n".join(f"{k}: {json.dumps(cmp._plain(v))}" for k, v in rec.items())
    _emit(args, text, rec)
    return EXIT_OK


def cmd_surface3(args):
    inst = _load_valid(args.file)
    if not isinstance(inst, SubdivisionFile):
        raise TropRankError("surface3 needs a subdivision file")
    s = inst.subdivision
    lo, hi = best_algo_bounds(s)
    lines = [f"best bounds: lower {lo}, upper {hi}"]
    runs = []
    starts = [None] if len(s.cells) == 1 else [p for a, b, _ in adjacent_pairs(s) for p in ((a, b), (b, a))]
    for st in starts:
        r = algo_bounds(s, st)
        runs.append({"start": st, "lower": r.lower, "upper": r.upper, "order": r.order, "trace": r.trace})
        lines.append(f"start {st}: lower {r.lower}, upper {r.upper}, order {r.order}")
        if args.trace:
            lines.extend("  " + t for t in r.trace)
    _emit(args, "\n".join(lines), {"lower": lo, "upper": hi, "runs": runs})
    return EXIT_OK


def cmd_skeleton(args):
    inst = _load_valid(args.file)
    if isinstance(inst, SkeletonFile):
        sk = inst.skeleton
    elif isinstance(inst, SubdivisionFile):
        sk = skeleton_of_surface(inst.subdivision, inst.coefficients)
    else:
        raise TropRankError("skeleton needs a skeleton or subdivision file")
    m = skeleton_metrics(sk)
    rec = {"ends": m.ends, "overvalence": m.overvalence, "genus": m.genus, "closed_volumes": m.closed_volumes,
           "hypothesis": m.hypothesis}
    if sk.dim == 3:
        rec["lower_bound"] = lower_bound_r3(m)
    elif sk.dim == 4:
        rec["lower_bound"] = lower_bound_r4(m)
    text = "\n".join(f"{k}: {cmp._plain(v)}" for k, v in rec.items())
    _emit(args, text, rec)
    return EXIT_OK


def cmd_search_defect(args):
    budget = args.budget if args.budget is not None else 3
    found = search_defect(seed=args.seed, max_coord=args.max_coord, budget=budget, tries=args.tries,
                          limit=args.limit)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    records = []
    for k, w in enumerate(found):
        name = f"witness_{args.seed}_{k:03d}"
        if out:
            dump(SubdivisionFile(w.subdivision, w.coefficients, name,
                                 {"expected": w.expected, "oracle": w.oracle}), out / f"{name}.json")
        records.append({"name": name, "expected": w.expected, "oracle": w.oracle, "source": w.source,
                        "vertices": [list(v) for v in w.subdivision.vertices]})
    if args.format == "machine":
        for r in records:
            print(json.dumps(r, sort_keys=True))
    else:
        for r in records:
            print(f"{r['name']}: expected {r['expected']}, oracle {r['oracle']}, vertices {r['vertices']}")
        print(f"{len(records)} witnesses")
    return EXIT_OK


def cmd_svg(args):
    inst = _load_valid(args.file)
    if not isinstance(inst, SubdivisionFile):
        raise TropRankError("svg needs a subdivision file")
    s = inst.subdivision
    f = inst.coefficients
    if f is None and not args.no_curve:
        f = pick_interior_coefficients(s)
    doc = render(s, None if args.no_curve else f, inst.name)
    if args.output:
        Path(args.output).write_text(doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_compare(args):
    rows = cmp.compare(args.directory, jobs=args.jobs)
    sys.stdout.write(cmp.format_machine(rows) if args.format == "machine" else cmp.format_text(rows))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="cell budget for search-defect; sampled orderings for bounds")
    common.add_argument("--format", choices=["text", "machine"], default=argparse.SUPPRESS)

    p = _Parser(prog="troprank", description="Ranks of tropical curves and hypersurfaces.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check an instance file").add_argument("file")
    sp = add("rank", cmd_rank, "expected rank, oracle rank and the strongest certified statement")
    sp.add_argument("file")
    sp.add_argument("--strategy", choices=["auto", "exhaustive", "cooriented", "sampled"], default="auto")
    sp = add("bounds", cmd_bounds, "every applicable bound and formula")
    sp.add_argument("file")
    sp.add_argument("--strategy", choices=["auto", "exhaustive", "cooriented", "sampled"], default="auto")
    add("oracle", cmd_oracle, "rank by linear algebra").add_argument("file")
    sp = add("surface3", cmd_surface3, "bloc algorithm bounds for surfaces in R^3")
    sp.add_argument("file")
    sp.add_argument("--trace", action="store_true", help="print every absorption step")
    add("skeleton", cmd_skeleton, "skeleton metrics and closed-volume lower bounds").add_argument("file")
    sp = add("search-defect", cmd_search_defect, "search for plane subdivisions with positive defect")
    sp.add_argument("--max-coord", type=int, default=6)
    sp.add_argument("--tries", type=int, default=20000)
    sp.add_argument("--limit", type=int, default=None)
    sp.add_argument("--out", default=None, help="directory for witness files")
    sp = add("svg", cmd_svg, "draw a plane subdivision and its curve")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--no-curve", action="store_true")
    sp = add("compare", cmd_compare, "evaluate all results over a corpus directory")
    sp.add_argument("directory")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # shared parent actions suppress defaults so either position works
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except _Invalid as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_INVALID
    except NonRegular as e:
        print(f"NonRegular: {e}", file=sys.stderr)
        return EXIT_NONREGULAR
    except TropRankError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
