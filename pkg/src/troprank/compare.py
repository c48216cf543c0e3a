"""Evaluate every formula and bound on a corpus of instance files.

Each file yields one record: the computed quantities plus a list of flags,
one per violated inequality or mismatched recorded claim.  Records are
sorted by instance name, so output does not depend on scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .curves import best_upper_bound, exact_rank_three_nontrivial, lemma22_defect_bound, three_nontrivial_values
from .errors import NonRegular, PreconditionError, TropRankError
from .hypersurface import best_upper_bound_nd, nonsimplex_cells, ordered_values_nd
from .io import ParamCurveFile, SkeletonFile, SubdivisionFile, load
from .param import (balancing_sum, bounded_components_rank, expected_rank_of_curve, p_vertices_bound,
                    param_oracle_rank)
from .rank import expected_rank_embedded, oracle_rank
from .skeleton import lower_bound_r3, lower_bound_r4, skeleton_metrics, skeleton_of_surface
from .subdivision import validate
from .surface import best_algo_bounds


def _plain(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


def _subdivision_record(inst: SubdivisionFile) -> tuple[dict, list[str]]:
    s = inst.subdivision
    rec: dict = {"type": "subdivision", "n": s.n, "vertices": len(s.vertices), "cells": len(s.cells)}
    flags: list[str] = []
    rep = validate(s)
    if not rep.ok:
        rec["invalid"] = str(rep)
        return rec, flags
    exp = expected_rank_embedded(s)
    rec["expected"] = exp
    try:
        orc = oracle_rank(s, inst.coefficients)
    except NonRegular:
        rec["oracle"] = "nonregular"
        return rec, flags
    rec["oracle"] = orc
    rec["defect"] = orc - exp
    if orc < exp:
        flags.append("expected<=oracle")
    if s.n == 2:
        nt = s.nontrivial_cells()
        rec["nontrivial"] = len(nt)
        rec["lemma22"] = lemma22_defect_bound(s)
        if 2 * (orc - exp) > rec["lemma22"]:
            flags.append("2*defect<=lemma22")
        rec["ordered_upper"] = best_upper_bound(s)
        if orc > rec["ordered_upper"]:
            flags.append("oracle<=ordered_upper")
        if len(nt) <= 2 and orc != exp:
            flags.append("corollary:oracle==expected")
        if len(nt) == 3:
            vals = three_nontrivial_values(s)
            rec["three_formula"] = exact_rank_three_nontrivial(s)
            rec["three_formula_values"] = sorted(set(vals.values()))
            if rec["three_formula"] != orc:
                flags.append("three_formula==oracle")
        bc = bounded_components_rank(s, inst.coefficients)
        rec["components_formula"] = bc.value
        if bc.value != orc:
            flags.append("components_formula==oracle")
    else:
        ns = nonsimplex_cells(s)
        rec["nonsimplex"] = len(ns)
        rec["ordered_upper"] = best_upper_bound_nd(s)
        if orc > rec["ordered_upper"]:
            flags.append("oracle<=ordered_upper")
        if len(ns) <= 3:
            rec["few_nonsimplex_formula"] = min(ordered_values_nd(s).values())
            if rec["few_nonsimplex_formula"] != orc:
                flags.append("few_nonsimplex_formula==oracle")
        if s.n == 3:
            lo, hi = best_algo_bounds(s)
            rec["algo_bounds"] = [lo, hi]
            if not lo <= orc <= hi:
                flags.append("algo_lower<=oracle<=algo_upper")
            m = skeleton_metrics(skeleton_of_surface(s, inst.coefficients))
            rec["skeleton_lower"] = lower_bound_r3(m)
            if rec["skeleton_lower"] > orc:
                flags.append("skeleton_lower<=oracle")
        elif s.n == 4:
            m = skeleton_metrics(skeleton_of_surface(s, inst.coefficients))
            rec["skeleton_lower_r4"] = lower_bound_r4(m)
            if rec["skeleton_lower_r4"] > orc:
                flags.append("skeleton_lower_r4<=oracle")
    return rec, flags


def _param_record(inst: ParamCurveFile) -> tuple[dict, list[str]]:
    c = inst.curve
    rec: dict = {"type": "param_curve", "n": c.n, "ends": len(c.ends), "genus": c.genus}
    flags: list[str] = []
    probs = c.problems()
    if probs:
        rec["invalid"] = "; ".join(probs)
        return rec, flags
    rec["expected"] = expected_rank_of_curve(c)
    rec["oracle"] = param_oracle_rank(c, inst.identifications)
    try:
        bound, p = p_vertices_bound(c, inst.identifications)
        rec["p"] = p
        rec["p_bound"] = bound
        if rec["oracle"] > bound:
            flags.append("oracle<=p_bound")
    except PreconditionError:
        pass
    if inst.marking is not None and c.n == 2:
        rec["balancing_sum"] = balancing_sum(c, inst.marking)
        if rec["balancing_sum"] != 0:
            flags.append("balancing_sum==0")
    return rec, flags


def _skeleton_record(inst: SkeletonFile) -> tuple[dict, list[str]]:
    k = inst.skeleton
    m = skeleton_metrics(k)
    rec: dict = {"type": "skeleton", "n": k.dim, "ends": m.ends, "overvalence": m.overvalence,
                 "genus": m.genus, "closed_volumes": m.closed_volumes, "hypothesis": m.hypothesis}
    if k.dim == 3:
        rec["lower_r3"] = lower_bound_r3(m)
    elif k.dim == 4:
        rec["lower_r4"] = lower_bound_r4(m)
    return rec, []


def evaluate(path) -> tuple[str, dict]:
    path = Path(path)
    name = path.stem
    try:
        inst = load(path)
        if inst.name:
            name = inst.name
        if isinstance(inst, SubdivisionFile):
            rec, flags = _subdivision_record(inst)
        elif isinstance(inst, ParamCurveFile):
            rec, flags = _param_record(inst)
        else:
            rec, flags = _skeleton_record(inst)
    except TropRankError as e:
        return name, {"error": f"{type(e).__name__}: {e}", "flags": []}
    rec = _plain(rec)
    for key, want in sorted(inst.claims.items()):
        if rec.get(key) != _plain(want):
            flags.append(f"claim:{key}")
    rec["flags"] = flags
    return name, rec


def compare(directory, jobs: int = 1) -> list[tuple[str, dict]]:
    files = sorted(Path(directory).glob("*.json"))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(evaluate, files))
    else:
        rows = [evaluate(f) for f in files]
    return sorted(rows, key=lambda r: r[0])


def format_machine(rows) -> str:
    return "".join(json.dumps({"name": name, **rec}, sort_keys=True) + "\n" for name, rec in rows)


_COLUMNS = ("type", "n", "expected", "oracle", "defect")


def format_text(rows) -> str:
    lines = []
    width = max([len(n) for n, _ in rows] + [8])
    lines.append(f"{'instance':<{width}}  " + "  ".join(f"{c:>11}" for c in _COLUMNS) + "  details")
    for name, rec in rows:
        if "error" in rec:
            lines.append(f"{name:<{width}}  error: {rec['error']}")
            continue
        cells = "  ".join(f"{str(rec.get(c, '-')):>11}" for c in _COLUMNS)
        extra = ", ".join(f"{k}={json.dumps(v)}" for k, v in sorted(rec.items())
                          if k not in _COLUMNS and k != "flags")
        lines.append(f"{name:<{width}}  {cells}  {extra}")
        for fl in rec["flags"]:
            lines.append(f"{'':<{width}}  FLAG {fl}")
    n_flags = sum(len(r.get("flags", [])) for _, r in rows)
    lines.append(f"{len(rows)} instances, {n_flags} flags")
    return "\n".join(lines) + "\n"
