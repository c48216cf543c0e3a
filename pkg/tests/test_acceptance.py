"""Acceptance criteria 1-12, one test each.

Each test records a pass/fail line that the terminal summary prints, then
asserts.  Instance pools are seeded, so every run sees the same instances.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from pathlib import Path

from helpers import record, simplex4, tetrahedron, two_tetrahedra, witness
from troprank import geometry as geo
from troprank.compare import compare, format_machine, format_text
from troprank.curves import (Strategy, best_upper_bound, candidate_orders, exact_rank_three_nontrivial,
                             lemma22_defect_bound, three_nontrivial_values, upper_bound_ordered)
from troprank.generate import (nodal_instances, plane_instances, random_marking, random_translation,
                               random_tree_curve, random_unimodular, space_instances)
from troprank.hypersurface import best_upper_bound_nd, nonsimplex_cells, ordered_values_nd, upper_bound_nd
from troprank.linalg import matrix_rank
from troprank.param import (Edge, End, EndMarking, ParamCurve, balancing_sum, balancing_sum_raw,
                            end_marked_def_dim, expected_rank_of_curve, param_oracle_rank)
from troprank.rank import cooriented_order, expected_rank_embedded, oracle_rank, parallelogram_condition_matrix
from troprank.search import search_defect
from troprank.skeleton import SkeletonCurve, lower_bound_r3, lower_bound_r4, skeleton_metrics, skeleton_of_surface
from troprank.surface import best_algo_bounds

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
ORDER_CAP = 5  # all orderings up to this many cells, sampled beyond


@lru_cache(maxsize=None)
def plane_pool():
    """Seeded plane instances: few singularities, exactly three, and many."""
    rng = random.Random(2024)
    few = list(plane_instances(rng, 200, max_nontrivial=2))
    three = list(plane_instances(rng, 60, exact=3, k_range=(4, 4), mode="folds"))
    many = list(plane_instances(rng, 40, min_nontrivial=4, k_range=(4, 4), mode="folds"))
    return few, three, many


@lru_cache(maxsize=None)
def space_pool(n):
    rng = random.Random(7 + n)
    if n == 3:
        return list(space_instances(rng, 60, 3, k_range=(1, 2), max_vertices=20))
    return list(space_instances(rng, 50, 4, k_range=(1, 1)))


def orders_for(s, cells):
    if len(cells) <= ORDER_CAP:
        return list(permutations(cells))
    return candidate_orders(s, cells, Strategy("auto", 0, 60))


def test_criterion_1_worked_example():
    t0 = time.time()
    found = search_defect(seed=0)
    elapsed = time.time() - t0
    good = [w for w in found
            if len(w.subdivision.nontrivial_cells()) == 3
            and all(w.subdivision.cell_class(i).kind == geo.PolygonClass.EVEN_NONPARALLEL
                    and len(w.subdivision.cells[i]) == 4 for i in w.subdivision.nontrivial_cells())
            and (w.expected, w.oracle) == (2, 3)
            and exact_rank_three_nontrivial(w.subdivision) == 3]
    ok = bool(good) and elapsed < 60
    detail = f"{len(good)} witnesses with expected 2, oracle 3, formula 3 in {elapsed:.1f}s"
    if good:
        detail += f"; first vertices {list(good[0].subdivision.vertices)}"
    record(1, ok, detail)
    assert ok


def test_criterion_2_two_singularities():
    few, _, _ = plane_pool()
    bad = [s for s, f in few if oracle_rank(s, f) != expected_rank_embedded(s)]
    singular = sum(1 for s, _ in few if s.nontrivial_cells())
    ok = len(few) >= 200 and not bad
    record(2, ok, f"{len(few)} instances ({singular} with 1-2 non-trivial cells), {len(bad)} mismatches")
    assert ok


def test_criterion_3_nodal():
    rng = random.Random(33)
    inst = list(nodal_instances(rng, 200))
    mismatch = rank_deficient = staircase = with_par = 0
    for s, f in inst:
        if oracle_rank(s, f) != expected_rank_embedded(s):
            mismatch += 1
        m, _ = parallelogram_condition_matrix(s, cooriented_order(s))
        if m.shape[0]:
            with_par += 1
            if matrix_rank(m) != m.shape[0]:
                rank_deficient += 1
            from troprank.rank import is_staircase
            staircase += is_staircase(m)
    ok = len(inst) >= 200 and mismatch == 0 and rank_deficient == 0
    record(3, ok, f"{len(inst)} nodal instances ({with_par} with parallelograms), {mismatch} rank mismatches, "
                  f"{rank_deficient} deficient condition matrices, {staircase}/{with_par} staircase")
    assert ok


def test_criterion_4_defect_bound():
    few, three, many = plane_pool()
    singular = [(s, f) for s, f in few + three + many if s.nontrivial_cells()]
    viol = []
    for s, f in singular:
        d = oracle_rank(s, f) - expected_rank_embedded(s)
        if not 0 <= 2 * d <= lemma22_defect_bound(s):
            viol.append((d, lemma22_defect_bound(s)))
    positive = sum(1 for s, f in singular if oracle_rank(s, f) > expected_rank_embedded(s))
    ok = not viol
    record(4, ok, f"{len(singular)} singular instances ({positive} with positive defect), {len(viol)} violations")
    assert ok


def test_criterion_5_ordered_bounds():
    few, three, many = plane_pool()
    plane = few + three + many
    viol2 = checked2 = 0
    for s, f in plane:
        orc = oracle_rank(s, f)
        for order in orders_for(s, s.nontrivial_cells()):
            checked2 += 1
            viol2 += upper_bound_ordered(s, order) < orc
    counts = {}
    viol_nd = 0
    for n in (3, 4):
        pool = space_pool(n)
        counts[n] = len(pool)
        for s, f in pool:
            orc = oracle_rank(s, f)
            for order in orders_for(s, nonsimplex_cells(s)):
                viol_nd += upper_bound_nd(s, order) < orc
    ok = len(plane) >= 200 and counts[3] >= 50 and counts[4] >= 50 and viol2 == 0 and viol_nd == 0
    record(5, ok, f"n=2: {len(plane)} instances, {checked2} orderings, {viol2} violations; "
                  f"n=3: {counts[3]}, n=4: {counts[4]} instances, {viol_nd} violations")
    assert ok


def test_criterion_6_exact_formulas():
    _, three, _ = plane_pool()
    mism2, order_dependent = [], 0
    for s, f in three:
        vals = three_nontrivial_values(s)
        order_dependent += len(set(vals.values())) > 1
        if min(vals.values()) != oracle_rank(s, f):
            mism2.append((min(vals.values()), oracle_rank(s, f)))
    mism_nd, n_nd, dep_nd = [], 0, 0
    for n in (3, 4):
        for s, f in space_pool(n):
            if len(nonsimplex_cells(s)) > 3:
                continue
            n_nd += 1
            vals = ordered_values_nd(s)
            dep_nd += len(set(vals.values())) > 1
            if min(vals.values()) != oracle_rank(s, f):
                mism_nd.append((n, min(vals.values()), oracle_rank(s, f)))
    ok = len(three) > 0 and not mism2 and not mism_nd
    record(6, ok, f"plane: {len(three)} instances with 3 non-trivial cells, {len(mism2)} mismatches, "
                  f"{order_dependent} ordering-dependent; n=3,4: {n_nd} instances with <=3 non-simplex cells, "
                  f"{len(mism_nd)} mismatches, {dep_nd} ordering-dependent")
    assert ok


def test_criterion_7_surface_algorithm():
    single = best_algo_bounds(tetrahedron())
    glued = best_algo_bounds(two_tetrahedra())
    pool = space_pool(3)
    viol = []
    for s, f in pool:
        lo, hi = best_algo_bounds(s)
        orc = oracle_rank(s, f)
        if not lo <= orc <= hi:
            viol.append((lo, orc, hi))
    ok = single == (3, 3) and glued == (4, 4) and len(pool) >= 30 and not viol
    record(7, ok, f"single cell {single}, glued tetrahedra {glued}; {len(pool)} instances in R^3, "
                  f"{len(viol)} outside bounds")
    assert ok


def test_criterion_8_balancing():
    rng = random.Random(88)
    zero = perturbed_nonzero = 0
    total = 1000
    for _ in range(total):
        c = random_tree_curve(rng, rng.randint(0, 5))
        m = random_marking(rng, c)
        zero += balancing_sum(c, m) == 0
        pts = [p for _, p in sorted(m.markers)]
        k = rng.randrange(len(pts))
        d = c.ends[k].direction
        # any shift not parallel to the end moves the marker off its ray
        while True:
            delta = (Fraction(rng.randint(-3, 3), rng.randint(1, 3)), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
            if delta[0] * d[1] - delta[1] * d[0] != 0:
                break
        pts[k] = (pts[k][0] + delta[0], pts[k][1] + delta[1])
        perturbed_nonzero += balancing_sum_raw(c, pts) != 0
    ok = zero == total and perturbed_nonzero == total
    record(8, ok, f"{zero}/{total} sums zero, {perturbed_nonzero}/{total} perturbed sums nonzero")
    assert ok


def test_criterion_9_end_marked_dims():
    line = ParamCurve(2, ((Fraction(0), Fraction(0)),), (), (End(0, (-1, 0)), End(0, (0, -1)), End(0, (1, 1))))
    rk = param_oracle_rank(line)
    one = end_marked_def_dim(line, rk, 1)
    full = end_marked_def_dim(line, rk, 3)
    ok = (rk, one, full) == (2, 1, 0)
    record(9, ok, f"tropical line rank {rk}, one marker {one}, all three markers {full}")
    assert ok


def test_criterion_10_skeleton_bounds():
    star = SkeletonCurve(((0, 0, 0),), (), tuple((0, d) for d in ((-1, 0, 0), (0, -1, 0), (0, 0, -1), (1, 1, 1))))
    single = lower_bound_r3(skeleton_metrics(star))
    viol, closed = [], 0
    for s, f in space_pool(3):
        m = skeleton_metrics(skeleton_of_surface(s, f))
        closed += m.closed_volumes > 0
        if lower_bound_r3(m) > oracle_rank(s, f):
            viol.append((lower_bound_r3(m), oracle_rank(s, f)))
    r4 = lower_bound_r4(skeleton_metrics(skeleton_of_surface(simplex4())))
    r4_oracle = oracle_rank(simplex4())
    ok = single == 3 and not viol and r4 == 4 == r4_oracle
    record(10, ok, f"single node {single}; {len(space_pool(3))} surfaces ({closed} with closed volumes), "
                   f"{len(viol)} violations; 5-valent node {r4} vs oracle {r4_oracle}")
    assert ok


def _signature_sub(s, f):
    sig = [expected_rank_embedded(s), oracle_rank(s, f)]
    if s.n == 2:
        sig += [lemma22_defect_bound(s), best_upper_bound(s)]
        if len(s.nontrivial_cells()) == 3:
            sig.append(exact_rank_three_nontrivial(s))
    else:
        sig.append(best_upper_bound_nd(s))
        if len(nonsimplex_cells(s)) <= 3:
            sig.append(sorted(ordered_values_nd(s).items()))
        if s.n == 3:
            sig.append(best_algo_bounds(s))
            sig.append(lower_bound_r3(skeleton_metrics(skeleton_of_surface(s, f))))
    return sig


def _transform_curve(c, U, t):
    def lin(v):
        return tuple(sum(U[i][j] * v[j] for j in range(c.n)) for i in range(c.n))
    pos = tuple(tuple(x + y for x, y in zip(lin(p), t)) for p in c.positions)
    edges = tuple(Edge(e.a, e.b, lin(e.direction), e.weight, e.length) for e in c.edges)
    ends = tuple(End(r.node, lin(r.direction), r.weight) for r in c.ends)
    return ParamCurve(c.n, pos, edges, ends)


def test_criterion_11_invariance():
    rng = random.Random(111)
    few, three, many = plane_pool()
    classes = {
        "nodal": next(iter(nodal_instances(random.Random(5), 1))),
        "two-singular": next((s, f) for s, f in few if len(s.nontrivial_cells()) == 2),
        "witness": (witness(), None),
        "three-singular": three[0],
        "many-singular": many[0],
        "r3": next((s, f) for s, f in space_pool(3) if 1 <= len(nonsimplex_cells(s)) <= 3 and len(s.cells) > 2),
        "r4": next((s, f) for s, f in space_pool(4) if nonsimplex_cells(s) and len(s.cells) > 1),
    }
    changed = []
    for name, (s, f) in classes.items():
        base = _signature_sub(s, f)
        for _ in range(100):
            U = random_unimodular(rng, s.n)
            t = random_translation(rng, s.n)
            if _signature_sub(s.transformed(U, t), f) != base:
                changed.append(name)
                break
    c = random_tree_curve(random.Random(3), 4)
    base = (expected_rank_of_curve(c), param_oracle_rank(c))
    marking = random_marking(random.Random(4), c)
    for _ in range(100):
        U, t = random_unimodular(rng, 2), random_translation(rng, 2)
        d = _transform_curve(c, U, t)
        lin = [tuple(sum(U[i][j] * p[j] for j in range(2)) + t[i] for i in range(2)) for _, p in marking.markers]
        m = EndMarking(tuple((k, p) for (k, _), p in zip(marking.markers, lin)))
        if (expected_rank_of_curve(d), param_oracle_rank(d)) != base or balancing_sum(d, m) != 0:
            changed.append("param-curve")
            break
    ok = not changed
    record(11, ok, f"{len(classes) + 1} classes x 100 transforms, changed: {changed or 'none'}")
    assert ok


def test_criterion_12_determinism():
    runs = [format_machine(compare(CORPUS, jobs=1)), format_machine(compare(CORPUS, jobs=1)),
            format_machine(compare(CORPUS, jobs=2))]
    texts = {format_text(compare(CORPUS, jobs=j)) for j in (1, 2)}
    cli = set()
    for jobs in ("1", "2", "1"):
        out = subprocess.run([sys.executable, "-m", "troprank.cli", "--format", "machine", "compare", str(CORPUS),
                              "--jobs", jobs], capture_output=True, check=True)
        cli.add(out.stdout)
    ok = len(set(runs)) == 1 and len(texts) == 1 and len(cli) == 1 and cli == {runs[0].encode()}
    flags = runs[0].count('"flags": []')
    record(12, ok, f"{runs[0].count(chr(10))} corpus rows, identical across 3 in-process and 3 CLI runs "
                   f"(jobs 1 and 2); {flags} rows without flags" if ok else "outputs differ")
    assert ok
