"""Dense two-phase simplex over the rationals.

Small and slow by design: the programs solved here have tens of rows.
Bland's rule is used throughout, which rules out cycling and makes the
returned basis a deterministic function of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    basis: tuple[int, ...] = ()


def _pivot(T, obj, basis, r, c):
    row = T[r]
    inv = ONE / row[c]
    if inv != 1:
        T[r] = row = [v * inv for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    for o in obj:
        f = o[c]
        if f:
            o[:] = [a - f * b for a, b in zip(o, row)]
    basis[r] = c


def _run(T, obj, basis, allowed):
    """Maximise ``obj[0]`` (stored as reduced costs, rhs in the last slot)."""
    z = obj[0]
    while True:
        enter = next((j for j in allowed if z[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, obj, basis, best[1], enter)


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    # columns: originals | slacks | artificials | rhs
    T = []
    basis = []
    art_rows = []
    s = 0
    for i, (a, b, is_ub) in enumerate(rows):
        line = a + [ZERO] * n_slack
        if is_ub:
            line[n + s] = ONE
            slack_col = n + s
            s += 1
        else:
            slack_col = None
        if b < 0:
            line = [-v for v in line]
            b = -b
        if slack_col is not None and line[slack_col] == 1:
            basis.append(slack_col)
        else:
            basis.append(None)
            art_rows.append(i)
        T.append((line, b))
    n_art = len(art_rows)
    width = n + n_slack + n_art
    tab = []
    k = 0
    for i, (line, b) in enumerate(T):
        full = line + [ZERO] * n_art + [b]
        if basis[i] is None:
            full[n + n_slack + k] = ONE
            basis[i] = n + n_slack + k
            k += 1
        tab.append(full)
    T = tab

    z = [ZERO] * (width + 1)
    for j, cj in enumerate(c):
        z[j] = -Fraction(cj)
    obj = [z]
    if n_art:
        # phase 1: maximise -sum(artificials)
        w = [ZERO] * (width + 1)
        for j in range(n + n_slack, width):
            w[j] = ONE
        for i in art_rows:
            w = [a - b for a, b in zip(w, T[i])]
        obj = [w, z]
        _run(T, obj, basis, range(width))
        if w[-1] != 0:
            return LPResult("infeasible")
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= n + n_slack:
                j = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
                if j is not None:
                    _pivot(T, obj, basis, i, j)
        keep = [i for i in range(m) if basis[i] < n + n_slack]
        T = [T[i][:n + n_slack] + [T[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]
        z = obj[1][:n + n_slack] + [obj[1][-1]]
        obj = [z]
        width = n + n_slack
    status = _run(T, obj, basis, range(width))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [ZERO] * width
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][-1]
    return LPResult("optimal", tuple(x[:n]), obj[0][-1], tuple(b for b in basis if b < n))


def maximize_free(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                  A_eq: Sequence[Sequence] = (), b_eq: Sequence = (), free=None) -> LPResult:
    """Like :func:`maximize` but variables listed in ``free`` (default: all) are unrestricted."""
    n = len(c)
    free = set(range(n)) if free is None else set(free)
    order = sorted(free)

    def split(row):
        row = list(row)
        return row + [-row[j] for j in order]

    res = maximize(split(c), [split(r) for r in A_ub], b_ub, [split(r) for r in A_eq], b_eq)
    if res.status != "optimal":
        return res
    x = list(res.x[:n])
    for k, j in enumerate(order):
        x[j] -= res.x[n + k]
    return LPResult("optimal", tuple(x), res.value, res.basis)
