"""Exact rational linear programming.

Two-phase tableau simplex over exact rationals, pivoting by Dantzig's rule
with a fallback to Bland's rule on degenerate steps.
Infeasible problems come back with a Farkas witness: nonnegative multipliers
on the constraints (each read in its ``<=`` orientation, equalities free)
whose combination ``r . x <= beta`` cannot hold anywhere in the variable box.
Both kinds of witness can be checked with :func:`check_point` and
:func:`check_farkas`, which share no code with the solver.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

try:  # gmpy2 rationals are an order of magnitude faster than Fraction
    from gmpy2 import mpq as _num
except ImportError:  # pragma: no cover
    _num = Fraction

from .rational import ZERO, fmt, q

log = logging.getLogger(__name__)

LE, EQ, GE = "<=", "=", ">="
OPTIMAL, FEASIBLE, INFEASIBLE, UNBOUNDED = "Optimal", "Feasible", "Infeasible", "Unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, Fraction]  # sparse row
    rel: str
    rhs: Fraction

    def row(self, n: int) -> tuple:
        out = [ZERO] * n
        for j, a in self.coeffs.items():
            out[j] = a
        return tuple(out)

    def lhs(self, x: Sequence) -> Fraction:
        return sum((a * x[j] for j, a in self.coeffs.items()), ZERO)


@dataclass
class LPProblem:
    """``optimize objective . x`` subject to rows and per-variable bounds.

    ``bounds[j]`` is ``(lower, upper)`` with ``None`` for an infinite side;
    omitted bounds mean a free variable. A missing objective means a pure
    feasibility problem.
    """

    nvars: int
    constraints: list[Constraint] = field(default_factory=list)
    objective: Mapping[int, Fraction] | None = None
    maximize: bool = False
    bounds: list[tuple] | None = None
    names: list[str] | None = None

    def bound(self, j: int) -> tuple:
        if self.bounds is None:
            return (None, None)
        return self.bounds[j]


@dataclass
class LPResult:
    status: str
    point: tuple | None = None
    farkas: tuple | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status in (OPTIMAL, FEASIBLE, UNBOUNDED)


class LPBuilder:
    """Incremental construction of an :class:`LPProblem` with named variables."""

    def __init__(self):
        self.names: list[str] = []
        self.bounds: list[tuple] = []
        self.constraints: list[Constraint] = []
        self.index: dict = {}

    def var(self, key, lo=0, hi=None) -> int:
        j = len(self.names)
        self.names.append(str(key))
        self.bounds.append((None if lo is None else q(lo), None if hi is None else q(hi)))
        self.index[key] = j
        return j

    def add(self, coeffs: Mapping[int, object], rel: str, rhs) -> None:
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        clean = {}
        for j, a in coeffs.items():
            a = q(a)
            if a:
                clean[j] = clean.get(j, ZERO) + a
        self.constraints.append(Constraint({j: a for j, a in clean.items() if a}, rel, q(rhs)))

    def build(self, objective: Mapping[int, object] | None = None, maximize=False) -> LPProblem:
        obj = None if objective is None else {j: q(a) for j, a in objective.items()}
        return LPProblem(len(self.names), list(self.constraints), obj, maximize,
                         list(self.bounds), list(self.names))


# --------------------------------------------------------------------------
# solver


def _pivot(tab: list[list], obj: list | None, r: int, c: int, extra=()) -> None:
    row = tab[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        row[:] = [v * inv if v else v for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(tab):
        if i == r:
            continue
        f = other[c]
        if f:
            for j in nz:
                other[j] -= f * row[j]
    for o in ((obj,) if obj is not None else ()) + tuple(extra):
        f = o[c]
        if f:
            for j in nz:
                o[j] -= f * row[j]


def _simplex(tab, basis, obj, allowed) -> bool:
    """Minimize; ``obj`` holds reduced costs and ``-value`` last.

    Entering columns follow Dantzig's rule after a nondegenerate pivot and
    Bland's rule after a degenerate one, so a degenerate plateau is walked by
    Bland pivots only and cannot cycle. Returns False when the problem is
    unbounded (the entering column is left in ``_simplex.last_col``).
    """
    m = len(tab)
    rhs = len(obj) - 1
    allowed = list(allowed)
    bland = False
    while True:
        if bland:
            c = next((j for j in allowed if obj[j] < 0), None)
        else:
            c, low = None, 0
            for j in allowed:
                if obj[j] < low:
                    c, low = j, obj[j]
        if c is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][c]
            if a > 0:
                ratio = tab[i][rhs] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            _simplex.last_col = c
            return False
        r = best[1]
        bland = best[0] == 0
        _pivot(tab, obj, r, c)
        basis[r] = c


def solve(p: LPProblem) -> LPResult:
    """Solve exactly. Deterministic: the pivot rule is fixed."""
    n = p.nvars
    # variable substitution x_j = shift_j + sum(sign * col)
    cols: list[tuple[int, int]] = []  # (original var, sign)
    shift = [ZERO] * n
    ub_rows = []  # (col index, upper - lower)
    for j in range(n):
        lo, hi = p.bound(j)
        lo = None if lo is None else q(lo)
        hi = None if hi is None else q(hi)
        if lo is not None and hi is not None and hi < lo:
            return _trivially_infeasible_box(p)
        if lo is not None:
            shift[j] = lo
            cols.append((j, 1))
            if hi is not None:
                ub_rows.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            shift[j] = hi
            cols.append((j, -1))
        else:
            cols.append((j, 1))
            cols.append((j, -1))
    col_of: dict[int, list[tuple[int, int]]] = {}
    for k, (j, s) in enumerate(cols):
        col_of.setdefault(j, []).append((k, s))
    ncols = len(cols)

    # rows: (dense coeffs over cols, rhs, slack sign or 0, sign flip, origin)
    raw = []
    for i, con in enumerate(p.constraints):
        row = [0] * ncols
        b = con.rhs
        for j, a in con.coeffs.items():
            b -= a * shift[j]
            for k, s in col_of[j]:
                row[k] = a * s
        tau = {LE: 1, GE: -1, EQ: 0}[con.rel]
        raw.append((row, b, tau, ("c", i)))
    for k, u in ub_rows:
        row = [0] * ncols
        row[k] = 1
        raw.append((row, u, 1, ("u", k)))

    m = len(raw)
    slack_ix = {}
    nslack = 0
    for i, (_, _, tau, _) in enumerate(raw):
        if tau:
            slack_ix[i] = ncols + nslack
            nslack += 1
    nstruct = ncols + nslack
    width = nstruct + m + 1  # + artificials + rhs
    rhs = width - 1
    tab = []
    sigma = []
    for i, (row, b, tau, _) in enumerate(raw):
        t = [_num(0)] * width
        for k, a in enumerate(row):
            if a:
                t[k] = _num(a)
        if tau:
            t[slack_ix[i]] = _num(tau)
        t[rhs] = _num(b)
        s = 1
        if t[rhs] < 0:
            s = -1
            t = [-v for v in t]
        t[nstruct + i] = _num(1)
        tab.append(t)
        sigma.append(s)
    basis = [nstruct + i for i in range(m)]

    # phase I: minimize the sum of artificials
    obj = [_num(0)] * width
    for t in tab:
        for j in range(nstruct):
            if t[j]:
                obj[j] -= t[j]
        obj[rhs] -= t[rhs]
    _simplex(tab, basis, obj, range(nstruct))
    w = -obj[rhs]
    if w > 0:
        y = [1 - obj[nstruct + i] for i in range(m)]
        mu = [Fraction(0)] * len(p.constraints)
        for i, (_, _, _, origin) in enumerate(raw):
            if origin[0] != "c":
                continue
            nu = -_frac(y[i]) * sigma[i]
            ci = origin[1]
            mu[ci] = -nu if p.constraints[ci].rel == GE else nu
        res = LPResult(INFEASIBLE, farkas=tuple(mu))
        if not check_farkas(p, res.farkas):  # pragma: no cover - solver bug guard
            raise RuntimeError("internal error: Farkas witness failed to verify")
        return res

    # drive remaining artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= nstruct:
            c = next((j for j in range(nstruct) if tab[i][j] != 0), None)
            if c is None:
                continue  # redundant row
            _pivot(tab, obj, i, c)
            basis[i] = c
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    for t in tab:
        for j in range(nstruct, rhs):
            t[j] = _num(0)

    if p.objective:
        sgn = -1 if p.maximize else 1
        cost = [_num(0)] * width
        for j, a in p.objective.items():
            for k, s in col_of[j]:
                cost[k] = _num(sgn * a * s)
        obj = cost[:]
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb:
                t = tab[i]
                for j in range(width):
                    if t[j]:
                        obj[j] -= cb * t[j]
        if not _simplex(tab, basis, obj, range(nstruct)):
            point = _extract(tab, basis, cols, shift, n, rhs)
            return LPResult(UNBOUNDED, point=point)
        point = _extract(tab, basis, cols, shift, n, rhs)
        value = sum((a * point[j] for j, a in p.objective.items()), ZERO)
        return LPResult(OPTIMAL, point=point, value=value)
    point = _extract(tab, basis, cols, shift, n, rhs)
    return LPResult(FEASIBLE, point=point)


def _frac(x) -> Fraction:
    # Fraction(mpq) would keep mpz parts, which gmpy2 later refuses to convert back
    return Fraction(int(x.numerator), int(x.denominator))


def _extract(tab, basis, cols, shift, n, rhs) -> tuple:
    xs = [Fraction(0)] * len(cols)
    for i, bi in enumerate(basis):
        if bi < len(cols):
            xs[bi] = _frac(tab[i][rhs])
    x = list(shift)
    for k, (j, s) in enumerate(cols):
        if xs[k]:
            x[j] += s * xs[k]
    return tuple(x)


def _trivially_infeasible_box(p: LPProblem) -> LPResult:
    # an empty box: the zero combination already contradicts (min over empty set)
    return LPResult(INFEASIBLE, farkas=tuple(Fraction(0) for _ in p.constraints))


# --------------------------------------------------------------------------
# independent checkers


def check_point(p: LPProblem, x: Sequence) -> bool:
    """Every constraint and bound holds exactly at ``x``."""
    if len(x) != p.nvars:
        return False
    x = [q(v) for v in x]
    for j in range(p.nvars):
        lo, hi = p.bound(j)
        if lo is not None and x[j] < lo:
            return False
        if hi is not None and x[j] > hi:
            return False
    for con in p.constraints:
        v = con.lhs(x)
        if con.rel == LE and not v <= con.rhs:
            return False
        if con.rel == GE and not v >= con.rhs:
            return False
        if con.rel == EQ and v != con.rhs:
            return False
    return True


def check_farkas(p: LPProblem, mu: Sequence) -> bool:
    """``mu`` proves infeasibility.

    Each constraint is read as ``o_i a_i . x <= o_i b_i`` with ``o_i = -1`` for
    ``>=`` rows; ``mu_i >= 0`` is required except on equalities. The combined
    inequality must fail at every point of the variable box.
    """
    if len(mu) != len(p.constraints):
        return False
    r: dict[int, Fraction] = {}
    beta = ZERO
    for m_i, con in zip(mu, p.constraints):
        m_i = q(m_i)
        if con.rel != EQ and m_i < 0:
            return False
        if not m_i:
            continue
        o = -1 if con.rel == GE else 1
        for j, a in con.coeffs.items():
            r[j] = r.get(j, ZERO) + o * m_i * a
        beta += o * m_i * con.rhs
    for j in range(p.nvars):
        lo, hi = p.bound(j)
        if lo is not None and hi is not None and q(hi) < q(lo):
            return True  # empty box
    low = ZERO
    for j in range(p.nvars):
        c = r.get(j, ZERO)
        if not c:
            continue
        lo, hi = p.bound(j)
        if c > 0:
            if lo is None:
                return False
            low += c * q(lo)
        else:
            if hi is None:
                return False
            low += c * q(hi)
    return low > beta


# --------------------------------------------------------------------------
# JSON interchange


def problem_to_json(p: LPProblem) -> dict:
    """Documented schema::

        {"nvars": n, "sense": "min"|"max"|"feasibility",
         "objective": ["p/q", ...] | null,
         "constraints": [{"row": ["p/q", ...], "rel": "<="|"="|">=", "rhs": "p/q"}],
         "bounds": [[lo|null, hi|null], ...],
         "names": [str, ...] | null}
    """
    n = p.nvars
    obj = None
    if p.objective:
        o = [ZERO] * n
        for j, a in p.objective.items():
            o[j] = a
        obj = [fmt(a) for a in o]
    sense = "feasibility" if obj is None else ("max" if p.maximize else "min")
    return {
        "nvars": n,
        "sense": sense,
        "objective": obj,
        "constraints": [
            {"row": [fmt(a) for a in c.row(n)], "rel": c.rel, "rhs": fmt(c.rhs)}
            for c in p.constraints
        ],
        "bounds": [[None if lo is None else fmt(lo), None if hi is None else fmt(hi)]
                   for lo, hi in (p.bound(j) for j in range(n))],
        "names": p.names,
    }


def problem_from_json(d: dict) -> LPProblem:
    n = int(d["nvars"])
    cons = []
    for c in d["constraints"]:
        row = [q(a) for a in c["row"]]
        cons.append(Constraint({j: a for j, a in enumerate(row) if a}, c["rel"], q(c["rhs"])))
    obj = None
    if d.get("objective") is not None:
        obj = {j: q(a) for j, a in enumerate(d["objective"]) if q(a)}
    bounds = [(None if lo is None else q(lo), None if hi is None else q(hi))
              for lo, hi in d.get("bounds") or [(None, None)] * n]
    return LPProblem(n, cons, obj, d.get("sense") == "max", bounds, d.get("names"))


def dump_problem(p: LPProblem, path) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_json(p), fh, indent=1)


def convex_weights(points: Sequence[Sequence], x: Sequence, cone: bool = False) -> tuple | None:
    """Weights ``w >= 0`` with ``sum w_i p_i == x`` (and ``sum w == 1`` unless ``cone``)."""
    b = LPBuilder()
    ws = [b.var(i) for i in range(len(points))]
    for k, xk in enumerate(x):
        b.add({w: p[k] for w, p in zip(ws, points) if p[k]}, EQ, xk)
    if not cone:
        b.add({w: 1 for w in ws}, EQ, 1)
    res = solve(b.build())
    return res.point if res.feasible else None
