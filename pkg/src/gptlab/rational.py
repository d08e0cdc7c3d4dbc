"""Exact rational scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction`; vectors are tuples of Fractions and
matrices are tuples of row tuples. Nothing in here ever rounds.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def q(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions, gmpy2 ``mpq`` values and strings of the form
    ``"p/q"`` or ``"p"``. Floats are refused because they would silently
    carry binary rounding into a decision.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a string 'p/q' or a Fraction")
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def vec(xs: Iterable) -> Vector:
    return tuple(q(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def fmt(x: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is one."""
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence) -> list[str]:
    return [fmt(x) for x in v]


def fmt_mat(m: Sequence[Sequence]) -> list[list[str]]:
    return [fmt_vec(r) for r in m]


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def add(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence]) -> Vector:
    """Return ``sum(c * v)``; ``vectors`` must be nonempty."""
    n = len(vectors[0])
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] += c * a
    return tuple(out)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(r, v) for r in m)


def vecmat(v: Sequence, m: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    return lincomb(v, m)


def outer(u: Sequence, v: Sequence) -> Matrix:
    return tuple(tuple(a * b for b in v) for a in u)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    den = reduce(lcm, (q(x).denominator for x in v), 1)
    ints = [int(q(x) * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(i // g for i in ints)


def integer_rows(m: Sequence[Sequence]) -> list[list[int]]:
    """Scale every row of a rational matrix to integers (row scaling preserves rank)."""
    return [list(primitive(r)) for r in m]


def rank(m: Sequence[Sequence]) -> int:
    """Exact rank via fraction-free (Bareiss) elimination."""
    a = [r[:] for r in integer_rows(m) if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            ai = a[i]
            f = ai[c]
            for j in range(c, ncols):
                ai[j] = (p * ai[j] - f * a[r][j]) // prev
        prev = p
        r += 1
        if r == len(a):
            break
    return r


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = [[q(x) for x in r] for r in m]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        row = a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], row)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : m x = 0}."""
    if ncols is None:
        ncols = len(m[0])
    rows, pivots = rref(m) if m else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [ZERO] * ncols
        x[fc] = ONE
        for row, pc in zip(rows, pivots):
            x[pc] = -row[fc]
        basis.append(tuple(x))
    return basis


def row_basis(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a greedy maximal linearly independent subset, in input order."""
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    piv_cols: list[int] = []
    for idx, v in enumerate(vectors):
        w = [q(x) for x in v]
        for row, pc in zip(echelon, piv_cols):
            if w[pc]:
                f = w[pc]
                w = [a - f * b for a, b in zip(w, row)]
        pc = next((j for j, a in enumerate(w) if a), None)
        if pc is None:
            continue
        p = w[pc]
        w = [a / p for a in w]
        echelon.append(w)
        piv_cols.append(pc)
        chosen.append(idx)
    return chosen


def solve(m: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One exact solution of ``m x = b`` (free variables set to zero), or None."""
    ncols = len(m[0])
    aug = [list(r) + [q(bi)] for r, bi in zip(m, b)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, pc in zip(rows, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def coordinates(basis: Sequence[Sequence], v: Sequence) -> Vector | None:
    """Coefficients ``c`` with ``sum(c_i basis_i) == v``, or None if v is outside the span."""
    return solve(transpose(basis), v)
