"""Exact polytopes in double representation.

A :class:`Polytope` stores a vertex list (V-representation), a list of
inequalities ``normal . x <= offset`` (H-representation), or both. Conversion
between the two goes through a homogenized cone and Motzkin's double
description method, run entirely on Python integers.

Lower-dimensional inputs are handled through an exact affine chart: the
points are expressed in coordinates of their affine hull, converted there,
and the result is lifted back with the hull's equations appended as pairs of
opposite inequalities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import (
    ONE,
    ZERO,
    Vector,
    dot,
    integer_rows,
    matvec,
    nullspace,
    primitive,
    q,
    rank,
    row_basis,
    solve,
    sub,
    transpose,
    vec,
)


class GeometryError(ValueError):
    pass


class EmptyPolytopeError(GeometryError):
    pass


class UnboundedError(GeometryError):
    pass


@dataclass(frozen=True)
class AffineFunctional:
    """The map ``x -> linear . x + constant``."""

    linear: Vector
    constant: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "linear", vec(self.linear))
        object.__setattr__(self, "constant", q(self.constant))

    @property
    def dim(self) -> int:
        return len(self.linear)

    def __call__(self, x: Sequence) -> Fraction:
        return dot(self.linear, x) + self.constant

    def homogeneous(self) -> Vector:
        """Coefficients acting on homogeneous coordinates ``(weight, weight * x)``."""
        return (self.constant,) + self.linear

    @classmethod
    def from_homogeneous(cls, h: Sequence) -> "AffineFunctional":
        h = vec(h)
        return cls(h[1:], h[0])

    @classmethod
    def constant_fn(cls, dim: int, value=ONE) -> "AffineFunctional":
        return cls((ZERO,) * dim, value)

    def __add__(self, other: "AffineFunctional") -> "AffineFunctional":
        return AffineFunctional(
            tuple(a + b for a, b in zip(self.linear, other.linear)),
            self.constant + other.constant,
        )

    def __sub__(self, other: "AffineFunctional") -> "AffineFunctional":
        return AffineFunctional(
            tuple(a - b for a, b in zip(self.linear, other.linear)),
            self.constant - other.constant,
        )

    def __mul__(self, c) -> "AffineFunctional":
        c = q(c)
        return AffineFunctional(tuple(c * a for a in self.linear), c * self.constant)

    __rmul__ = __mul__


def homogeneous(x: Sequence, weight=ONE) -> Vector:
    """The point ``x`` as the vector ``(1, x)`` of span(K), optionally scaled."""
    w = q(weight)
    return (w,) + tuple(w * q(a) for a in x)


@dataclass(frozen=True)
class AffineChart:
    """Coordinates on an affine subspace: ``x = origin + sum_j y_j basis_j``."""

    origin: Vector
    basis: tuple  # direction vectors
    _rows: tuple = field(repr=False)  # ambient coordinates used to invert
    _inv: tuple = field(repr=False)  # inverse of the basis restricted to _rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.origin)

    @classmethod
    def of_points(cls, points: Sequence[Sequence]) -> "AffineChart":
        pts = [vec(p) for p in points]
        if not pts:
            raise EmptyPolytopeError("affine hull of no points")
        x0 = pts[0]
        diffs = [sub(p, x0) for p in pts[1:]]
        idx = row_basis(diffs) if diffs else []
        basis = tuple(diffs[i] for i in idx)
        k = len(basis)
        if k == 0:
            return cls(x0, (), (), ())
        cols = transpose(basis)  # d x k
        rows = tuple(row_basis(cols))
        sub_m = [cols[r] for r in rows]  # k x k invertible
        inv = _inverse(sub_m)
        return cls(x0, basis, rows, tuple(inv))

    def to_chart(self, x: Sequence) -> Vector:
        d = sub(vec(x), self.origin)
        return matvec(self._inv, [d[r] for r in self._rows]) if self.basis else ()

    def from_chart(self, y: Sequence) -> Vector:
        out = list(self.origin)
        for c, b in zip(y, self.basis):
            if c:
                for i, a in enumerate(b):
                    out[i] += c * a
        return tuple(out)

    def contains(self, x: Sequence) -> bool:
        return tuple(self.from_chart(self.to_chart(x))) == vec(x)

    def pullback_linear(self, a: Sequence) -> Vector:
        """Ambient vector ``w`` with ``w . x == a . to_chart(x)`` up to the constant ``-a . to_chart(0)``."""
        w = [ZERO] * self.ambient_dim
        for i, r in enumerate(self._rows):
            s = sum((a[j] * self._inv[j][i] for j in range(self.dim)), ZERO)
            w[r] = s
        return tuple(w)

    def lift_functional(self, c, a: Sequence) -> AffineFunctional:
        """The ambient affine functional equal to ``c + a . y`` on the chart."""
        w = self.pullback_linear(a)
        return AffineFunctional(w, q(c) - dot(w, self.origin))

    def restrict_functional(self, f: AffineFunctional) -> tuple[Fraction, Vector]:
        """Chart form ``(c, a)`` of an ambient functional restricted to the subspace."""
        c = f(self.origin)
        a = tuple(dot(f.linear, b) for b in self.basis)
        return c, a

    def equations(self) -> list[tuple[Vector, Fraction]]:
        """Equations ``n . x == n . origin`` cutting out the subspace."""
        if self.basis:
            normals = nullspace(self.basis, self.ambient_dim)
        else:
            normals = [tuple(ONE if j == i else ZERO for j in range(self.ambient_dim))
                       for i in range(self.ambient_dim)]
        return [(tuple(primitive_q(n)), dot(primitive_q(n), self.origin)) for n in normals]

    def equations_as_facets(self) -> list[tuple]:
        out = []
        for n, c in self.equations():
            out.append((n, c))
            out.append((tuple(-a for a in n), -c))
        return out


def primitive_q(v: Sequence) -> Vector:
    return tuple(Fraction(i) for i in primitive(v))


def _inverse(m: Sequence[Sequence]) -> list[Vector]:
    n = len(m)
    cols = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        x = solve(m, e)
        if x is None:
            raise GeometryError("singular matrix")
        cols.append(x)
    return [tuple(cols[j][i] for j in range(n)) for i in range(n)]


# --------------------------------------------------------------------------
# double description on integer cones  {z : R z >= 0}


def extreme_rays(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{z in R^n : r . z >= 0 for r in rows}``.

    Rays come back as primitive integer vectors. Raises :class:`GeometryError`
    if the cone has a nontrivial lineality space.
    """
    R = []
    seen = set()
    for r in rows:
        p = primitive(r)
        if any(p) and p not in seen:
            seen.add(p)
            R.append(p)
    if rank(R) < n:
        raise GeometryError("cone is not pointed")

    init = row_basis(R)
    A = [R[i] for i in init]
    inv = _inverse([[Fraction(a) for a in r] for r in A])
    # column j of inv is tight on every initial row except row j
    rays = [primitive([inv[i][j] for i in range(n)]) for j in range(n)]
    zsets = []
    for j in range(n):
        mask = 0
        for pos in range(n):
            if pos != j:
                mask |= 1 << pos
        zsets.append(mask)
    row_order = list(init) + [i for i in range(len(R)) if i not in set(init)]
    # bit position of each row = its position in row_order
    for pos in range(n, len(row_order)):
        r = R[row_order[pos]]
        vals = [sum(a * b for a, b in zip(r, ray)) for ray in rays]
        pos_i = [i for i, v in enumerate(vals) if v > 0]
        neg_i = [i for i, v in enumerate(vals) if v < 0]
        if not neg_i:
            bit = 1 << pos
            zsets = [z | bit if vals[i] == 0 else z for i, z in enumerate(zsets)]
            continue
        bit = 1 << pos
        new_rays = []
        new_z = []
        for i in pos_i:
            zi = zsets[i]
            for j in neg_i:
                common = zi & zsets[j]
                if common.bit_count() < n - 2:
                    continue
                adjacent = True
                for k, zk in enumerate(zsets):
                    if k != i and k != j and (zk & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vi, vj = vals[i], vals[j]
                new = primitive([vi * b - vj * a for a, b in zip(rays[i], rays[j])])
                new_rays.append(new)
                new_z.append(common | bit)
        keep = [i for i, v in enumerate(vals) if v >= 0]
        rays = [rays[i] for i in keep] + new_rays
        zsets = [zsets[i] | bit if vals[i] == 0 else zsets[i] for i in keep] + new_z
    return rays


# --------------------------------------------------------------------------
# polytopes


Facet = tuple  # (normal: Vector, offset: Fraction)


@dataclass(frozen=True)
class Polytope:
    """A bounded convex polytope with an optional V- and H-representation."""

    ambient_dim: int
    vertices: tuple | None = None
    facets: tuple | None = None

    def __post_init__(self):
        if self.vertices is not None:
            vs = tuple(vec(v) for v in self.vertices)
            for v in vs:
                if len(v) != self.ambient_dim:
                    raise GeometryError(f"vertex {v} is not {self.ambient_dim}-dimensional")
            object.__setattr__(self, "vertices", vs)
        if self.facets is not None:
            fs = tuple((vec(a), q(b)) for a, b in self.facets)
            for a, _ in fs:
                if len(a) != self.ambient_dim:
                    raise GeometryError(f"normal {a} is not {self.ambient_dim}-dimensional")
            object.__setattr__(self, "facets", fs)

    # construction ---------------------------------------------------------

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "Polytope":
        """Convex hull of ``points`` with redundant points removed (both reps filled)."""
        pts = []
        seen = set()
        for p in points:
            v = vec(p)
            if v not in seen:
                seen.add(v)
                pts.append(v)
        if not pts:
            raise EmptyPolytopeError("no points")
        d = len(pts[0])
        chart = AffineChart.of_points(pts)
        if chart.dim == 0:
            return cls(d, (pts[0],), tuple(chart.equations_as_facets()))
        ys = [chart.to_chart(p) for p in pts]
        cfacets = _chart_facets(ys)
        k = chart.dim
        verts = []
        for p, y in zip(pts, ys):
            tight = [a for a, b in cfacets if dot(a, y) == b]
            if len(tight) >= k and rank(tight) == k:
                verts.append(p)
        return cls(d, tuple(verts), tuple(_lift_facets(chart, cfacets)))

    @classmethod
    def from_inequalities(cls, facets: Iterable[tuple]) -> "Polytope":
        fs = tuple((vec(a), q(b)) for a, b in facets)
        if not fs:
            raise GeometryError("no inequalities")
        return cls(len(fs[0][0]), None, fs)

    # status ----------------------------------------------------------------

    @property
    def rep_status(self) -> str:
        if self.vertices is not None and self.facets is not None:
            return "both"
        if self.vertices is not None:
            return "V"
        if self.facets is not None:
            return "H"
        return "empty"

    def with_hrep(self) -> "Polytope":
        return self if self.facets is not None else dd_vrep_to_hrep(self)

    def with_vrep(self) -> "Polytope":
        return self if self.vertices is not None else dd_hrep_to_vrep(self)

    @property
    def dim(self) -> int:
        """Dimension of the affine hull."""
        return self.chart().dim

    def chart(self) -> AffineChart:
        return AffineChart.of_points(self.with_vrep().vertices)

    def homogeneous_vertices(self) -> list[Vector]:
        return [homogeneous(v) for v in self.with_vrep().vertices]

    def span_dim(self) -> int:
        """Dimension of the linear span of the homogenized body, i.e. dim aff + 1."""
        return self.dim + 1

    # queries ---------------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        """Exact membership via the H-representation."""
        x = vec(x)
        return all(dot(a, x) <= b for a, b in self.with_hrep().facets)

    def same_as(self, other: "Polytope") -> bool:
        """Equality as point sets, compared on irredundant vertex sets."""
        a = set(Polytope.from_points(self.with_vrep().vertices).vertices)
        b = set(Polytope.from_points(other.with_vrep().vertices).vertices)
        return a == b

    def functional_from_values(self, values: Sequence) -> AffineFunctional | None:
        """The affine functional taking ``values[i]`` at vertex ``i``, if one exists."""
        verts = self.with_vrep().vertices
        chart = AffineChart.of_points(verts)
        rows = [(ONE,) + chart.to_chart(v) for v in verts]
        sol = solve(rows, [q(w) for w in values])
        if sol is None:
            return None
        return chart.lift_functional(sol[0], sol[1:])

    def affine_dependencies(self) -> list[Vector]:
        """Vectors ``d`` with ``sum_i d_i (1, v_i) == 0`` over the vertices."""
        hv = self.homogeneous_vertices()
        return nullspace(transpose(hv), len(hv))

    def intersect_affine(self, equations: Sequence[tuple]) -> "Polytope":
        """Intersection with ``{x : n . x == c}`` for each ``(n, c)``, vertices included."""
        fs = list(self.with_hrep().facets)
        for n, c in equations:
            n = vec(n)
            c = q(c)
            fs.append((n, c))
            fs.append((tuple(-a for a in n), -c))
        return dd_hrep_to_vrep(Polytope.from_inequalities(fs))


def _chart_facets(ys: Sequence[Sequence]) -> list[tuple]:
    """Facets ``a . y <= b`` of the full-dimensional hull of chart points."""
    k = len(ys[0])
    rows = integer_rows([(ONE,) + tuple(-c for c in y) for y in ys])
    rays = extreme_rays(rows, k + 1)
    out = []
    for ray in rays:
        b, a = ray[0], ray[1:]
        if not any(a):
            continue
        out.append((tuple(Fraction(x) for x in a), Fraction(b)))
    out.sort()
    return out


def _lift_facets(chart: AffineChart, cfacets) -> list[tuple]:
    out = []
    for a, b in cfacets:
        f = chart.lift_functional(-b, a)  # a . y - b  as ambient functional
        n = primitive_q(f.linear)
        # rescale offset with the same positive factor
        scale = _ratio(n, f.linear)
        out.append((n, -f.constant * scale))
    out.extend(chart.equations_as_facets())
    return out


def _ratio(target: Sequence, source: Sequence) -> Fraction:
    for t, s in zip(target, source):
        if s:
            return Fraction(t) / s
    return ONE


def dd_vrep_to_hrep(p: Polytope) -> Polytope:
    """Fill in an irredundant H-representation from the vertices."""
    if not p.vertices:
        raise EmptyPolytopeError("empty vertex list")
    hull = Polytope.from_points(p.vertices)
    return Polytope(p.ambient_dim, hull.vertices, hull.facets)


def dd_hrep_to_vrep(p: Polytope) -> Polytope:
    """Fill in the vertices of a bounded H-polytope.

    Raises :class:`UnboundedError` for unbounded regions and
    :class:`EmptyPolytopeError` for infeasible ones.
    """
    if not p.facets:
        raise GeometryError("no inequalities")
    d = p.ambient_dim
    normals = [a for a, _ in p.facets]
    # cone over (t, x): t * b - a . x >= 0, t >= 0
    rows = [(b,) + tuple(-c for c in a) for a, b in p.facets]
    rows.append((ONE,) + (ZERO,) * d)
    irows = integer_rows(rows)
    if rank(normals) < d:
        # lineality: decide emptiness on the orthogonal complement of it
        lin = nullspace(normals, d)
        extra = []
        for l in lin:
            extra.append((ZERO,) + tuple(l))
            extra.append((ZERO,) + tuple(-c for c in l))
        rays = extreme_rays(irows + integer_rows(extra), d + 1)
        if any(r[0] > 0 for r in rays):
            raise UnboundedError("region is unbounded")
        raise EmptyPolytopeError("region is empty")
    rays = extreme_rays(irows, d + 1)
    verts = []
    unbounded = False
    for r in rays:
        if r[0] > 0:
            verts.append(tuple(Fraction(c, r[0]) for c in r[1:]))
        elif any(r[1:]):
            unbounded = True
    if not verts:
        raise EmptyPolytopeError("region is empty")
    if unbounded:
        raise UnboundedError("region is unbounded")
    verts.sort()
    return Polytope(d, tuple(verts), p.facets)


def is_affinely_independent(points: Sequence[Sequence]) -> bool:
    pts = [vec(p) for p in points]
    if not pts:
        raise GeometryError("empty point list")
    diffs = [sub(p, pts[0]) for p in pts[1:]]
    return rank(diffs) == len(pts) - 1 if diffs else True


def is_simplex(p: Polytope) -> bool:
    return is_affinely_independent(p.with_vrep().vertices)
