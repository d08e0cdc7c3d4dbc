"""Restricted general probabilistic theories over polytopic state spaces.

A state space ``K`` is a polytope in some ambient ``R^d``; its linear span is
modelled with homogeneous coordinates ``(1, x)``. Effects are affine
functionals on ``R^d``. Two functionals that agree on the vertices of ``K``
are the same effect, so effects are compared through their vertex values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import lp
from .geometry import AffineFunctional, Polytope, dd_hrep_to_vrep, homogeneous
from .rational import ONE, ZERO, Vector, coordinates, q, rank, row_basis, vec


class TheoryError(ValueError):
    """An input object violates one of its invariants."""


@dataclass(frozen=True)
class StateSpace:
    body: Polytope
    label: str = ""

    def __post_init__(self):
        body = self.body
        if body.vertices is None:
            body = dd_hrep_to_vrep(body)
        if not body.vertices:
            raise TheoryError("state space is empty")
        object.__setattr__(self, "body", Polytope.from_points(body.vertices))

    @classmethod
    def from_vertices(cls, vertices, label: str = "") -> "StateSpace":
        return cls(Polytope.from_points(vertices), label)

    @property
    def vertices(self) -> tuple:
        return self.body.vertices

    @property
    def ambient_dim(self) -> int:
        return self.body.ambient_dim

    @property
    def dim(self) -> int:
        return self.body.dim

    def chart(self):
        return self.body.chart()

    def homogeneous_vertices(self) -> list[Vector]:
        return [homogeneous(v) for v in self.vertices]

    def span_dim(self) -> int:
        return rank(self.homogeneous_vertices())

    def values(self, f: AffineFunctional) -> Vector:
        """Vertex values of ``f``; this is the canonical form of an effect on K."""
        if f.dim != self.ambient_dim:
            raise TheoryError(f"functional of dimension {f.dim} on a {self.ambient_dim}-dimensional space")
        return tuple(f(v) for v in self.vertices)

    def contains(self, x: Sequence) -> bool:
        return self.body.contains(x)

    def convex_weights(self, x: Sequence) -> tuple | None:
        """Exact convex-combination witness over the vertices (LP), or None."""
        return lp.convex_weights(self.vertices, vec(x))

    def unit(self) -> AffineFunctional:
        return AffineFunctional.constant_fn(self.ambient_dim, ONE)

    def zero(self) -> AffineFunctional:
        return AffineFunctional.constant_fn(self.ambient_dim, ZERO)

    def is_effect(self, f: AffineFunctional) -> bool:
        return all(ZERO <= x <= ONE for x in self.values(f))

    def functional(self, values: Sequence) -> AffineFunctional:
        f = self.body.functional_from_values([q(v) for v in values])
        if f is None:
            raise TheoryError("vertex values are not those of an affine functional")
        return f

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim + 1


@dataclass(frozen=True)
class EffectRestriction:
    """The convex set ``E = conv(generators)`` of allowed effects on ``K``.

    ``0_K`` and ``1_K`` are added to the generators if they are missing.
    """

    K: StateSpace
    generators: tuple

    def __post_init__(self):
        gens = []
        seen = set()
        for f in (self.K.zero(), self.K.unit()) + tuple(self.generators):
            if not isinstance(f, AffineFunctional):
                f = AffineFunctional(*f)
            vals = self.K.values(f)
            if any(x < 0 or x > 1 for x in vals):
                raise TheoryError(f"generator {f} leaves [0, 1] on K")
            if vals not in seen:
                seen.add(vals)
                gens.append(f)
        object.__setattr__(self, "generators", tuple(gens))

    def value_matrix(self) -> list[Vector]:
        return [self.K.values(g) for g in self.generators]

    def membership_witness(self, f: AffineFunctional) -> tuple | None:
        """Convex weights over the generators reproducing ``f`` on K, or None."""
        return lp.convex_weights(self.value_matrix(), self.K.values(f))

    def contains(self, f: AffineFunctional) -> bool:
        return self.membership_witness(f) is not None

    def span_basis(self) -> list[AffineFunctional]:
        """Greedy basis of span(E) starting with ``1_K``."""
        vals = self.value_matrix()  # generators[1] is 1_K
        order = [1] + [i for i in range(len(vals)) if i != 1]
        idx = row_basis([vals[i] for i in order])
        return [self.generators[order[i]] for i in idx]


@dataclass(frozen=True)
class Measurement:
    effects: tuple
    labels: tuple = ()

    def __post_init__(self):
        effs = tuple(f if isinstance(f, AffineFunctional) else AffineFunctional(*f) for f in self.effects)
        if not effs:
            raise TheoryError("a measurement needs at least one outcome")
        object.__setattr__(self, "effects", effs)
        labels = tuple(self.labels) or tuple(range(len(effs)))
        if len(labels) != len(effs):
            raise TheoryError("one label per outcome")
        object.__setattr__(self, "labels", labels)

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    def validate(self, K: StateSpace) -> None:
        total = [ZERO] * len(K.vertices)
        for f in self.effects:
            vals = K.values(f)
            if any(x < 0 or x > 1 for x in vals):
                raise TheoryError(f"effect {f} leaves [0, 1] on {K.label or 'K'}")
            total = [t + x for t, x in zip(total, vals)]
        if any(t != 1 for t in total):
            raise TheoryError("effects do not sum to the unit effect")

    def probabilities(self, x: Sequence) -> Vector:
        return tuple(f(x) for f in self.effects)

    @classmethod
    def binary(cls, f: AffineFunctional) -> "Measurement":
        one = AffineFunctional.constant_fn(f.dim, ONE)
        return cls((f, one - f))


@dataclass(frozen=True)
class PostProcessing:
    """Right-stochastic matrix: rows are input outcomes, columns output outcomes."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(vec(r) for r in self.matrix)
        if not m or len({len(r) for r in m}) != 1:
            raise TheoryError("post-processing matrix must be rectangular and nonempty")
        for r in m:
            if any(x < 0 for x in r) or sum(r) != 1:
                raise TheoryError("post-processing matrix must be right stochastic")
        object.__setattr__(self, "matrix", m)


def apply_postprocessing(m: Measurement, nu: PostProcessing) -> Measurement:
    if len(nu.matrix) != m.n_outcomes:
        raise TheoryError(f"post-processing has {len(nu.matrix)} rows for {m.n_outcomes} outcomes")
    k = len(nu.matrix[0])
    dim = m.effects[0].dim
    out = []
    for j in range(k):
        g = AffineFunctional.constant_fn(dim, ZERO)
        for i, f in enumerate(m.effects):
            if nu.matrix[i][j]:
                g = g + f * nu.matrix[i][j]
        out.append(g)
    return Measurement(tuple(out))


@dataclass(frozen=True)
class DualStateSpace:
    """S(E) in the coordinates ``psi -> (psi(b_1), ..., psi(b_{r-1}))``.

    ``basis[0]`` is ``1_K`` and is fixed to 1, so it carries no coordinate.
    """

    body: Polytope
    basis: tuple
    K: StateSpace = field(repr=False)

    def coordinates_of(self, f: AffineFunctional) -> Vector:
        c = coordinates([self.K.values(b) for b in self.basis], self.K.values(f))
        if c is None:
            raise TheoryError("functional is not in span(E)")
        return c

    def evaluate(self, psi: Sequence, f: AffineFunctional) -> Fraction:
        c = self.coordinates_of(f)
        return c[0] + sum((a * z for a, z in zip(c[1:], psi)), ZERO)

    @property
    def vertices(self) -> tuple:
        return self.body.vertices

    def is_simplex(self) -> bool:
        return len(self.body.vertices) == self.body.dim + 1


@dataclass(frozen=True)
class RestrictedTheory:
    K: StateSpace
    E: EffectRestriction
    M: tuple | None = None
    label: str = ""

    def __post_init__(self):
        if self.E.K != self.K:
            raise TheoryError("effect restriction belongs to a different state space")
        if self.M is not None:
            ms = tuple(self.M)
            for m in ms:
                m.validate(self.K)
                for f in m.effects:
                    if not self.E.contains(f):
                        raise TheoryError(f"effect {f} of a generating measurement is not in E")
            object.__setattr__(self, "M", ms)

    def measurements(self) -> tuple:
        """The generating measurement set; defaults to the binary vertex measurements of E."""
        if self.M is not None:
            return self.M
        return binary_vertex_measurements(self.E)


def binary_vertex_measurements(E: EffectRestriction) -> tuple:
    """``{g, 1 - g}`` for every nontrivial generator whose complement is also in E."""
    out = []
    seen = set()
    one = E.K.unit()
    for g in E.generators[2:]:
        v = E.K.values(g)
        c = tuple(1 - x for x in v)
        if v in seen or c in seen:
            continue
        if E.contains(one - g):
            seen.add(v)
            out.append(Measurement.binary(g))
    return tuple(out)


# --------------------------------------------------------------------------
# operations


def no_restriction(K: StateSpace) -> RestrictedTheory:
    return RestrictedTheory(K, effect_polytope(K), label=K.label)


def effect_polytope(K: StateSpace) -> EffectRestriction:
    """Vertex effects of E(K), by double description in chart coordinates."""
    chart = K.chart()
    ys = [chart.to_chart(v) for v in K.vertices]
    k = chart.dim
    facets = []
    for y in ys:
        facets.append(((-ONE,) + tuple(-a for a in y), ZERO))  # f(v) >= 0
        facets.append(((ONE,) + tuple(y), ONE))  # f(v) <= 1
    poly = dd_hrep_to_vrep(Polytope.from_inequalities(facets))
    gens = [chart.lift_functional(v[0], v[1:k + 1]) for v in poly.vertices]
    return EffectRestriction(K, tuple(gens))


def dual_state_space(E: EffectRestriction) -> DualStateSpace:
    basis = E.span_basis()
    r = len(basis)
    if r == 1:
        return DualStateSpace(Polytope(0, ((),), ()), tuple(basis), E.K)
    bvals = [E.K.values(b) for b in basis]
    facets = []
    for g in E.generators:
        a = coordinates(bvals, E.K.values(g))
        # a_0 + sum a_j z_j >= 0
        facets.append((tuple(-x for x in a[1:]), a[0]))
    body = dd_hrep_to_vrep(Polytope.from_inequalities(facets))
    return DualStateSpace(body, tuple(basis), E.K)


def evaluation_channel(T: RestrictedTheory, rho: Sequence, S: DualStateSpace | None = None) -> Vector:
    """The point of S(E) that every effect of E evaluates exactly as on ``rho``."""
    rho = vec(rho)
    if T.K.convex_weights(rho) is None:
        raise TheoryError(f"{rho} is not in K")
    S = S or dual_state_space(T.E)
    return tuple(b(rho) for b in S.basis[1:])


def generate_effect_algebra(K: StateSpace, M: Sequence[Measurement]) -> EffectRestriction:
    """effect(M): subset sums of each measurement's effects, plus 0 and 1."""
    gens = []
    for m in M:
        m.validate(K)
        n = m.n_outcomes
        for size in range(1, n):
            for S in combinations(range(n), size):
                g = m.effects[S[0]]
                for a in S[1:]:
                    g = g + m.effects[a]
                gens.append(g)
    return EffectRestriction(K, tuple(gens))


def theory_from_measurements(K: StateSpace, M: Sequence[Measurement], label: str = "") -> RestrictedTheory:
    return RestrictedTheory(K, generate_effect_algebra(K, M), tuple(M), label)


def is_tomographically_complete(T: RestrictedTheory) -> bool:
    chart = T.K.chart()
    parts = [chart.restrict_functional(g)[1] for g in T.E.generators]
    return rank(parts) == chart.dim if chart.dim else True
