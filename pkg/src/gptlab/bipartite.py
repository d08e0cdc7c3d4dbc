"""Bipartite states and the minimal / maximal tensor products.

A bipartite state is a matrix ``T`` acting on homogeneous coordinates:
``(f (x) g)(T) = f_hat^T T g_hat`` where ``f_hat = (constant, linear)``.
Product states are ``outer((1, a), (1, b))`` and normalization is ``T[0][0] == 1``.
Tensor-product polytopes live in the flattened coordinates of ``T`` with the
fixed ``T[0][0]`` entry dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .geometry import AffineFunctional, Polytope, dd_hrep_to_vrep, homogeneous
from .gpt import Measurement, StateSpace, TheoryError, effect_polytope
from .rational import ONE, ZERO, Matrix, Vector, dot, mat, nullspace, outer, rank, transpose, vecmat

MIN, MAX = "min", "max"


@dataclass(frozen=True)
class BipartiteState:
    tensor: Matrix
    K_A: StateSpace
    K_B: StateSpace

    def __post_init__(self):
        T = mat(self.tensor)
        object.__setattr__(self, "tensor", T)
        if len(T) != self.K_A.ambient_dim + 1 or any(len(r) != self.K_B.ambient_dim + 1 for r in T):
            raise TheoryError("tensor shape does not match the factor spaces")
        if T[0][0] != 1:
            raise TheoryError("tensor is not normalized: (1 (x) 1)(rho) must be 1")
        if not _in_span(self.K_A.homogeneous_vertices(), transpose(T)):
            raise TheoryError("tensor leaves span(K_A) on Alice's side")
        if not _in_span(self.K_B.homogeneous_vertices(), T):
            raise TheoryError("tensor leaves span(K_B) on Bob's side")

    @classmethod
    def product(cls, K_A: StateSpace, a: Sequence, K_B: StateSpace, b: Sequence) -> "BipartiteState":
        return cls(outer(homogeneous(a), homogeneous(b)), K_A, K_B)

    def evaluate(self, f: AffineFunctional, g: AffineFunctional) -> Fraction:
        return dot(vecmat(f.homogeneous(), self.tensor), g.homogeneous())

    def flat(self) -> Vector:
        return flatten(self.tensor)

    def reduced(self, side: str) -> Vector:
        """Marginal state of one party, as a point of its ambient space."""
        if side == "A":
            return tuple(r[0] for r in self.tensor[1:])
        return tuple(self.tensor[0][1:])

    def in_max(self) -> bool:
        return maximal_tensor(self.K_A, self.K_B).body.contains(self.flat())

    def in_min(self) -> bool:
        return minimal_tensor_weights(self) is not None


def _in_span(basis: Sequence[Sequence], vectors: Sequence[Sequence]) -> bool:
    r = rank(basis)
    return all(rank(list(basis) + [v]) == r for v in vectors)


def flatten(T: Sequence[Sequence]) -> Vector:
    flat = tuple(x for r in T for x in r)
    return flat[1:]


def unflatten(x: Sequence, shape: tuple[int, int]) -> Matrix:
    full = (ONE,) + tuple(x)
    m, n = shape
    return tuple(tuple(full[i * n:(i + 1) * n]) for i in range(m))


@dataclass(frozen=True)
class TensorProductSpace:
    kind: str
    K_A: StateSpace
    K_B: StateSpace
    body: Polytope

    @property
    def shape(self) -> tuple[int, int]:
        return (self.K_A.ambient_dim + 1, self.K_B.ambient_dim + 1)

    def contains(self, rho: BipartiteState) -> bool:
        if self.kind == MIN and self.body.facets is None:
            return lp.convex_weights(self.body.vertices, rho.flat()) is not None
        return self.body.contains(rho.flat())

    def with_vrep(self) -> "TensorProductSpace":
        return TensorProductSpace(self.kind, self.K_A, self.K_B, self.body.with_vrep())

    def vertex_set(self) -> set:
        return set(Polytope.from_points(self.body.with_vrep().vertices).vertices)


def minimal_tensor(K_A: StateSpace, K_B: StateSpace) -> TensorProductSpace:
    """conv of products of vertices (V-representation only)."""
    seen = []
    for a in K_A.vertices:
        for b in K_B.vertices:
            v = flatten(outer(homogeneous(a), homogeneous(b)))
            if v not in seen:
                seen.append(v)
    dim = (K_A.ambient_dim + 1) * (K_B.ambient_dim + 1) - 1
    return TensorProductSpace(MIN, K_A, K_B, Polytope(dim, tuple(seen)))


def maximal_tensor(K_A: StateSpace, K_B: StateSpace, eff_A=None, eff_B=None) -> TensorProductSpace:
    """Normalized tensors nonnegative on every product of vertex effects (H-representation)."""
    eff_A = eff_A or effect_polytope(K_A).generators
    eff_B = eff_B or effect_polytope(K_B).generators
    nA, nB = K_A.ambient_dim + 1, K_B.ambient_dim + 1
    dim = nA * nB - 1
    facets = []
    seen = set()
    for f in eff_A:
        fh = f.homogeneous()
        if not any(fh):
            continue
        for g in eff_B:
            gh = g.homogeneous()
            if not any(gh):
                continue
            coeff = flatten(outer(fh, gh))
            key = (tuple(-c for c in coeff), fh[0] * gh[0])
            if not any(key[0]):
                continue  # constant product, nonnegative
            if key not in seen:
                seen.add(key)
                facets.append(key)
    # stay inside span(K_A) (x) span(K_B)
    for nA_vec in nullspace(K_A.homogeneous_vertices(), nA):
        for j in range(nB):
            coeff = [ZERO] * (nA * nB)
            for i in range(nA):
                coeff[i * nB + j] = nA_vec[i]
            _equation(facets, coeff)
    for nB_vec in nullspace(K_B.homogeneous_vertices(), nB):
        for i in range(nA):
            coeff = [ZERO] * (nA * nB)
            for j in range(nB):
                coeff[i * nB + j] = nB_vec[j]
            _equation(facets, coeff)
    return TensorProductSpace(MAX, K_A, K_B, Polytope(dim, None, tuple(facets)))


def _equation(facets: list, coeff: Sequence) -> None:
    # coeff . full == 0 with full[0] == 1
    a = tuple(coeff[1:])
    facets.append((a, -coeff[0]))
    facets.append((tuple(-c for c in a), coeff[0]))


def tensor_products_equal(K_A: StateSpace, K_B: StateSpace) -> bool:
    """Whether the minimal and maximal tensor products coincide (vertex-set equality)."""
    mn = minimal_tensor(K_A, K_B).vertex_set()
    mx = set(dd_hrep_to_vrep(maximal_tensor(K_A, K_B).body).vertices)
    return mn == mx


def minimal_tensor_weights(rho: BipartiteState) -> tuple | None:
    """Separable decomposition weights over vertex products, or None if entangled."""
    return lp.convex_weights(minimal_tensor(rho.K_A, rho.K_B).body.vertices, rho.flat())


def partial_apply_effect(rho: BipartiteState, f: AffineFunctional, side: str) -> Vector:
    """``(f (x) id)(rho)`` for ``side='A'`` or ``(id (x) f)(rho)`` for ``side='B'``.

    The result is a homogeneous vector ``(weight, weight * state)`` of the other party.
    """
    T = rho.tensor
    if side == "A":
        if f.dim != rho.K_A.ambient_dim:
            raise TheoryError("effect does not act on Alice's space")
        return vecmat(f.homogeneous(), T)
    if side == "B":
        if f.dim != rho.K_B.ambient_dim:
            raise TheoryError("effect does not act on Bob's space")
        fh = f.homogeneous()
        return tuple(dot(r, fh) for r in T)
    raise TheoryError(f"unknown side {side!r}")


def normalized(v: Sequence) -> Vector:
    """The state encoded by a homogeneous vector with positive weight."""
    return tuple(x / v[0] for x in v[1:])


def correlator(rho: BipartiteState, A: Measurement, B: Measurement) -> Fraction:
    signs = (1, -1)
    return sum(
        (a * b * rho.evaluate(f, g) for a, f in zip(signs, A.effects) for b, g in zip(signs, B.effects)),
        ZERO,
    )


def chsh_value(rho: BipartiteState, A1: Measurement, A2: Measurement,
               B1: Measurement, B2: Measurement) -> Fraction:
    """E11 + E12 + E21 - E22 with outcome 0 read as +1 and outcome 1 as -1."""
    for m in (A1, A2, B1, B2):
        if m.n_outcomes != 2:
            raise TheoryError("CHSH needs binary measurements")
    return (correlator(rho, A1, B1) + correlator(rho, A1, B2)
            + correlator(rho, A2, B1) - correlator(rho, A2, B2))
