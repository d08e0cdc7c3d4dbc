"""Steering scenarios, local-hidden-state models and the steering/contextuality link.

Bob's conditional states are homogeneous vectors ``(weight, weight * state)``
of his ambient space. Alice's conditioned states ``K_rho`` come from applying
Bob's vertex effects to the shared tensor.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from .bipartite import MAX, MIN, BipartiteState, maximal_tensor, minimal_tensor, normalized, partial_apply_effect
from .contextuality import prep_noncontextual
from .decision import Decision, FarkasWitness, decide
from .geometry import Polytope, homogeneous
from .gpt import RestrictedTheory, StateSpace, TheoryError, effect_polytope, generate_effect_algebra
from .lp import EQ, LPBuilder, LPProblem, convex_weights, solve
from .rational import ONE, ZERO, Vector, coordinates, nullspace, q, rank, row_basis


class TheoremInapplicable(TheoryError):
    """The scenario does not meet the full-dimensionality hypothesis."""


@dataclass(frozen=True)
class SteeringScenario:
    rho: BipartiteState
    M: tuple
    ambient: object = MAX  # "min", "max", a Polytope in flattened tensor coordinates, or None

    def __post_init__(self):
        ms = tuple(self.M)
        for m in ms:
            m.validate(self.K_A)
        object.__setattr__(self, "M", ms)

    @property
    def K_A(self) -> StateSpace:
        return self.rho.K_A

    @property
    def K_B(self) -> StateSpace:
        return self.rho.K_B

    def check_membership(self) -> bool:
        """``rho`` lies in the declared ambient tensor product (and that ambient is sandwiched)."""
        if self.ambient is None:
            return True
        if self.ambient == MIN:
            return self.rho.in_min()
        if self.ambient == MAX:
            return self.rho.in_max()
        body: Polytope = self.ambient
        if not body.contains(self.rho.flat()):
            return False
        mx = maximal_tensor(self.K_A, self.K_B).body
        mn = minimal_tensor(self.K_A, self.K_B).body
        return all(body.contains(v) for v in mn.vertices) and all(mx.contains(v) for v in body.with_vrep().vertices)


@dataclass(frozen=True)
class Assemblage:
    """``sigma[x][a]``: Bob's subnormalized homogeneous state for outcome a of setting x."""

    sigma: tuple

    def __post_init__(self):
        sig = tuple(tuple(tuple(q(c) for c in s) for s in row) for row in self.sigma)
        object.__setattr__(self, "sigma", sig)
        if not sig:
            return
        marg = None
        for row in sig:
            tot = tuple(sum(c) for c in zip(*row))
            if marg is None:
                marg = tot
            elif tot != marg:
                raise TheoryError("assemblage is signalling: outcome sums differ between settings")
            if any(s[0] < 0 for s in row):
                raise TheoryError("negative outcome probability in assemblage")
        if marg[0] != 1:
            raise TheoryError("assemblage is not normalized")

    @property
    def settings(self) -> int:
        return len(self.sigma)

    def outcomes(self, x: int) -> int:
        return len(self.sigma[x])

    def reduced(self) -> Vector:
        return tuple(sum(c) for c in zip(*self.sigma[0]))


@dataclass(frozen=True)
class LHSModelCert:
    strategies: tuple  # lam: tuple of outcome per setting
    weights: tuple  # p(lam)
    states: tuple  # sigma_lam, points of K_B
    responses: tuple  # responses[x][i][a]
    decompositions: tuple  # convex weights of each sigma_lam over K_B's vertices


def assemblage(sc: SteeringScenario) -> Assemblage:
    return Assemblage(tuple(tuple(partial_apply_effect(sc.rho, f, "A") for f in m.effects) for m in sc.M))


def strategies(asm: Assemblage) -> list[tuple]:
    return list(product(*(range(asm.outcomes(x)) for x in range(asm.settings))))


def lhs_lp(asm: Assemblage, K_B: StateSpace) -> LPProblem:
    lams = strategies(asm)
    hv = K_B.homogeneous_vertices()
    n = K_B.ambient_dim + 1
    b = LPBuilder()
    var = [[b.var(("w", i, v)) for v in range(len(hv))] for i in range(len(lams))]
    for x in range(asm.settings):
        for a in range(asm.outcomes(x)):
            s = asm.sigma[x][a]
            for j in range(n):
                row = {}
                for i, lam in enumerate(lams):
                    if lam[x] == a:
                        for v, w in enumerate(hv):
                            if w[j]:
                                row[var[i][v]] = w[j]
                b.add(row, EQ, s[j])
    if asm.settings == 0:
        b.add({var[0][v]: 1 for v in range(len(hv))}, EQ, 1)
    return b.build()


def has_lhs_model(asm: Assemblage, K_B: StateSpace) -> Decision:
    """Local-hidden-state model over deterministic response strategies; YES means unsteerable."""
    if any(len(s) != K_B.ambient_dim + 1 for row in asm.sigma for s in row):
        raise TheoryError("assemblage does not live on Bob's space")
    lams = strategies(asm)
    nv = len(K_B.vertices)
    problem = lhs_lp(asm, K_B)

    def cert(x):
        keep, weights, states, decs = [], [], [], []
        for i, lam in enumerate(lams):
            w = x[i * nv:(i + 1) * nv]
            p = sum(w)
            if p == 0:
                continue
            keep.append(lam)
            weights.append(p)
            dec = tuple(c / p for c in w)
            decs.append(dec)
            states.append(tuple(sum((c * v[j] for c, v in zip(dec, K_B.vertices)), ZERO)
                                for j in range(K_B.ambient_dim)))
        resp = tuple(
            tuple(tuple(ONE if lam[x] == a else ZERO for a in range(asm.outcomes(x))) for lam in keep)
            for x in range(asm.settings)
        )
        return LHSModelCert(tuple(keep), tuple(weights), tuple(states), resp, tuple(decs))

    return decide("LHS", problem, cert)


def verify_lhs(asm: Assemblage, K_B: StateSpace, cert: LHSModelCert) -> bool:
    """Exact re-check of an LHS certificate, without any LP."""
    n = len(cert.weights)
    if len(cert.states) != n or len(cert.decompositions) != n or len(cert.responses) != asm.settings:
        return False
    p = [q(w) for w in cert.weights]
    if any(w < 0 for w in p) or sum(p) != 1:
        return False
    verts = K_B.vertices
    for st, dec in zip(cert.states, cert.decompositions):
        dec = [q(c) for c in dec]
        if len(dec) != len(verts) or any(c < 0 for c in dec) or sum(dec) != 1:
            return False
        for j in range(K_B.ambient_dim):
            if sum((c * v[j] for c, v in zip(dec, verts)), ZERO) != q(st[j]):
                return False
    hs = [homogeneous([q(c) for c in st]) for st in cert.states]
    for x in range(asm.settings):
        resp = cert.responses[x]
        if len(resp) != n:
            return False
        for r in resp:
            r = [q(c) for c in r]
            if len(r) != asm.outcomes(x) or any(c < 0 for c in r) or sum(r) != 1:
                return False
        for a in range(asm.outcomes(x)):
            target = asm.sigma[x][a]
            for j in range(len(target)):
                val = sum((p[i] * q(resp[i][a]) * hs[i][j] for i in range(n)), ZERO)
                if val != target[j]:
                    return False
    return True


# --------------------------------------------------------------------------
# the conditioned theory (K_rho, E_m)


def conditioned_state_space(sc: SteeringScenario) -> StateSpace:
    """conv of Alice's normalized conditioned states over Bob's vertex effects."""
    pts = []
    for g in effect_polytope(sc.K_B).generators:
        v = partial_apply_effect(sc.rho, g, "B")
        if v[0] > 0:
            pts.append(normalized(v))
    if not pts:
        raise TheoryError("every vertex effect of Bob has zero probability")
    return StateSpace.from_vertices(pts, "K_rho")


def steered_vectors(sc: SteeringScenario, effects: Sequence) -> list[Vector]:
    return [partial_apply_effect(sc.rho, f, "A") for f in effects]


def is_full_dimensional(sc: SteeringScenario, mode: str = "exact_def7", K_rho: StateSpace | None = None) -> bool:
    """Whether Alice's effects steer Bob onto vectors spanning ``span(K_B)``.

    ``exact_def7`` ranges over the vertex effects of E(K_rho), ``sufficient_lemma8``
    over those of E(K_A). Both are rank tests on the same tensor.
    """
    if mode == "exact_def7":
        K_rho = K_rho or conditioned_state_space(sc)
        effects = effect_polytope(K_rho).generators
    elif mode == "sufficient_lemma8":
        effects = effect_polytope(sc.K_A).generators
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return rank(steered_vectors(sc, effects)) == sc.K_B.span_dim()


def conditioned_theory(sc: SteeringScenario, K_rho: StateSpace | None = None) -> RestrictedTheory:
    """(K_rho, E_m) with E_m generated by Alice's measurements and their coarse-grainings."""
    K_rho = K_rho or conditioned_state_space(sc)
    return RestrictedTheory(K_rho, generate_effect_algebra(K_rho, sc.M), sc.M, "K_rho")


# --------------------------------------------------------------------------
# restriction of Bob's space to the steered subspace


@dataclass(frozen=True)
class NotReducible:
    """No affine retraction of K_B onto K_B cap J exists."""

    J: tuple
    farkas: FarkasWitness


@dataclass(frozen=True)
class Reduction:
    scenario: SteeringScenario
    J: tuple  # homogeneous basis of the steered subspace
    images: tuple  # homogeneous images of K_B's vertices under the retraction


def steered_subspace(sc: SteeringScenario, K_rho: StateSpace | None = None) -> list[Vector]:
    K_rho = K_rho or conditioned_state_space(sc)
    vecs = steered_vectors(sc, effect_polytope(K_rho).generators)
    return [vecs[i] for i in row_basis(vecs)]


def retraction_lp(K_B: StateSpace, J: Sequence[Vector]) -> LPProblem:
    hv = K_B.homogeneous_vertices()
    nv, n = len(hv), K_B.ambient_dim + 1
    b = LPBuilder()
    c = [[b.var(("c", k, j)) for j in range(nv)] for k in range(nv)]

    def image(k):
        # coordinate i of w_k as a sparse row
        return [{c[k][j]: hv[j][i] for j in range(nv) if hv[j][i]} for i in range(n)]

    for k in range(nv):
        b.add({v: 1 for v in c[k]}, EQ, 1)
        for nrm in nullspace(J, n):
            row = {}
            for i, expr in enumerate(image(k)):
                for var, coef in expr.items():
                    row[var] = row.get(var, ZERO) + nrm[i] * coef
            b.add(row, EQ, 0)
    for dep in nullspace([list(col) for col in zip(*hv)], nv):
        # sum_k dep_k v_k = 0 must survive the map
        for i in range(n):
            row = {}
            for k in range(nv):
                if dep[k]:
                    for var, coef in image(k)[i].items():
                        row[var] = row.get(var, ZERO) + dep[k] * coef
            b.add(row, EQ, 0)
    for u in J:
        alpha = coordinates(hv, u)
        if alpha is None:
            raise TheoryError("steered vector outside span(K_B)")
        for i in range(n):
            row = {}
            for k in range(nv):
                if alpha[k]:
                    for var, coef in image(k)[i].items():
                        row[var] = row.get(var, ZERO) + alpha[k] * coef
            b.add(row, EQ, u[i])
    return b.build()


def restrict_to_J(sc: SteeringScenario, K_rho: StateSpace | None = None) -> Reduction | NotReducible:
    """Replace K_B by K_B cap J when an affine retraction onto it fixes J."""
    J = tuple(steered_subspace(sc, K_rho))
    problem = retraction_lp(sc.K_B, J)
    res = solve(problem)
    if not res.feasible:
        return NotReducible(J, FarkasWitness(problem, res.farkas))
    hv = sc.K_B.homogeneous_vertices()
    nv, n = len(hv), sc.K_B.ambient_dim + 1
    images = tuple(
        tuple(sum((res.point[k * nv + j] * hv[j][i] for j in range(nv)), ZERO) for i in range(n))
        for k in range(nv)
    )
    eqs = [(tuple(nrm[1:]), -nrm[0]) for nrm in nullspace(J, n)]
    body = sc.K_B.body.intersect_affine(eqs) if eqs else sc.K_B.body
    K_new = StateSpace(body, (sc.K_B.label or "K_B") + "|J")
    rho = BipartiteState(sc.rho.tensor, sc.K_A, K_new)
    return Reduction(SteeringScenario(rho, sc.M, None), J, images)


def verify_retraction(K_B: StateSpace, J: Sequence[Vector], images: Sequence[Vector]) -> bool:
    """Images of K_B's vertices define a linear map into K_B cap J that fixes J."""
    hv = K_B.homogeneous_vertices()
    n = K_B.ambient_dim + 1
    if len(images) != len(hv):
        return False
    for w in images:
        if w[0] != 1 or convex_weights(K_B.vertices, w[1:]) is None:
            return False
        if rank(list(J) + [w]) != rank(J):
            return False
    # the map must be well defined on linear dependencies among vertices
    for dep in nullspace([list(col) for col in zip(*hv)], len(hv)):
        if any(sum((d * w[i] for d, w in zip(dep, images)), ZERO) for i in range(n)):
            return False
    for u in J:
        alpha = coordinates(hv, u)
        if alpha is None:
            return False
        if tuple(sum((a * w[i] for a, w in zip(alpha, images)), ZERO) for i in range(n)) != tuple(u):
            return False
    return True


# --------------------------------------------------------------------------
# steering versus preparation contextuality


@dataclass(frozen=True)
class CrosscheckReport:
    prep_nc: Decision
    lhs: Decision
    K_rho: StateSpace

    @property
    def agree(self) -> bool:
        return self.prep_nc.answer == self.lhs.answer


def theorem9_crosscheck(sc: SteeringScenario) -> CrosscheckReport:
    """Decide unsteerability twice: by the LHS LP and as prep-noncontextuality of (K_rho, E_m)."""
    K_rho = conditioned_state_space(sc)
    if not is_full_dimensional(sc, "exact_def7", K_rho):
        raise TheoremInapplicable("state is not K_B-full-dimensional; the equivalence does not apply")
    T = conditioned_theory(sc, K_rho)
    return CrosscheckReport(prep_noncontextual(T), has_lhs_model(assemblage(sc), sc.K_B), K_rho)


def bisect_threshold(unsteerable_at: Callable[[object], bool], lo, hi, tol) -> tuple:
    """Shrink ``[lo, hi]`` with ``unsteerable_at(lo)`` true and ``unsteerable_at(hi)`` false.

    Endpoints are exact rationals; the loop halves until ``hi - lo <= tol``.
    """
    lo, hi, tol = q(lo), q(hi), q(tol)
    if not unsteerable_at(lo):
        raise ValueError("lower endpoint must be unsteerable")
    if unsteerable_at(hi):
        return hi, hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if unsteerable_at(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi
