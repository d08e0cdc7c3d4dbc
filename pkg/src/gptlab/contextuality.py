"""Simplex embeddability and preparation noncontextuality of restricted theories.

The embedding LP fixes the hidden-variable index set to the vertices of S(E):
any embedding whose ``psi_lam`` are arbitrary points of S(E) can be rewritten
over vertices by decomposing each ``psi_lam`` and absorbing the weights into
the ``h``'s, so nothing is lost and ``|Lambda| <= |vertices(S(E))|``. This
bound is a property of the formulation, not a general statement about
minimal embeddings.
"""
from __future__ import annotations

from dataclasses import dataclass

from .compatibility import JointMeasurementCert, ek_compatibility_lp, ek_compatible, verify_joint_measurement
from .decision import Decision, decide
from .gpt import RestrictedTheory, TheoryError, dual_state_space
from .lp import EQ, LPBuilder, LPProblem
from .rational import ZERO, coordinates, q


@dataclass(frozen=True)
class SimplexEmbeddingCert:
    effects: tuple  # h_lam, AffineFunctional on K
    points: tuple  # psi_lam in the coordinates of ``basis``
    basis: tuple  # span(E) basis; basis[0] is 1_K and carries no coordinate


@dataclass(frozen=True)
class PrepNCModelCert:
    outcomes: tuple
    effects: tuple  # parent effects h_lam in E(K)
    responses: tuple  # responses[x][i][a] = p(a | x, lam_i)


def embedding_lp(T: RestrictedTheory, S=None) -> LPProblem:
    K, E = T.K, T.E
    S = S or dual_state_space(E)
    nv = len(K.vertices)
    deps = K.body.affine_dependencies()
    bvals = [K.values(b) for b in S.basis]
    psi_of = []  # psi_of[g][v] = psi_v(g)
    for g in E.generators[1:]:
        c = coordinates(bvals, K.values(g))
        psi_of.append([c[0] + sum((a * z for a, z in zip(c[1:], psi)), ZERO) for psi in S.vertices])
    b = LPBuilder()
    H = [[b.var(("h", v, k)) for k in range(nv)] for v in range(len(S.vertices))]
    for row in H:
        for d in deps:
            b.add({row[k]: d[k] for k in range(nv) if d[k]}, EQ, 0)
    for k in range(nv):
        b.add({row[k]: 1 for row in H}, EQ, 1)
    for g, vals in zip(E.generators[1:], psi_of):
        gk = K.values(g)
        for k in range(nv):
            b.add({H[v][k]: vals[v] for v in range(len(H)) if vals[v]}, EQ, gk[k])
    return b.build()


def simplex_embeddable(T: RestrictedTheory) -> Decision:
    K = T.K
    S = dual_state_space(T.E)
    nv = len(K.vertices)
    problem = embedding_lp(T, S)

    def cert(x):
        effects, points = [], []
        for v, psi in enumerate(S.vertices):
            vals = x[v * nv:(v + 1) * nv]
            if any(vals):
                effects.append(K.functional(vals))
                points.append(tuple(psi))
        return SimplexEmbeddingCert(tuple(effects), tuple(points), tuple(S.basis))

    return decide("embed", problem, cert)


def verify_embedding(T: RestrictedTheory, cert: SimplexEmbeddingCert) -> bool:
    """Exact re-check of an embedding certificate, without any LP."""
    K, E = T.K, T.E
    nv = len(K.vertices)
    if len(cert.effects) != len(cert.points) or not cert.basis:
        return False
    bvals = [K.values(b) for b in cert.basis]
    if any(x != 1 for x in bvals[0]):
        return False
    r = len(bvals)
    if any(len(p) != r - 1 for p in cert.points):
        return False
    gcoords = []
    for g in E.generators:
        c = coordinates(bvals, K.values(g))
        if c is None:
            return False  # basis does not span E
        gcoords.append(c)

    def ev(c, psi):
        return c[0] + sum((a * q(z) for a, z in zip(c[1:], psi)), ZERO)

    for psi in cert.points:
        if any(ev(c, psi) < 0 for c in gcoords):
            return False
    hv = [K.values(h) for h in cert.effects]
    if any(x < 0 for row in hv for x in row):
        return False
    for k in range(nv):
        if sum((row[k] for row in hv), ZERO) != 1:
            return False
    for g, c in zip(E.generators, gcoords):
        gk = K.values(g)
        psi_g = [ev(c, psi) for psi in cert.points]
        for k in range(nv):
            if sum((h[k] * p for h, p in zip(hv, psi_g)), ZERO) != gk[k]:
                return False
    return True


def prep_noncontextual(T: RestrictedTheory) -> Decision:
    """Preparation-noncontextual model for the generating measurements of T.

    Decided as E(K)-compatibility of ``T.M``; the joint measurement's parent
    effects are the hidden-variable response functions of the model.
    """
    if T.M is None:
        raise TheoryError("preparation noncontextuality needs a generating measurement set M")
    d = ek_compatible(T.M, T.K)
    if not d.answer:
        return Decision("prep-NC", False, farkas=d.farkas)
    c = d.certificate
    return Decision("prep-NC", True, certificate=PrepNCModelCert(c.outcomes, c.effects, c.responses))


def verify_prep_nc(T: RestrictedTheory, cert: PrepNCModelCert) -> bool:
    if T.M is None:
        return False
    return verify_joint_measurement(T.M, T.K, JointMeasurementCert(cert.outcomes, cert.effects, cert.responses))


def prep_nc_lp(T: RestrictedTheory) -> LPProblem:
    return ek_compatibility_lp(T.M, T.K)
