"""E- and E(K)-compatibility of finite measurement sets.

Both questions use the product-outcome joint measurement: one parent effect
``h_lam`` per tuple ``lam = (a_1, ..., a_N)``, with marginals
``sum_{lam : lam_x = a} h_lam = f_{a|x}`` imposed at every vertex of K. For
E-compatibility each ``h_lam`` is a sub-convex combination of E's generators
(``0_K`` is always a generator); for E(K)-compatibility ``h_lam`` only has to
be a nonnegative affine function on K, parametrized by its vertex values.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .decision import Decision, decide
from .geometry import is_affinely_independent
from .gpt import EffectRestriction, Measurement, RestrictedTheory, StateSpace, TheoryError, dual_state_space
from .lp import EQ, LE, LPBuilder, LPProblem
from .rational import ONE, ZERO, q


@dataclass(frozen=True)
class JointMeasurementCert:
    outcomes: tuple  # lam tuples
    effects: tuple  # h_lam as AffineFunctional
    responses: tuple  # responses[x][i][a] = p(a | x, outcomes[i])
    membership: tuple | None = None  # weights over E.generators, one row per lam


def outcome_tuples(ms: Sequence[Measurement]) -> list[tuple]:
    return list(product(*(range(m.n_outcomes) for m in ms)))


def deterministic_responses(ms: Sequence[Measurement], lams: Sequence[tuple]) -> tuple:
    return tuple(
        tuple(tuple(ONE if lam[x] == a else ZERO for a in range(m.n_outcomes)) for lam in lams)
        for x, m in enumerate(ms)
    )


def _marginals(b: LPBuilder, K: StateSpace, ms, lams, h_value) -> None:
    """Marginal equalities; ``h_value(i, k)`` is the sparse expression of h_lam_i at vertex k."""
    for x, m in enumerate(ms):
        for a, f in enumerate(m.effects):
            fv = K.values(f)
            for k in range(len(K.vertices)):
                row: dict = {}
                for i, lam in enumerate(lams):
                    if lam[x] == a:
                        for j, c in h_value(i, k).items():
                            row[j] = row.get(j, ZERO) + c
                b.add(row, EQ, fv[k])


def e_compatibility_lp(ms: Sequence[Measurement], E: EffectRestriction) -> LPProblem:
    K = E.K
    lams = outcome_tuples(ms)
    gens = E.generators[1:]  # drop 0_K; the slack of sum <= 1 plays its role
    gvals = [K.values(g) for g in gens]
    b = LPBuilder()
    var = [[b.var(("c", i, g)) for g in range(len(gens))] for i in range(len(lams))]
    for i in range(len(lams)):
        b.add({v: 1 for v in var[i]}, LE, 1)
    _marginals(b, K, ms, lams,
               lambda i, k: {var[i][g]: gvals[g][k] for g in range(len(gens)) if gvals[g][k]})
    return b.build()


def e_compatible(ms: Sequence[Measurement], E: EffectRestriction) -> Decision:
    """Joint measurement with every parent effect inside E."""
    K = E.K
    for m in ms:
        m.validate(K)
        for f in m.effects:
            if not E.contains(f):
                raise TheoryError(f"effect {f} is not in E; compatibility question is ill-posed")
    lams = outcome_tuples(ms)
    gens = E.generators[1:]
    problem = e_compatibility_lp(ms, E)

    def cert(x):
        effects, weights = [], []
        ng = len(gens)
        for i in range(len(lams)):
            w = x[i * ng:(i + 1) * ng]
            vals = [sum((c * g(v) for c, g in zip(w, gens) if c), ZERO) for v in K.vertices]
            effects.append(K.functional(vals))
            weights.append((ONE - sum(w),) + tuple(w))  # first weight on 0_K
        return JointMeasurementCert(tuple(lams), tuple(effects),
                                    deterministic_responses(ms, lams), tuple(weights))

    return decide("E-compat", problem, cert)


def ek_compatibility_lp(ms: Sequence[Measurement], K: StateSpace) -> LPProblem:
    lams = outcome_tuples(ms)
    nv = len(K.vertices)
    deps = K.body.affine_dependencies()
    b = LPBuilder()
    var = [[b.var(("h", i, k)) for k in range(nv)] for i in range(len(lams))]
    for i in range(len(lams)):
        for d in deps:
            b.add({var[i][k]: d[k] for k in range(nv) if d[k]}, EQ, 0)
    _marginals(b, K, ms, lams, lambda i, k: {var[i][k]: ONE})
    if not ms:
        for k in range(nv):
            b.add({var[0][k]: 1}, EQ, 1)
    return b.build()


def ek_compatible(ms: Sequence[Measurement], K: StateSpace) -> Decision:
    """Joint measurement whose parent effects are merely nonnegative on K."""
    for m in ms:
        m.validate(K)
    lams = outcome_tuples(ms)
    nv = len(K.vertices)
    problem = ek_compatibility_lp(ms, K)

    def cert(x):
        effects = tuple(K.functional(x[i * nv:(i + 1) * nv]) for i in range(len(lams)))
        return JointMeasurementCert(tuple(lams), effects, deterministic_responses(ms, lams))

    return decide("EK-compat", problem, cert)


def verify_joint_measurement(ms: Sequence[Measurement], K: StateSpace, cert: JointMeasurementCert,
                             E: EffectRestriction | None = None) -> bool:
    """Re-check a joint-measurement certificate with plain exact arithmetic."""
    nv = len(K.vertices)
    if len(cert.effects) != len(cert.outcomes) or len(cert.responses) != len(ms):
        return False
    hv = [K.values(h) for h in cert.effects]
    if any(x < 0 for row in hv for x in row):
        return False
    for k in range(nv):
        if sum(row[k] for row in hv) != 1:
            return False
    for x, m in enumerate(ms):
        resp = cert.responses[x]
        if len(resp) != len(cert.outcomes):
            return False
        for p in resp:
            if len(p) != m.n_outcomes or any(q(v) < 0 for v in p) or sum(q(v) for v in p) != 1:
                return False
        for a, f in enumerate(m.effects):
            fv = K.values(f)
            for k in range(nv):
                if sum((q(resp[i][a]) * hv[i][k] for i in range(len(hv))), ZERO) != fv[k]:
                    return False
    if E is not None:
        if cert.membership is None or len(cert.membership) != len(cert.effects):
            return False
        gv = [K.values(g) for g in E.generators]
        for w, h in zip(cert.membership, hv):
            w = [q(c) for c in w]
            if len(w) != len(gv) or any(c < 0 for c in w) or sum(w) != 1:
                return False
            for k in range(nv):
                if sum((c * g[k] for c, g in zip(w, gv)), ZERO) != h[k]:
                    return False
    return True


def se_is_simplex(T: RestrictedTheory) -> bool:
    """Whether S(E) is a simplex, i.e. every measurement of the theory is E-compatible."""
    S = dual_state_space(T.E)
    return is_affinely_independent(S.vertices)
