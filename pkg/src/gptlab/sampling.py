"""Seeded random instances: state spaces, theories, measurements, bipartite states, scenarios."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from . import presets
from .bipartite import BipartiteState, maximal_tensor, minimal_tensor, unflatten
from .geometry import dd_hrep_to_vrep
from .gpt import (EffectRestriction, Measurement, RestrictedTheory, StateSpace, binary_vertex_measurements,
                  effect_polytope)
from .steering import SteeringScenario, is_full_dimensional

ZOO = {
    "segment": presets.segment,
    "triangle": lambda: presets.simplex(3),
    "square": presets.square,
    "pentagon": lambda: presets.polygon(5),
    "tetrahedron": lambda: presets.simplex(4),
    "pyramid": lambda: StateSpace.from_vertices([(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0), (0, 0, 1)],
                                                "pyramid"),
    "prism": lambda: StateSpace.from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)],
                                              "prism"),
    "octahedron": lambda: StateSpace.from_vertices([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1),
                                                    (0, 0, -1)], "octahedron"),
}


@lru_cache(maxsize=None)
def zoo(name: str) -> StateSpace:
    return ZOO[name]()


def random_fraction(rng: random.Random, den: int = 12) -> Fraction:
    return Fraction(rng.randint(0, den), den)


def random_weights(rng: random.Random, k: int, den: int = 12) -> list[Fraction]:
    raw = [rng.randint(0, den) for _ in range(k)]
    if not any(raw):
        raw[rng.randrange(k)] = 1
    s = sum(raw)
    return [Fraction(r, s) for r in raw]


def random_polytope(rng: random.Random, dim: int, npts: int | None = None, box: int = 3) -> StateSpace:
    """conv of random integer points, retried until full-dimensional."""
    npts = npts or rng.randint(dim + 1, dim + 4)
    while True:
        pts = [tuple(rng.randint(-box, box) for _ in range(dim)) for _ in range(npts)]
        K = StateSpace.from_vertices(pts, f"random{dim}d")
        if K.dim == dim:
            return K


def random_state_space(rng: random.Random, max_dim: int = 3) -> StateSpace:
    if rng.random() < 0.6:
        names = [n for n in ZOO if zoo(n).dim <= max_dim]
        return zoo(rng.choice(names))
    return random_polytope(rng, rng.randint(1, max_dim))


def random_binary_measurement(rng: random.Random, E: EffectRestriction, smear: bool = True) -> Measurement:
    """A binary vertex measurement of E, optionally mixed with the coin flip {1/2, 1/2}."""
    choices = binary_vertex_measurements(E)
    if not choices:
        return Measurement((E.K.unit(),))
    m = rng.choice(choices)
    if not smear or rng.random() < 0.5:
        return m
    t = random_fraction(rng, 6)
    half = E.K.unit() * Fraction(1, 2)
    f = m.effects[0] * t + half * (1 - t)
    return Measurement.binary(f)


def random_measurement(rng: random.Random, K: StateSpace, outcomes: int = 2, E: EffectRestriction | None = None
                       ) -> Measurement:
    E = E or effect_polytope(K)
    m = random_binary_measurement(rng, E)
    if outcomes == 2 or m.n_outcomes == 1:
        return m
    t = Fraction(rng.randint(1, 5), 6)
    f, g = m.effects
    return Measurement((f * t, f * (1 - t), g))


def _mix(weights, points) -> tuple:
    return tuple(sum((w * v[j] for w, v in zip(weights, points)), Fraction(0)) for j in range(len(points[0])))


def random_restricted_theory(rng: random.Random, max_dim: int = 2) -> RestrictedTheory:
    """States K inside a larger polytope P, with E = E(P) restricted to K, or E(K) thinned out."""
    P = random_state_space(rng, max_dim)
    if rng.random() < 0.5 and len(P.vertices) > P.dim + 1:
        # K: a random sub-polytope of P; it keeps P's effects
        while True:
            pts = [_mix(random_weights(rng, len(P.vertices)), P.vertices) for _ in range(rng.randint(P.dim + 1, 5))]
            K = StateSpace.from_vertices(pts, f"sub({P.label})")
            if K.dim == P.dim:
                break
        E = EffectRestriction(K, effect_polytope(P).generators)
    else:
        K = P
        gens = effect_polytope(K).generators
        keep = [g for g in gens[2:] if rng.random() < 0.6]
        one = K.unit()
        keep += [one - g for g in keep]
        E = EffectRestriction(K, tuple(keep))
    ms = tuple(random_binary_measurement(rng, E, smear=False) for _ in range(2))
    return RestrictedTheory(K, E, ms, f"random({K.label})")


@lru_cache(maxsize=None)
def _max_vertices(a: str, b: str) -> tuple:
    return dd_hrep_to_vrep(maximal_tensor(zoo(a), zoo(b)).body).vertices


def random_bipartite_state(rng: random.Random, a: str, b: str, entangled: float | None = None) -> BipartiteState:
    """Mix of a few vertices of the maximal tensor product of two zoo spaces."""
    K_A, K_B = zoo(a), zoo(b)
    shape = (K_A.ambient_dim + 1, K_B.ambient_dim + 1)
    mx = list(_max_vertices(a, b))
    mn = set(minimal_tensor(K_A, K_B).body.vertices)
    ent = [v for v in mx if v not in mn]
    sep = [v for v in mx if v in mn]
    k = rng.randint(2, min(5, len(sep)))
    picks = rng.sample(sep, k)
    t = Fraction(0)
    if ent:
        t = Fraction(entangled) if entangled is not None else random_fraction(rng, 8)
        picks_ent = rng.choice(ent)
    w = random_weights(rng, k)
    flat = [sum((wi * v[j] for wi, v in zip(w, picks)), Fraction(0)) * (1 - t) for j in range(len(mx[0]))]
    if t:
        flat = [x + t * y for x, y in zip(flat, picks_ent)]
    return BipartiteState(unflatten(flat, shape), K_A, K_B)


def random_scenario(rng: random.Random, full_dimensional: bool = True, max_tries: int = 200) -> SteeringScenario:
    """Random scenario over zoo factors of dimension <= 3 with 2-3 binary/ternary measurements."""
    names = list(ZOO)
    for _ in range(max_tries):
        a, b = rng.choice(names), rng.choice(names)
        if zoo(a).dim < zoo(b).dim:
            continue  # rank of the tensor is at most dim(A) + 1
        rho = random_bipartite_state(rng, a, b)
        E_A = effect_polytope(rho.K_A)
        M = tuple(random_measurement(rng, rho.K_A, rng.choice((2, 2, 3)), E_A) for _ in range(rng.randint(2, 3)))
        sc = SteeringScenario(rho, M, "max")
        if not full_dimensional or is_full_dimensional(sc):
            return sc
    raise RuntimeError("no full-dimensional scenario found")
