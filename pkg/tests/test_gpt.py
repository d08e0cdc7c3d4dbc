import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptlab.geometry import AffineFunctional
from gptlab.gpt import (EffectRestriction, Measurement, PostProcessing, RestrictedTheory, StateSpace, TheoryError,
                        apply_postprocessing, dual_state_space, effect_polytope, evaluation_channel,
                        generate_effect_algebra, is_tomographically_complete, no_restriction,
                        theory_from_measurements)
from gptlab.presets import axis_measurement, diamond, segment, simplex, square, square_in_square, tetrahedron
from gptlab.sampling import random_measurement, random_restricted_theory, random_weights, zoo
from oracles import effect_vertices_full_dim, simplex_effect_lattice

F = Fraction


def _value_set(E):
    return {E.K.values(g) for g in E.generators}


def _same_convex_set(E1, E2):
    return all(E1.contains(g) for g in E2.generators) and all(E2.contains(g) for g in E1.generators)


def test_segment_effects():
    E = effect_polytope(segment())
    assert _value_set(E) == {(0, 0), (1, 1), (1, 0), (0, 1)}


def test_triangle_effects_are_subset_indicators():
    K = simplex(3)
    assert _value_set(effect_polytope(K)) == simplex_effect_lattice(3)


@pytest.mark.parametrize("name", ["square", "triangle", "pentagon", "tetrahedron", "octahedron"])
def test_effect_vertices_match_brute_force(name):
    K = zoo(name)
    assert _value_set(effect_polytope(K)) == effect_vertices_full_dim(K.vertices)


def test_square_has_six_extreme_effects():
    # 0, 1 and the four half-plane effects (1 +- x)/2, (1 +- y)/2
    E = effect_polytope(square())
    assert len(E.generators) == 6
    assert _value_set(E) == effect_vertices_full_dim(square().vertices)


def test_generators_out_of_range_rejected():
    with pytest.raises(TheoryError):
        EffectRestriction(square(), (AffineFunctional((1, 0), 0),))


@pytest.mark.parametrize("K", [segment(), simplex(3), square(), tetrahedron()], ids=lambda K: K.label or "K")
def test_dual_of_full_effect_set_is_isomorphic_to_k(K):
    T = no_restriction(K)
    S = dual_state_space(T.E)
    assert S.body.dim == K.dim and len(S.vertices) == len(K.vertices)
    images = {evaluation_channel(T, v, S) for v in K.vertices}
    assert images == set(S.vertices)


def test_square_in_square_dual_is_outer_square():
    T = square_in_square()
    S = dual_state_space(T.E)
    assert len(S.vertices) == 4 and S.body.dim == 2
    assert not S.is_simplex()


def test_inner_vertex_lands_on_edge_midpoint():
    T = square_in_square()
    S = dual_state_space(T.E)
    V = S.vertices
    for v in T.K.vertices:
        xi = evaluation_channel(T, v, S)
        assert xi not in V
        mids = {tuple((a + b) / 2 for a, b in zip(V[i], V[j])) for i in range(4) for j in range(i + 1, 4)}
        edges = [f for f in S.body.facets if any(f[0]) and sum(a * x for a, x in zip(f[0], xi)) == f[1]]
        assert xi in mids and len(edges) == 1


def test_trivial_effect_set_gives_point():
    S = dual_state_space(EffectRestriction(square(), ()))
    assert len(S.vertices) == 1 and len(S.basis) == 1
    T = RestrictedTheory(square(), EffectRestriction(square(), ()))
    assert {evaluation_channel(T, v, S) for v in square().vertices} == {()}


def test_evaluation_rejects_outside_point():
    with pytest.raises(TheoryError):
        evaluation_channel(no_restriction(square()), (2, 0))


def test_effect_algebra_examples():
    K = square()
    one = K.unit()
    assert len(generate_effect_algebra(K, [Measurement((one,))]).generators) == 2
    m = axis_measurement(2, 0)
    E = generate_effect_algebra(K, [m])
    assert _value_set(E) == {K.values(f) for f in (K.zero(), one) + m.effects}
    E2 = generate_effect_algebra(diamond(), [axis_measurement(2, 0), axis_measurement(2, 1)])
    assert len(E2.generators) == 6
    assert len(dual_state_space(E2).vertices) == 4


def test_postprocessing_examples():
    m = axis_measurement(2, 0)
    assert apply_postprocessing(m, PostProcessing(((1, 0), (0, 1)))).effects == m.effects
    coarse = apply_postprocessing(m, PostProcessing(((1,), (1,))))
    assert square().values(coarse.effects[0]) == (1, 1, 1, 1)
    flipped = apply_postprocessing(m, PostProcessing(((0, 1), (1, 0))))
    assert flipped.effects == m.effects[::-1]
    with pytest.raises(TheoryError):
        PostProcessing(((F(1, 2), F(1, 3)),))
    with pytest.raises(TheoryError):
        apply_postprocessing(m, PostProcessing(((1,),)))


def test_tomographic_completeness():
    assert is_tomographically_complete(no_restriction(square()))
    assert not is_tomographically_complete(RestrictedTheory(square(), EffectRestriction(square(), ())))
    assert is_tomographically_complete(square_in_square())


def test_measurement_must_sum_to_unit():
    with pytest.raises(TheoryError):
        Measurement((AffineFunctional((F(1, 2), 0), F(1, 2)),)).validate(square())


def test_generating_measurement_outside_e_rejected():
    K = square()
    E = generate_effect_algebra(K, [axis_measurement(2, 0)])
    with pytest.raises(TheoryError):
        RestrictedTheory(K, E, (axis_measurement(2, 1),))


def _channel_reproduces_statistics(T, rng):
    S = dual_state_space(T.E)
    for _ in range(3):
        w = random_weights(rng, len(T.K.vertices))
        rho = tuple(sum(wi * v[k] for wi, v in zip(w, T.K.vertices)) for k in range(T.K.ambient_dim))
        xi = evaluation_channel(T, rho, S)
        assert S.body.contains(xi)
        for m in T.measurements():
            assert tuple(S.evaluate(xi, f) for f in m.effects) == m.probabilities(rho)
        for g in T.E.generators:
            assert S.evaluate(xi, g) == g(rho)


def test_evaluation_channel_reproduces_statistics_on_50_theories():
    rng = random.Random(7)
    for _ in range(50):
        _channel_reproduces_statistics(random_restricted_theory(rng), rng)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_evaluation_channel_property(seed):
    rng = random.Random(seed)
    _channel_reproduces_statistics(random_restricted_theory(rng), rng)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_effect_algebra_closed_under_postprocessing(seed):
    rng = random.Random(seed)
    K = zoo(rng.choice(["square", "triangle", "pentagon"]))
    ms = [random_measurement(rng, K, rng.choice([2, 3])) for _ in range(2)]
    m = ms[0]
    k = rng.randint(1, 3)
    nu = PostProcessing(tuple(tuple(random_weights(rng, k)) for _ in range(m.n_outcomes)))
    E = generate_effect_algebra(K, ms)
    E2 = generate_effect_algebra(K, ms + [apply_postprocessing(m, nu)])
    assert _same_convex_set(E, E2)


def test_theory_from_measurements_keeps_generating_set():
    K = diamond()
    ms = (axis_measurement(2, 0), axis_measurement(2, 1))
    T = theory_from_measurements(K, ms)
    assert T.measurements() == ms


def test_state_space_rejects_empty():
    with pytest.raises(Exception):
        StateSpace.from_vertices([])
