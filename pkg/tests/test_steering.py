import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptlab.bipartite import BipartiteState, minimal_tensor, normalized, partial_apply_effect, unflatten
from gptlab.geometry import Polytope
from gptlab.gpt import Measurement, TheoryError, effect_polytope
from gptlab.presets import (axis_measurement, bloch_inner, bloch_isotropic, segment, square, square_tetra_pr)
from gptlab.sampling import random_measurement, random_scenario, random_weights, zoo
from gptlab.steering import (Assemblage, NotReducible, Reduction, SteeringScenario, TheoremInapplicable, assemblage,
                             bisect_threshold, conditioned_state_space, has_lhs_model, is_full_dimensional,
                             restrict_to_J, theorem9_crosscheck, verify_lhs, verify_retraction)

F = Fraction
X, Y = axis_measurement(2, 0), axis_measurement(2, 1)


def _product_scenario(a=(F(1, 2), F(-1, 4)), b=(F(1, 3), 0)):
    rho = BipartiteState.product(square(), a, square(), b)
    return SteeringScenario(rho, (X, Y), "min"), a, b


def test_product_assemblage_factorizes():
    sc, a, b = _product_scenario()
    asm = assemblage(sc)
    for x, m in enumerate(sc.M):
        for i, f in enumerate(m.effects):
            assert asm.sigma[x][i] == tuple(f(a) * c for c in (1,) + b)
    assert asm.reduced() == (1,) + b


def test_pr_box_assemblage_is_deterministic():
    asm = assemblage(square_tetra_pr("max"))
    for row in asm.sigma:
        for s in row:
            assert s[0] == F(1, 2)
            assert normalized(s) in set(square().vertices)


def test_white_noise_assemblage():
    sc = bloch_isotropic(0, "inner", 12)
    for row in assemblage(sc).sigma:
        for s in row:
            assert s == (F(1, 2), 0, 0, 0)


def test_signalling_assemblage_rejected():
    with pytest.raises(TheoryError):
        Assemblage(((((F(1, 2), 1, 0)), (F(1, 2), 0, 0)), ((F(1, 2), 0, 0), (F(1, 2), 0, 0))))
    with pytest.raises(TheoryError):
        Assemblage((((F(1, 2), 0, 0),),))


def test_lhs_examples():
    sc, _, _ = _product_scenario()
    d = has_lhs_model(assemblage(sc), sc.K_B)
    assert d.answer and verify_lhs(assemblage(sc), sc.K_B, d.certificate)
    pr = square_tetra_pr("max")
    d = has_lhs_model(assemblage(pr), pr.K_B)
    assert not d.answer and d.farkas.verify()


def test_same_tensor_unsteerable_in_tetrahedron():
    sc = square_tetra_pr("min")
    assert sc.check_membership()
    d = has_lhs_model(assemblage(sc), sc.K_B)
    assert d.answer and verify_lhs(assemblage(sc), sc.K_B, d.certificate)


def test_tampered_lhs_certificate_rejected():
    sc = square_tetra_pr("min")
    asm = assemblage(sc)
    c = has_lhs_model(asm, sc.K_B).certificate
    w = list(c.weights)
    w[0], w[-1] = w[-1], w[0] + F(1, 7)
    assert not verify_lhs(asm, sc.K_B, replace(c, weights=tuple(w)))
    states = list(c.states)
    states[0] = tuple(3 * x for x in states[0])
    assert not verify_lhs(asm, sc.K_B, replace(c, states=tuple(states)))


def _separable_scenario(rng, a, b):
    K_A, K_B = zoo(a), zoo(b)
    verts = minimal_tensor(K_A, K_B).body.vertices
    w = random_weights(rng, len(verts))
    flat = [sum((wi * v[j] for wi, v in zip(w, verts)), F(0)) for j in range(len(verts[0]))]
    rho = BipartiteState(unflatten(flat, (K_A.ambient_dim + 1, K_B.ambient_dim + 1)), K_A, K_B)
    M = tuple(random_measurement(rng, K_A, rng.choice([2, 3])) for _ in range(rng.randint(2, 3)))
    return SteeringScenario(rho, M, "min")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_separable_states_are_unsteerable(seed):
    rng = random.Random(seed)
    sc = _separable_scenario(rng, rng.choice(["square", "pentagon", "triangle"]), rng.choice(["square", "segment"]))
    assert sc.check_membership()
    asm = assemblage(sc)
    d = has_lhs_model(asm, sc.K_B)
    assert d.answer and verify_lhs(asm, sc.K_B, d.certificate)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_no_signalling_and_full_dimensionality_modes(seed):
    sc = random_scenario(random.Random(seed), full_dimensional=False)
    asm = assemblage(sc)
    sums = {tuple(sum(c) for c in zip(*row)) for row in asm.sigma}
    assert len(sums) == 1
    if is_full_dimensional(sc, "sufficient_lemma8"):
        assert is_full_dimensional(sc, "exact_def7")


def test_product_state_conditions_to_a_point():
    sc, a, _ = _product_scenario()
    K_rho = conditioned_state_space(sc)
    assert K_rho.vertices == (a,)
    assert not is_full_dimensional(sc) and not is_full_dimensional(sc, "sufficient_lemma8")
    with pytest.raises(TheoremInapplicable):
        theorem9_crosscheck(sc)


def test_reduced_state_lies_in_conditioned_space():
    for sc in (square_tetra_pr("max"), square_tetra_pr("min"), random_scenario(random.Random(4))):
        K_rho = conditioned_state_space(sc)
        reduced = normalized(partial_apply_effect(sc.rho, sc.K_B.unit(), "B"))
        assert K_rho.contains(reduced)


def test_interior_effects_condition_into_k_rho():
    rng = random.Random(5)
    for sc in (square_tetra_pr("max"), random_scenario(rng), random_scenario(rng)):
        K_rho = conditioned_state_space(sc)
        gens = effect_polytope(sc.K_B).generators
        checked = 0
        while checked < 50:
            w = random_weights(rng, len(gens))
            g = gens[0] * 0
            for wi, h in zip(w, gens):
                g = g + h * wi
            v = partial_apply_effect(sc.rho, g, "B")
            if v[0] > 0:
                assert K_rho.contains(normalized(v))
                checked += 1


def test_bloch_conditioned_space_and_full_dimensionality():
    sc = bloch_isotropic(1, "inner", 12)
    K_rho = conditioned_state_space(sc)
    assert K_rho.dim == 3 and K_rho.contains((0, 0, 0))
    for g in (F(1, 10), F(1, 2), 1):
        s = bloch_isotropic(g, "inner", 12)
        assert is_full_dimensional(s) and is_full_dimensional(s, "sufficient_lemma8")
    assert not is_full_dimensional(bloch_isotropic(0, "inner", 12))


def test_unsteerability_is_monotone_in_visibility():
    verdicts = []
    for k in range(11):
        sc = bloch_isotropic(F(k, 10), "inner", 12)
        verdicts.append(has_lhs_model(assemblage(sc), sc.K_B).answer)
    first_no = verdicts.index(False)
    assert all(verdicts[:first_no]) and not any(verdicts[first_no:])


def test_restrict_product_state_to_point():
    sc, _, b = _product_scenario()
    red = restrict_to_J(sc)
    assert isinstance(red, Reduction)
    assert red.scenario.K_B.vertices == (b,)
    assert verify_retraction(sc.K_B, red.J, red.images)


def test_tetrahedron_not_reducible():
    sc = square_tetra_pr("min")
    assert not is_full_dimensional(sc)
    red = restrict_to_J(sc)
    assert isinstance(red, NotReducible) and red.farkas.verify()
    with pytest.raises(TheoremInapplicable):
        theorem9_crosscheck(sc)


def test_square_reduces_onto_diagonal():
    # Alice's bit is perfectly correlated with Bob's position on the diagonal y = x
    T = ((1, 0, 0), (F(1, 2), F(1, 2), F(1, 2)))
    rho = BipartiteState(T, segment(), square())
    sc = SteeringScenario(rho, (axis_measurement(1, 0),), "min")
    assert sc.check_membership()
    red = restrict_to_J(sc)
    assert isinstance(red, Reduction)
    assert set(red.scenario.K_B.vertices) == {(1, 1), (-1, -1)}
    assert verify_retraction(sc.K_B, red.J, red.images)
    bad = list(red.images)
    bad[0] = (1, 1, -1)
    assert not verify_retraction(sc.K_B, red.J, bad)


def test_pr_box_crosscheck_agrees_on_steerable():
    sc = square_tetra_pr("max")
    rep = theorem9_crosscheck(sc)
    assert rep.agree and not rep.lhs.answer and not rep.prep_nc.answer
    assert rep.lhs.farkas.verify() and rep.prep_nc.farkas.verify()


def test_crosscheck_agrees_on_random_scenarios():
    rng = random.Random(99)
    for _ in range(10):
        rep = theorem9_crosscheck(random_scenario(rng))
        assert rep.agree


def test_scenario_validation():
    with pytest.raises(TheoryError):
        SteeringScenario(BipartiteState.product(square(), (0, 0), square(), (0, 0)), (axis_measurement(3, 0),))
    half = Measurement((X.effects[0] * F(1, 2),))
    with pytest.raises(TheoryError):
        SteeringScenario(BipartiteState.product(square(), (0, 0), square(), (0, 0)), (half,))


def test_explicit_ambient_polytope():
    sc = square_tetra_pr("max")
    mn = minimal_tensor(sc.K_A, sc.K_B).body.vertices
    body = Polytope.from_points(list(mn) + [sc.rho.flat()])
    assert replace(sc, ambient=body).check_membership()
    assert not replace(sc, ambient=Polytope.from_points(mn)).check_membership()


def test_bisection_brackets_known_threshold():
    lo, hi = bisect_threshold(lambda g: g <= F(1, 3), 0, 1, F(1, 64))
    assert lo <= F(1, 3) < hi and hi - lo <= F(1, 64)
    assert bisect_threshold(lambda g: True, 0, 1, F(1, 4)) == (1, 1)
    with pytest.raises(ValueError):
        bisect_threshold(lambda g: False, 0, 1, F(1, 4))


def test_bloch_inner_polytope_is_inscribed():
    for v in bloch_inner(12).vertices:
        assert sum(x * x for x in v) == 1
