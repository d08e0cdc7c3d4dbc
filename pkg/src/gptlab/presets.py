"""Named theories and scenarios used throughout the demos and tests."""
from __future__ import annotations

import math
from fractions import Fraction

from .bipartite import MAX, MIN, BipartiteState
from .geometry import AffineFunctional, Polytope, dd_hrep_to_vrep
from .gpt import (EffectRestriction, Measurement, RestrictedTheory, StateSpace, binary_vertex_measurements,
                  effect_polytope, no_restriction, theory_from_measurements)
from .rational import ONE, ZERO
from .steering import SteeringScenario

DENOMINATOR = 1000
SPHERE_DENOMINATOR = 64  # small denominators keep the steering LPs fast


def circle_point(theta: float, max_den: int = DENOMINATOR) -> tuple[Fraction, Fraction]:
    """A rational point on the unit circle near angle ``theta`` (half-angle tangent)."""
    if abs(math.cos(theta / 2)) < 1e-12:
        return (Fraction(-1), Fraction(0))
    t = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def sphere_point(p, max_den: int = SPHERE_DENOMINATOR) -> tuple[Fraction, Fraction, Fraction]:
    """A rational point on the unit sphere near the unit vector ``p`` (stereographic chart)."""
    x, y, z = p
    if z > 1 - 1e-12:
        return (Fraction(0), Fraction(0), Fraction(1))
    u = Fraction(x / (1 - z)).limit_denominator(max_den)
    v = Fraction(y / (1 - z)).limit_denominator(max_den)
    s = u * u + v * v
    return (2 * u / (s + 1), 2 * v / (s + 1), (s - 1) / (s + 1))


def fibonacci_directions(n: int) -> list[tuple[float, float, float]]:
    golden = math.pi * (3 - math.sqrt(5))
    out = []
    for i in range(n):
        z = 1 - (2 * i + 1) / n
        r = math.sqrt(max(0.0, 1 - z * z))
        out.append((r * math.cos(golden * i), r * math.sin(golden * i), z))
    return out


def polygon_vertices(n: int) -> list[tuple[Fraction, Fraction]]:
    return [circle_point(2 * math.pi * k / n) for k in range(n)]


# --------------------------------------------------------------------------
# state spaces


def segment() -> StateSpace:
    return StateSpace.from_vertices([(ZERO,), (ONE,)], "segment")


def simplex(n: int) -> StateSpace:
    """The (n-1)-simplex as the standard basis points of R^(n-1) plus the origin."""
    if n < 1:
        raise ValueError("simplex needs at least one vertex")
    d = n - 1
    pts = [tuple(ZERO for _ in range(d))] + [tuple(ONE if i == j else ZERO for i in range(d)) for j in range(d)]
    return StateSpace.from_vertices(pts, f"simplex({n})")


def square() -> StateSpace:
    return StateSpace.from_vertices([(1, 1), (1, -1), (-1, 1), (-1, -1)], "square")


def diamond() -> StateSpace:
    return StateSpace.from_vertices([(1, 0), (0, 1), (-1, 0), (0, -1)], "diamond")


def polygon(n: int) -> StateSpace:
    return StateSpace.from_vertices(polygon_vertices(n), f"polygon({n})")


def tetrahedron() -> StateSpace:
    """Tetrahedron whose z = 0 section is the square (+-1, +-1)."""
    return StateSpace.from_vertices([(2, 0, 1), (-2, 0, 1), (0, 2, -1), (0, -2, -1)], "tetrahedron")


def bloch_inner(n: int) -> StateSpace:
    """conv of ``n`` rational points on the unit sphere."""
    return StateSpace.from_vertices([sphere_point(p) for p in fibonacci_directions(n)], f"bloch_inner({n})")


def bloch_outer(n: int) -> StateSpace:
    """Intersection of the ``n`` tangent halfspaces at the inner polytope's points."""
    facets = [(sphere_point(p), ONE) for p in fibonacci_directions(n)]
    return StateSpace(dd_hrep_to_vrep(Polytope.from_inequalities(facets)), f"bloch_outer({n})")


# --------------------------------------------------------------------------
# theories


def axis_measurement(dim: int, axis: int) -> Measurement:
    """{(1 + x_axis)/2, (1 - x_axis)/2}."""
    lin = tuple(Fraction(1, 2) if i == axis else ZERO for i in range(dim))
    f = AffineFunctional(lin, Fraction(1, 2))
    return Measurement((f, AffineFunctional.constant_fn(dim) - f), ("+", "-"))


def square_in_square() -> RestrictedTheory:
    """Diamond states with the effects of the enclosing square; S(E) is that square."""
    K = diamond()
    E = EffectRestriction(K, effect_polytope(square()).generators)
    return RestrictedTheory(K, E, (axis_measurement(2, 0), axis_measurement(2, 1)), "square_in_square")


def triangle_in_ngon(n: int = 12) -> RestrictedTheory:
    """A triangle inscribed in the n-gon, with the n-gon's effects restricted to it."""
    if n < 3:
        raise ValueError("need n >= 3")
    verts = polygon_vertices(n)
    K = StateSpace.from_vertices([verts[0], verts[n // 3], verts[(2 * n) // 3]], f"triangle_in_ngon({n})")
    E = EffectRestriction(K, effect_polytope(polygon(n)).generators)
    M = (axis_measurement(2, 0), axis_measurement(2, 1))
    return RestrictedTheory(K, E, M, f"triangle_in_ngon({n})")


def bloch_theory(K: StateSpace) -> RestrictedTheory:
    """A Bloch-ball polytope probed by the three axis measurements, sharpened as far as K allows."""
    r = max(abs(x) for v in K.vertices for x in v)
    M = []
    for i in range(3):
        lin = tuple(Fraction(1, 2) / r if j == i else ZERO for j in range(3))
        f = AffineFunctional(lin, Fraction(1, 2))
        M.append(Measurement((f, AffineFunctional.constant_fn(3) - f), ("+", "-")))
    return theory_from_measurements(K, M, K.label)


def unrestricted(K: StateSpace) -> RestrictedTheory:
    """No-restriction theory with its binary vertex measurements as M."""
    T = no_restriction(K)
    return RestrictedTheory(K, T.E, binary_vertex_measurements(T.E), K.label)


# --------------------------------------------------------------------------
# scenarios

PR_TENSOR = ((1, 0, 0), (0, 1, 1), (0, 1, -1))


def pr_box(K_A: StateSpace | None = None, K_B: StateSpace | None = None) -> BipartiteState:
    return BipartiteState(PR_TENSOR, K_A or square(), K_B or square())


def square_tetra_pr(ambient: str = MAX) -> SteeringScenario:
    """The PR tensor shared between squares (``max``) or between a square and a tetrahedron (``min``).

    In the tetrahedron version Bob's square is the z = 0 section, so the tensor
    gains a zero column. Alice measures the two face measurements.
    """
    M = (axis_measurement(2, 0), axis_measurement(2, 1))
    if ambient == MAX:
        return SteeringScenario(pr_box(), M, MAX)
    if ambient == MIN:
        T = tuple(row + (0,) for row in PR_TENSOR)
        return SteeringScenario(BipartiteState(T, square(), tetrahedron()), M, MIN)
    raise ValueError(f"ambient must be 'min' or 'max', got {ambient!r}")


def isotropic_tensor(gamma) -> tuple:
    g = Fraction(gamma)
    return ((1, 0, 0, 0), (0, g, 0, 0), (0, 0, -g, 0), (0, 0, 0, g))


def mub_measurements() -> tuple:
    return tuple(axis_measurement(3, i) for i in range(3))


def bloch_isotropic(gamma, bob: str = "outer", n: int = 100) -> SteeringScenario:
    """Isotropic-state analog on polytopes approximating the Bloch ball.

    Alice always holds the inscribed polytope so the three axis measurements are
    valid effects; Bob holds the inscribed (``inner``) or circumscribed
    (``outer``) polytope. No ambient tensor product is declared.
    """
    K_A = bloch_inner(n)
    if bob == "inner":
        K_B = K_A
    elif bob == "outer":
        K_B = bloch_outer(n)
    else:
        raise ValueError("bob must be 'inner' or 'outer'")
    return SteeringScenario(BipartiteState(isotropic_tensor(gamma), K_A, K_B), mub_measurements(), None)
