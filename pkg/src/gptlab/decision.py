"""Verdicts carrying either a positive certificate or a Farkas witness."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import lp


@dataclass(frozen=True)
class FarkasWitness:
    """Multipliers proving that ``problem`` has no feasible point."""

    problem: lp.LPProblem
    multipliers: tuple

    def verify(self) -> bool:
        return lp.check_farkas(self.problem, self.multipliers)


@dataclass(frozen=True)
class Decision:
    question: str
    answer: bool
    certificate: Any = None
    farkas: FarkasWitness | None = None

    def __bool__(self) -> bool:
        return self.answer


def decide(question: str, problem: lp.LPProblem, make_certificate) -> Decision:
    """Solve a feasibility LP; YES carries ``make_certificate(point)``, NO the Farkas witness."""
    res = lp.solve(problem)
    if res.feasible:
        return Decision(question, True, certificate=make_certificate(res.point))
    return Decision(question, False, farkas=FarkasWitness(problem, res.farkas))
