"""JSON forms of theories, scenarios, certificates and verdicts.

Every rational is a string ``"p/q"`` (or ``"p"``). Verdicts embed their input
so that ``verify`` can rebuild the decision problem from scratch:

* YES verdicts carry a certificate that is re-checked by the matching
  exact verifier, without any LP.
* NO verdicts carry Farkas multipliers together with the LP they refute; the
  LP is rebuilt from the input, compared with the embedded one, and the
  multipliers are checked against it.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any

from . import lp
from .bipartite import BipartiteState
from .compatibility import (JointMeasurementCert, e_compatibility_lp, ek_compatibility_lp, verify_joint_measurement)
from .contextuality import (PrepNCModelCert, SimplexEmbeddingCert, embedding_lp, prep_nc_lp, verify_embedding,
                            verify_prep_nc)
from .decision import Decision
from .geometry import AffineFunctional, Polytope
from .gpt import EffectRestriction, Measurement, RestrictedTheory, StateSpace, TheoryError
from .rational import fmt, fmt_vec, q, vec
from .steering import Assemblage, LHSModelCert, SteeringScenario, assemblage, lhs_lp, verify_lhs

# --------------------------------------------------------------------------
# building blocks


def polytope_to_json(p: Polytope) -> dict:
    out: dict[str, Any] = {"ambient_dim": p.ambient_dim}
    if p.vertices is not None:
        out["vertices"] = [fmt_vec(v) for v in p.vertices]
    else:
        out["facets"] = [{"normal": fmt_vec(a), "offset": fmt(b)} for a, b in p.facets]
    return out


def polytope_from_json(d: dict) -> Polytope:
    if "vertices" in d:
        return Polytope.from_points([vec(v) for v in d["vertices"]])
    return Polytope.from_inequalities([(vec(f["normal"]), q(f["offset"])) for f in d["facets"]])


def functional_to_json(f: AffineFunctional) -> dict:
    return {"linear": fmt_vec(f.linear), "constant": fmt(f.constant)}


def functional_from_json(d: dict) -> AffineFunctional:
    return AffineFunctional(vec(d["linear"]), q(d["constant"]))


def measurement_to_json(m: Measurement) -> dict:
    return {"effects": [functional_to_json(f) for f in m.effects], "labels": [str(x) for x in m.labels]}


def measurement_from_json(d: dict) -> Measurement:
    return Measurement(tuple(functional_from_json(f) for f in d["effects"]), tuple(d.get("labels") or ()))


def _measurements(ms) -> list | None:
    return None if ms is None else [measurement_to_json(m) for m in ms]


def _measurements_from(d) -> tuple | None:
    return None if d is None else tuple(measurement_from_json(m) for m in d)


# --------------------------------------------------------------------------
# theories and scenarios


def theory_to_json(T: RestrictedTheory) -> dict:
    return {
        "kind": "theory",
        "label": T.label,
        "K": polytope_to_json(T.K.body),
        "E": [functional_to_json(g) for g in T.E.generators],
        "M": _measurements(T.M),
    }


def theory_from_json(d: dict) -> RestrictedTheory:
    if d.get("kind") != "theory":
        raise TheoryError("expected a theory (kind = 'theory')")
    K = StateSpace(polytope_from_json(d["K"]), d.get("label", ""))
    E = EffectRestriction(K, tuple(functional_from_json(g) for g in d["E"]))
    return RestrictedTheory(K, E, _measurements_from(d.get("M")), d.get("label", ""))


def state_space_to_json(K: StateSpace) -> dict:
    return {"label": K.label, **polytope_to_json(K.body)}


def state_space_from_json(d: dict) -> StateSpace:
    return StateSpace(polytope_from_json(d), d.get("label", ""))


def scenario_to_json(sc: SteeringScenario, M_B=None) -> dict:
    amb = sc.ambient
    if isinstance(amb, Polytope):
        amb = polytope_to_json(amb)
    out = {
        "kind": "scenario",
        "K_A": state_space_to_json(sc.K_A),
        "K_B": state_space_to_json(sc.K_B),
        "ambient": amb,
        "tensor": [fmt_vec(r) for r in sc.rho.tensor],
        "M": _measurements(sc.M),
    }
    if M_B is not None:
        out["M_B"] = _measurements(M_B)
    return out


def scenario_from_json(d: dict) -> SteeringScenario:
    if d.get("kind") != "scenario":
        raise TheoryError("expected a scenario (kind = 'scenario')")
    K_A = state_space_from_json(d["K_A"])
    K_B = state_space_from_json(d["K_B"])
    amb = d.get("ambient")
    if isinstance(amb, dict):
        amb = polytope_from_json(amb)
    rho = BipartiteState(tuple(vec(r) for r in d["tensor"]), K_A, K_B)
    return SteeringScenario(rho, _measurements_from(d["M"]) or (), amb)


# --------------------------------------------------------------------------
# certificates


def _table(t) -> list:
    return [[fmt_vec(r) for r in x] for x in t]


def certificate_to_json(c) -> dict:
    if isinstance(c, JointMeasurementCert):
        return {"type": "joint-measurement", "outcomes": [list(o) for o in c.outcomes],
                "effects": [functional_to_json(h) for h in c.effects], "responses": _table(c.responses),
                "membership": None if c.membership is None else [fmt_vec(w) for w in c.membership]}
    if isinstance(c, PrepNCModelCert):
        return {"type": "prep-nc", "outcomes": [list(o) for o in c.outcomes],
                "effects": [functional_to_json(h) for h in c.effects], "responses": _table(c.responses)}
    if isinstance(c, SimplexEmbeddingCert):
        return {"type": "simplex-embedding", "effects": [functional_to_json(h) for h in c.effects],
                "points": [fmt_vec(p) for p in c.points], "basis": [functional_to_json(b) for b in c.basis]}
    if isinstance(c, LHSModelCert):
        return {"type": "lhs", "strategies": [list(s) for s in c.strategies], "weights": fmt_vec(c.weights),
                "states": [fmt_vec(s) for s in c.states], "responses": _table(c.responses),
                "decompositions": [fmt_vec(w) for w in c.decompositions]}
    raise TypeError(f"unknown certificate {type(c).__name__}")


def _untable(t) -> tuple:
    return tuple(tuple(vec(r) for r in x) for x in t)


def certificate_from_json(d: dict):
    kind = d["type"]
    fns = lambda key: tuple(functional_from_json(h) for h in d[key])  # noqa: E731
    if kind == "joint-measurement":
        mem = d.get("membership")
        return JointMeasurementCert(tuple(tuple(o) for o in d["outcomes"]), fns("effects"), _untable(d["responses"]),
                                    None if mem is None else tuple(vec(w) for w in mem))
    if kind == "prep-nc":
        return PrepNCModelCert(tuple(tuple(o) for o in d["outcomes"]), fns("effects"), _untable(d["responses"]))
    if kind == "simplex-embedding":
        return SimplexEmbeddingCert(fns("effects"), tuple(vec(p) for p in d["points"]), fns("basis"))
    if kind == "lhs":
        return LHSModelCert(tuple(tuple(s) for s in d["strategies"]), vec(d["weights"]),
                            tuple(vec(s) for s in d["states"]), _untable(d["responses"]),
                            tuple(vec(w) for w in d["decompositions"]))
    raise TheoryError(f"unknown certificate type {kind!r}")


# --------------------------------------------------------------------------
# verdicts

QUESTIONS = ("E-compat", "EK-compat", "embed", "prep-NC", "LHS")


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


def verdict_to_json(d: Decision, input_json: dict, seconds: float | None = None) -> dict:
    out: dict[str, Any] = {"question": d.question, "answer": d.answer, "digest": digest(input_json)}
    if d.answer:
        out["certificate"] = certificate_to_json(d.certificate)
    else:
        out["farkas"] = {"multipliers": fmt_vec(d.farkas.multipliers), "lp": lp.problem_to_json(d.farkas.problem)}
    if seconds is not None:
        out["time"] = round(seconds, 3)
    out["input"] = input_json
    return out


def _problem_for(question: str, inp: dict) -> lp.LPProblem:
    if question == "LHS":
        sc = scenario_from_json(inp)
        return lhs_lp(assemblage(sc), sc.K_B)
    T = theory_from_json(inp)
    if question == "E-compat":
        return e_compatibility_lp(T.measurements(), T.E)
    if question == "EK-compat":
        return ek_compatibility_lp(T.measurements(), T.K)
    if question == "embed":
        return embedding_lp(T)
    if question == "prep-NC":
        if T.M is None:
            raise TheoryError("prep-NC verdict without generating measurements")
        return prep_nc_lp(T)
    raise TheoryError(f"unknown question {question!r}")


def verify_verdict(v: dict) -> tuple[bool, str]:
    """Independent re-check of a verdict. Returns (ok, reason)."""
    if v.get("question") == "crosscheck":
        if "inapplicable" in v:
            return False, "no verdict to verify: " + v["inapplicable"]
        a, ra = verify_verdict(v["prep_nc"])
        b, rb = verify_verdict(v["lhs"])
        agree = v["prep_nc"]["answer"] == v["lhs"]["answer"]
        ok = a and b and agree == v.get("agree")
        return ok, "; ".join(x for x in (ra, rb) if x) or ("ok" if ok else "agreement flag is wrong")
    q_ = v.get("question")
    if q_ not in QUESTIONS:
        return False, f"unknown question {q_!r}"
    inp = v.get("input")
    if inp is None:
        return False, "verdict does not embed its input"
    if digest(inp) != v.get("digest"):
        return False, "input digest mismatch"
    if v["answer"]:
        if "certificate" not in v:
            return False, "YES verdict without certificate"
        cert = certificate_from_json(v["certificate"])
        if q_ == "LHS":
            sc = scenario_from_json(inp)
            ok = isinstance(cert, LHSModelCert) and verify_lhs(assemblage(sc), sc.K_B, cert)
        else:
            T = theory_from_json(inp)
            if q_ == "E-compat":
                ok = isinstance(cert, JointMeasurementCert) and verify_joint_measurement(
                    T.measurements(), T.K, cert, T.E)
            elif q_ == "EK-compat":
                ok = isinstance(cert, JointMeasurementCert) and verify_joint_measurement(T.measurements(), T.K, cert)
            elif q_ == "embed":
                ok = isinstance(cert, SimplexEmbeddingCert) and verify_embedding(T, cert)
            else:
                ok = isinstance(cert, PrepNCModelCert) and verify_prep_nc(T, cert)
        return ok, "certificate verified" if ok else "certificate rejected"
    if "farkas" not in v:
        return False, "NO verdict without Farkas witness"
    problem = _problem_for(q_, inp)
    if lp.problem_to_json(problem) != v["farkas"]["lp"]:
        return False, "embedded LP does not match the question"
    ok = lp.check_farkas(problem, vec(v["farkas"]["multipliers"]))
    return ok, "Farkas witness verified" if ok else "Farkas witness rejected"


def assemblage_to_json(a: Assemblage) -> list:
    return _table(a.sigma)
