"""Command-line front end.

Exit codes: 0 = YES, 1 = NO, 2 = error or question not applicable.
Verbosity follows the ``GPTLAB_LOG`` environment variable (a logging level name).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import presets, serialize
from .bipartite import chsh_value, minimal_tensor, maximal_tensor, tensor_products_equal
from .compatibility import e_compatible, ek_compatible
from .contextuality import prep_noncontextual, simplex_embeddable
from .geometry import dd_hrep_to_vrep
from .gpt import TheoryError
from .sampling import random_scenario
from .steering import TheoremInapplicable, assemblage, conditioned_theory, has_lhs_model, theorem9_crosscheck

log = logging.getLogger("gptlab")

YES, NO, ERROR = 0, 1, 2


def _theory_presets():
    return {
        "square_in_square": presets.square_in_square,
        "triangle_in_ngon": lambda n="12": presets.triangle_in_ngon(int(n)),
        "simplex": lambda n: presets.unrestricted(presets.simplex(int(n))),
        "segment": lambda: presets.unrestricted(presets.segment()),
        "square": lambda: presets.unrestricted(presets.square()),
        "polygon": lambda n: presets.unrestricted(presets.polygon(int(n))),
        "tetrahedron": lambda: presets.unrestricted(presets.tetrahedron()),
        "bloch_inner": lambda n="20": presets.bloch_theory(presets.bloch_inner(int(n))),
        "bloch_outer": lambda n="20": presets.bloch_theory(presets.bloch_outer(int(n))),
    }


def _scenario_presets():
    return {
        "square_tetra_pr": lambda ambient="max": presets.square_tetra_pr(ambient),
        "bloch_isotropic": lambda gamma, bob="outer", n="100": presets.bloch_isotropic(Fraction(gamma), bob, int(n)),
    }


PRESET_NAMES = ("square_in_square", "triangle_in_ngon(n)", "simplex(n)", "segment", "square", "polygon(n)",
                "tetrahedron", "bloch_inner(n)", "bloch_outer(n)",
                "square_tetra_pr(min|max)", "bloch_isotropic(gamma,inner|outer,n)")


def parse_preset(spec: str) -> tuple[str, list[str]]:
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\((.*)\))?\s*", spec)
    if not m:
        raise TheoryError(f"cannot parse preset {spec!r}")
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2) else []
    return m.group(1), [a for a in args if a]


def _call_preset(fn, name: str, args: list):
    try:
        return fn(*args)
    except TypeError:
        raise TheoryError(f"wrong number of arguments for preset {name!r}") from None


def preset_json(spec: str, ambient: str | None = None) -> dict:
    name, args = parse_preset(spec)
    if name in _theory_presets():
        return serialize.theory_to_json(_call_preset(_theory_presets()[name], name, args))
    if name in _scenario_presets():
        if name == "square_tetra_pr" and ambient:
            args = [ambient]
        sc = _call_preset(_scenario_presets()[name], name, args)
        M_B = sc.M if name == "square_tetra_pr" and sc.ambient == "max" else None
        return serialize.scenario_to_json(sc, M_B)
    raise TheoryError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


def load_input(args) -> dict:
    if getattr(args, "preset", None):
        return preset_json(args.preset, getattr(args, "ambient", None))
    if not getattr(args, "input", None):
        raise TheoryError("give an input file or --preset")
    if args.input == "-":
        return json.load(sys.stdin)
    with open(args.input) as fh:
        return json.load(fh)


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=1, sort_keys=False) + "\n")


def _decide(args, question: str) -> int:
    inp = load_input(args)
    t0 = time.perf_counter()
    if question == "LHS":
        sc = serialize.scenario_from_json(inp)
        d = has_lhs_model(assemblage(sc), sc.K_B)
    else:
        T = serialize.theory_from_json(inp)
        if question == "E-compat":
            d = e_compatible(T.measurements(), T.E)
        elif question == "EK-compat":
            d = ek_compatible(T.measurements(), T.K)
        elif question == "embed":
            d = simplex_embeddable(T)
        else:
            d = prep_noncontextual(T)
    seconds = time.perf_counter() - t0 if args.timing else None
    emit(serialize.verdict_to_json(d, inp, seconds))
    return YES if d.answer else NO


def cmd_preset(args) -> int:
    emit(preset_json(args.name, args.ambient))
    return YES


def cmd_verify(args) -> int:
    with open(args.verdict) as fh:
        v = json.load(fh)
    ok, reason = serialize.verify_verdict(v)
    print(("pass: " if ok else "fail: ") + reason)
    return YES if ok else NO


def _crosscheck_json(sc_json: dict) -> dict:
    sc = serialize.scenario_from_json(sc_json)
    rep = theorem9_crosscheck(sc)
    return {
        "question": "crosscheck",
        "agree": rep.agree,
        "prep_nc": serialize.verdict_to_json(rep.prep_nc, serialize.theory_to_json(conditioned_theory(sc, rep.K_rho))),
        "lhs": serialize.verdict_to_json(rep.lhs, sc_json),
    }


def _batch_one(seed: int) -> dict:
    sc = random_scenario(random.Random(seed))
    rep = theorem9_crosscheck(sc)
    return {"seed": seed, "prep_nc": rep.prep_nc.answer, "lhs": rep.lhs.answer, "agree": rep.agree}


def cmd_crosscheck(args) -> int:
    if args.random:
        seeds = [args.seed * 100003 + i for i in range(args.random)]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as ex:
                rows = list(ex.map(_batch_one, seeds))
        else:
            rows = [_batch_one(s) for s in seeds]
        summary = {"instances": len(rows), "agree": sum(r["agree"] for r in rows),
                   "unsteerable": sum(r["lhs"] for r in rows), "steerable": sum(not r["lhs"] for r in rows),
                   "runs": rows}
        emit(summary)
        return YES if summary["agree"] == len(rows) else ERROR
    inp = load_input(args)
    try:
        out = _crosscheck_json(inp)
    except TheoremInapplicable as e:
        emit({"question": "crosscheck", "inapplicable": str(e)})
        return ERROR
    emit(out)
    if not out["agree"]:
        return ERROR
    return YES if out["lhs"]["answer"] else NO


def cmd_tensor(args) -> int:
    def space(spec):
        if os.path.exists(spec):
            with open(spec) as fh:
                d = json.load(fh)
            return serialize.theory_from_json(d).K if d.get("kind") == "theory" else serialize.state_space_from_json(d)
        return serialize.theory_from_json(preset_json(spec)).K

    A, B = space(args.a), space(args.b)
    mn = minimal_tensor(A, B).vertex_set()
    mx = dd_hrep_to_vrep(maximal_tensor(A, B).body).vertices
    equal = tensor_products_equal(A, B)
    emit({"question": "tensor-equal", "answer": equal, "min_vertices": len(mn), "max_vertices": len(mx)})
    return YES if equal else NO


def cmd_chsh(args) -> int:
    inp = load_input(args)
    sc = serialize.scenario_from_json(inp)
    M_B = serialize._measurements_from(inp.get("M_B"))
    if not M_B or len(M_B) < 2 or len(sc.M) < 2:
        raise TheoryError("CHSH needs two measurements on each side (M and M_B)")
    for m in M_B:
        m.validate(sc.K_B)
    val = chsh_value(sc.rho, sc.M[0], sc.M[1], M_B[0], M_B[1])
    emit({"question": "chsh", "value": serialize.fmt(val)})
    return YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gptlab", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized batches")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for batches")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp, ambient=False):
        sp.add_argument("input", nargs="?", help="JSON input file, or - for stdin")
        sp.add_argument("--preset", help="use a named preset instead of a file")
        sp.add_argument("--timing", action="store_true", help="record wall-clock time in the verdict")
        if ambient:
            sp.add_argument("--ambient", choices=("min", "max"), help="ambient tensor product for square_tetra_pr")
        return sp

    sp = sub.add_parser("preset", help="print a named theory or scenario")
    sp.add_argument("name")
    sp.add_argument("--ambient", choices=("min", "max"))
    sp.set_defaults(func=cmd_preset)
    for name, question, help_ in (("compat", "E-compat", "E-compatibility of the theory's measurements"),
                                  ("ek-compat", "EK-compat", "E(K)-compatibility of the theory's measurements"),
                                  ("embed", "embed", "simplex embeddability"),
                                  ("prep-nc", "prep-NC", "preparation noncontextuality"),
                                  ("steer", "LHS", "local-hidden-state model (YES = unsteerable)")):
        sp = with_input(sub.add_parser(name, help=help_), ambient=(name == "steer"))
        sp.set_defaults(func=lambda a, _q=question: _decide(a, _q))
    sp = with_input(sub.add_parser("crosscheck", help="steering versus prep-noncontextuality"), ambient=True)
    sp.add_argument("--random", type=int, default=0, metavar="N", help="run N random scenarios instead")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_crosscheck)
    sp = sub.add_parser("verify", help="re-check a verdict file")
    sp.add_argument("verdict")
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("tensor", help="compare minimal and maximal tensor products")
    sp.add_argument("a", help="preset name or JSON file")
    sp.add_argument("b", help="preset name or JSON file")
    sp.set_defaults(func=cmd_tensor)
    sp = with_input(sub.add_parser("chsh", help="CHSH value of a scenario with measurements on both sides"),
                    ambient=True)
    sp.set_defaults(func=cmd_chsh)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("GPTLAB_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TheoryError, ValueError, KeyError, json.JSONDecodeError, OSError) as e:
        log.debug("failure", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
