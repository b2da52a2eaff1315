"""Batch command-line surface.

Every subcommand writes a single JSON document to stdout.  Exit codes:
0 definitive positive (valid / provable / holds), 1 definitive negative
with a witness in the output, 2 usage or parse error (reported on
stderr), 3 inconclusive within the configured budgets.  Identical
invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product

from .bridge import closed_set_algebra, prime_filter_frame, validity_harness
from .catalog import standard_algebras
from .formula import ParseError, decode, encode, parse, render, variables
from .heyting import (Interpretation, algebra_from_json, algebra_to_json,
                      interpret, is_filter, make_interpretation,
                      prime_filters, super_prime_filter)
from .kripke import (_models, find_countermodel, forces, model_from_json,
                     model_to_json)
from .lindenbaum import build_quotient, provably_leq
from .proof import ProofError, check, proof_from_json
from .theories import (Budget, Fails, Holds, Oracle, OracleInconclusive,
                       budget_from_env, canonical_universe, make_pair,
                       saturation_trace)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


class UsageError(Exception):
    pass


def _parse_formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse formula {text!r}: {exc}") from exc


def _parse_gamma(text):
    if not text:
        return []
    return [_parse_formula(part.strip()) for part in text.split(",")
            if part.strip()]


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _load_model(path: str):
    try:
        return model_from_json(_load_json(path))
    except ValueError as exc:
        raise UsageError(f"bad model in {path}: {exc}") from exc


def _load_algebra(path: str):
    try:
        return algebra_from_json(_load_json(path))
    except ValueError as exc:
        raise UsageError(f"bad algebra in {path}: {exc}") from exc


def _parse_assignment(text):
    out = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key.startswith("p") or not key[1:].isdigit() \
                or not value.isdigit():
            raise UsageError(f"bad assignment entry {part!r}; want p<i>=<elem>")
        out[int(key[1:])] = int(value)
    return out


def _oracle(args) -> Oracle:
    budget = budget_from_env()
    if getattr(args, "max_worlds", None) is not None:
        budget = Budget(max_worlds=args.max_worlds,
                        max_depth=budget.max_depth,
                        max_subset_pairs=budget.max_subset_pairs)
    return Oracle(budget)


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (exit code, payload).
# ---------------------------------------------------------------------------


def _cmd_parse(args):
    phi = _parse_formula(args.formula)
    return EXIT_POSITIVE, {"formula": render(phi)}


def _cmd_encode(args):
    phi = _parse_formula(args.formula)
    return EXIT_POSITIVE, {"code": encode(phi)}


def _cmd_decode(args):
    phi = decode(args.code)
    if phi is None:
        return EXIT_NEGATIVE, {"code": args.code, "formula": None}
    return EXIT_POSITIVE, {"code": args.code, "formula": render(phi)}


def _cmd_check_proof(args):
    proof_obj = _load_json(args.proof)
    try:
        proof = proof_from_json(proof_obj)
    except ValueError as exc:
        raise UsageError(f"bad proof JSON: {exc}") from exc
    gamma = _parse_gamma(args.gamma)
    try:
        conclusion = check(gamma, proof)
    except ProofError as exc:
        return EXIT_NEGATIVE, {
            "checked": False,
            "error": {"message": str(exc), "path": list(exc.path)},
        }
    return EXIT_POSITIVE, {
        "checked": True,
        "conclusion": render(conclusion),
        "premises": sorted(render(g) for g in gamma),
    }


def _cmd_eval(args):
    model = _load_model(args.model)
    phi = _parse_formula(args.formula)
    value = forces(model, args.world, phi)
    code = EXIT_POSITIVE if value else EXIT_NEGATIVE
    return code, {"world": args.world, "value": value}


def _cmd_valid(args):
    model = _load_model(args.model)
    phi = _parse_formula(args.formula)
    for world in range(model.worlds):
        if not forces(model, world, phi):
            return EXIT_NEGATIVE, {"valid": False, "world": world}
    return EXIT_POSITIVE, {"valid": True, "world": None}


def _cmd_countermodel(args):
    gamma = _parse_gamma(args.gamma)
    phi = _parse_formula(args.formula)
    found = find_countermodel(gamma, phi, args.max_worlds)
    if found is None:
        return EXIT_UNKNOWN, {"model": None, "world": None,
                              "max_worlds": args.max_worlds}
    model, world = found
    return EXIT_NEGATIVE, {"model": model_to_json(model), "world": world,
                           "max_worlds": args.max_worlds}


def _cmd_alg_eval(args):
    alg = _load_algebra(args.algebra)
    phi = _parse_formula(args.formula)
    try:
        interp = make_interpretation(alg, _parse_assignment(args.assign))
        element = interpret(interp, phi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    is_top = element == alg.top
    return (EXIT_POSITIVE if is_top else EXIT_NEGATIVE,
            {"element": element, "top": is_top})


def _cmd_alg_valid(args):
    alg = _load_algebra(args.algebra)
    phi = _parse_formula(args.formula)
    indices = tuple(sorted(v.index for v in variables(phi)))
    for choice in product(range(alg.size), repeat=len(indices)):
        interp = Interpretation(alg, tuple(zip(indices, choice)))
        if interpret(interp, phi) != alg.top:
            witness = {f"p{v}": e for v, e in interp.assignment}
            return EXIT_NEGATIVE, {"valid": False, "assignment": witness}
    return EXIT_POSITIVE, {"valid": True, "assignment": None}


def _cmd_filters(args):
    alg = _load_algebra(args.algebra)
    out = []
    for mask in range(1 << alg.size):
        cand = frozenset(i for i in range(alg.size) if mask >> i & 1)
        if is_filter(alg, cand):
            out.append(sorted(cand))
    out.sort(key=lambda s: (len(s), s))
    return EXIT_POSITIVE, {"filters": out}


def _cmd_prime_filters(args):
    alg = _load_algebra(args.algebra)
    return EXIT_POSITIVE, {
        "prime_filters": [sorted(f) for f in prime_filters(alg)]}


def _cmd_super_prime(args):
    alg = _load_algebra(args.algebra)
    try:
        base = frozenset(int(x) for x in args.filter.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"bad filter element list {args.filter!r}") from exc
    try:
        out = super_prime_filter(alg, base, args.avoid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_POSITIVE, {"filter": sorted(out), "avoids": args.avoid}


def _cmd_bridge_k2a(args):
    model = _load_model(args.model)
    csa = closed_set_algebra(model)
    return EXIT_POSITIVE, {
        "algebra": algebra_to_json(csa.algebra),
        "closed_sets": [sorted(s) for s in csa.sets],
    }


def _cmd_bridge_a2k(args):
    alg = _load_algebra(args.algebra)
    try:
        interp = make_interpretation(alg, _parse_assignment(args.assign))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    frame = prime_filter_frame(alg, interp)
    return EXIT_POSITIVE, {
        "model": model_to_json(frame),
        "prime_filters": [sorted(f) for f in prime_filters(alg)],
    }


def _cmd_saturate_pair(args):
    oracle = _oracle(args)
    universe = canonical_universe(args.vars, args.depth)
    pair = make_pair(_parse_gamma(args.left), _parse_gamma(args.right))
    if not (pair.left <= set(universe.items)
            and pair.right <= set(universe.items)):
        raise UsageError("pair sides must lie inside the universe")
    try:
        trace = saturation_trace(pair, universe, oracle)
    except OracleInconclusive as exc:
        return EXIT_UNKNOWN, {"error": str(exc)}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    final = trace[-1]
    def side(formulas):
        return [render(f) for f in sorted(formulas, key=encode)]
    return EXIT_POSITIVE, {
        "left": side(final.left),
        "right": side(final.right),
        "universe_size": len(universe),
        "trace": [{"left": side(p.left), "right": side(p.right)}
                  for p in trace],
    }


def _cmd_quotient(args):
    oracle = _oracle(args)
    universe = canonical_universe(args.vars, args.depth)
    gamma = _parse_gamma(args.gamma)
    try:
        table = build_quotient(gamma, universe, oracle)
        order = []
        for rep_a in table.representatives:
            row = []
            for rep_b in table.representatives:
                verdict = provably_leq(gamma, rep_a, rep_b, oracle)
                if not isinstance(verdict, (Holds, Fails)):
                    return EXIT_UNKNOWN, {"error": "class order undecided"}
                row.append(isinstance(verdict, Holds))
            order.append(row)
    except OracleInconclusive as exc:
        return EXIT_UNKNOWN, {"error": str(exc)}
    return EXIT_POSITIVE, {
        "classes": [[render(f) for f in members] for members in table.classes],
        "representatives": [render(f) for f in table.representatives],
        "provable_top": list(table.provable_top),
        "order": order,
    }


def _cmd_universe(args):
    universe = canonical_universe(args.vars, args.depth)
    return EXIT_POSITIVE, {
        "items": [render(f) for f in universe.items],
        "codes": [encode(f) for f in universe.items],
    }


def _cmd_harness(args):
    formulas = [_parse_formula(text) for text in args.formula]
    if args.model:
        models = [_load_model(path) for path in args.model]
    else:
        idx = sorted({v.index for f in formulas for v in variables(f)})
        models = [m for n in (1, 2) for m in _models(tuple(idx), n)]
    if args.algebra:
        algebras = [_load_algebra(path) for path in args.algebra]
    else:
        algebras = list(standard_algebras())
    report = validity_harness(formulas, models, algebras)
    payload = {
        "entries": [{
            "formula": render(e.formula),
            "kripke_valid": e.kripke_valid,
            "kripke_witness": list(e.kripke_witness) if e.kripke_witness else None,
            "algebra_valid": e.algebra_valid,
            "algebra_witness": (
                [e.algebra_witness[0],
                 {f"p{v}": x for v, x in e.algebra_witness[1]}]
                if e.algebra_witness else None),
            "bridged_algebra_refutes": e.bridged_algebra_refutes,
            "bridged_frame_refutes": e.bridged_frame_refutes,
        } for e in report.entries],
        "discrepancies": report.discrepancies,
    }
    code = EXIT_POSITIVE if not report.discrepancies else EXIT_NEGATIVE
    return code, payload


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="iplkit",
        description="Intuitionistic propositional logic toolkit. "
                    "The environment variable IPLKIT_BUDGET (e.g. "
                    "'worlds=4,depth=512') sets default oracle bounds.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and echo its canonical form")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("encode", help="numeric code of a formula")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("decode", help="formula of a numeric code, if any")
    p.add_argument("code", type=int)
    p.set_defaults(handler=_cmd_decode)

    p = sub.add_parser("check-proof", help="check a proof JSON file")
    p.add_argument("proof")
    p.add_argument("--gamma", default="", help="comma-separated premises")
    p.set_defaults(handler=_cmd_check_proof)

    p = sub.add_parser("eval", help="truth of a formula at a world")
    p.add_argument("model", help="model JSON file")
    p.add_argument("world", type=int)
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("valid", help="truth of a formula at every world")
    p.add_argument("model", help="model JSON file")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_valid)

    p = sub.add_parser("countermodel", help="bounded countermodel search")
    p.add_argument("formula")
    p.add_argument("--gamma", default="", help="comma-separated premises")
    p.add_argument("--max-worlds", type=int,
                   default=budget_from_env().max_worlds)
    p.set_defaults(handler=_cmd_countermodel)

    p = sub.add_parser("alg-eval", help="algebraic value of a formula")
    p.add_argument("algebra", help="algebra JSON file")
    p.add_argument("formula")
    p.add_argument("--assign", default="", help="e.g. 'p0=1,p1=0'")
    p.set_defaults(handler=_cmd_alg_eval)

    p = sub.add_parser("alg-valid", help="algebraic validity over all assignments")
    p.add_argument("algebra", help="algebra JSON file")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_alg_valid)

    p = sub.add_parser("filters", help="all filters of an algebra")
    p.add_argument("algebra")
    p.set_defaults(handler=_cmd_filters)

    p = sub.add_parser("prime-filters", help="all prime filters of an algebra")
    p.add_argument("algebra")
    p.set_defaults(handler=_cmd_prime_filters)

    p = sub.add_parser("super-prime",
                       help="prime filter extending a filter and avoiding x")
    p.add_argument("algebra")
    p.add_argument("--filter", required=True, help="comma-separated elements")
    p.add_argument("--avoid", type=int, required=True)
    p.set_defaults(handler=_cmd_super_prime)

    p = sub.add_parser("bridge", help="semantic bridge constructions")
    bsub = p.add_subparsers(dest="direction", required=True)
    k2a = bsub.add_parser("k2a", help="closed-set algebra of a model")
    k2a.add_argument("model")
    k2a.set_defaults(handler=_cmd_bridge_k2a)
    a2k = bsub.add_parser("a2k", help="prime-filter frame of an algebra")
    a2k.add_argument("algebra")
    a2k.add_argument("--assign", default="", help="e.g. 'p0=1'")
    a2k.set_defaults(handler=_cmd_bridge_a2k)

    depth_help = "connective depth bound; atoms have depth 0"

    p = sub.add_parser("saturate-pair",
                       help="saturate a consistent pair over a universe")
    p.add_argument("--left", default="", help="comma-separated formulas")
    p.add_argument("--right", default="", help="comma-separated formulas")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--depth", type=int, required=True, help=depth_help)
    p.add_argument("--max-worlds", type=int, default=None)
    p.set_defaults(handler=_cmd_saturate_pair)

    p = sub.add_parser("quotient",
                       help="provable-equivalence quotient of a universe")
    p.add_argument("--gamma", default="", help="comma-separated premises")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--depth", type=int, required=True, help=depth_help)
    p.add_argument("--max-worlds", type=int, default=None)
    p.set_defaults(handler=_cmd_quotient)

    p = sub.add_parser("universe", help="canonical formula universe")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--depth", type=int, required=True, help=depth_help)
    p.set_defaults(handler=_cmd_universe)

    p = sub.add_parser("harness",
                       help="cross-check Kripke and algebraic validity")
    p.add_argument("--formula", action="append", required=True)
    p.add_argument("--model", action="append", default=[],
                   help="model JSON file (repeatable)")
    p.add_argument("--algebra", action="append", default=[],
                   help="algebra JSON file (repeatable)")
    p.set_defaults(handler=_cmd_harness)

    return top


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        code, payload = args.handler(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
