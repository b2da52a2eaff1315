from itertools import permutations, product

import pytest

from iplkit.formula import (And, BOT, Bottom, Implies, Or, TOP, Variable,
                            all_formulas, neg, parse, var)
from iplkit.kripke import (EvalError, Violation,
                           consequence_over_models, enumerate_models,
                           find_countermodel, forces, forces_all,
                           forcing_is_monotone, make_model, model_from_json,
                           model_to_json, valid_in_model, validate_model)
from iplkit.proof import (ContractionConj, ContractionDisj, Exfalso,
                          PermutationConj, PermutationDisj, WeakeningConj,
                          WeakeningDisj, check)

p0, p1 = var(0), var(1)
LEM = parse("p0 | ~p0")
PEIRCE = parse("((p0 -> p1) -> p0) -> p0")
DNE = parse("~~p0 -> p0")


def chain2(val0=(1,), val1=()):
    return make_model(2, {(0, 0), (1, 1), (0, 1)}, {0: val0, 1: val1})


class TestValidate:
    def test_single_reflexive_world(self):
        m = make_model(1, {(0, 0)}, {0: [0]})
        assert validate_model(m) == []

    def test_missing_reflexivity(self):
        m = make_model(2, {(1, 1), (0, 1)}, {})
        assert validate_model(m) == [Violation("reflexivity", (0,))]

    def test_missing_transitivity(self):
        m = make_model(3, {(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)}, {})
        assert Violation("transitivity", (0, 1, 2)) in validate_model(m)

    def test_non_monotone_valuation(self):
        m = make_model(2, {(0, 0), (1, 1), (0, 1)}, {0: [0]})
        assert validate_model(m) == [Violation("monotonicity", (0, 0, 1))]


class TestForces:
    def test_lem_fails_at_root(self):
        assert forces(chain2(), 0, LEM) is False

    def test_peirce_fails_at_root(self):
        assert forces(chain2((1,), ()), 0, PEIRCE) is False

    def test_top_everywhere(self):
        m = chain2()
        assert forces(m, 0, TOP) and forces(m, 1, TOP)

    def test_variable_and_negation(self):
        m = chain2()
        assert not forces(m, 0, p0) and forces(m, 1, p0)
        assert not forces(m, 0, neg(p0)) and not forces(m, 1, neg(p0))
        # no successor of w0 settles p0 negatively, so ~~p0 already holds
        assert forces(m, 0, neg(neg(p0)))

    def test_unknown_world(self):
        with pytest.raises(EvalError):
            forces(chain2(), 5, p0)

    def test_undeclared_variable(self):
        with pytest.raises(EvalError):
            forces(chain2(), 0, var(3))


class TestValidity:
    def test_identity_valid(self):
        m = make_model(1, {(0, 0)}, {0: []})
        assert valid_in_model(m, Implies(p0, p0))

    def test_lem_invalid_on_chain(self):
        assert not valid_in_model(chain2(), LEM)

    def test_exfalso_valid(self):
        assert valid_in_model(chain2(), Implies(BOT, p0))

    def test_forces_all(self):
        m = chain2()
        assert forces_all(m, 0, [])
        assert forces_all(m, 1, [p0])
        assert not forces_all(m, 0, [p0])

    def test_consequence_trivial(self):
        m = chain2()
        v = consequence_over_models([m], [p0], p0)
        assert v.holds

    def test_consequence_refuted(self):
        v = consequence_over_models([chain2()], [], LEM)
        assert (v.holds, v.model_index, v.world) == (False, 0, 0)

    def test_consequence_conjunction(self):
        m = make_model(1, {(0, 0)}, {0: [0]})
        assert consequence_over_models([m], [p0], And(p0, p0)).holds


def brute_force_models(num_vars, num_worlds):
    """Independent enumerator: every labeled preorder with every monotone
    valuation, no isomorphism reduction."""
    worlds = range(num_worlds)
    diagonal = {(w, w) for w in worlds}
    offdiag = [(i, j) for i in worlds for j in worlds if i != j]
    for mask in range(1 << len(offdiag)):
        rel = set(diagonal)
        rel.update(p for i, p in enumerate(offdiag) if mask >> i & 1)
        if any((a, b) in rel and (b, c) in rel and (a, c) not in rel
               for a in worlds for b in worlds for c in worlds):
            continue
        upsets = [frozenset(s) for k in range(num_worlds + 1)
                  for s in _subsets(list(worlds), k)
                  if all(j in s for i, j in rel if i in s)]
        for choice in product(upsets, repeat=num_vars):
            yield frozenset(rel), tuple(choice)


def _subsets(items, k):
    if k == 0:
        yield frozenset()
        return
    for i, x in enumerate(items):
        for rest in _subsets(items[i + 1:], k - 1):
            yield frozenset({x}) | rest


def iso_classes(models, num_worlds):
    seen = set()
    for rel, vals in models:
        canon = min((tuple(sorted((p[i], p[j]) for i, j in rel)),
                     tuple(tuple(sorted(p[w] for w in v)) for v in vals))
                    for p in permutations(range(num_worlds)))
        seen.add(canon)
    return len(seen)


class TestEnumeration:
    def test_counts_no_vars(self):
        assert len(list(enumerate_models(0, 1))) == 1

    def test_counts_one_var_one_world(self):
        assert len(list(enumerate_models(1, 1))) == 2

    def test_matches_brute_force_quotient(self):
        for num_vars, num_worlds in [(1, 2), (0, 3), (1, 3), (2, 2)]:
            expected = iso_classes(
                list(brute_force_models(num_vars, num_worlds)), num_worlds)
            got = len(list(enumerate_models(num_vars, num_worlds)))
            assert got == expected, (num_vars, num_worlds)

    def test_all_enumerated_models_are_valid(self):
        for m in enumerate_models(2, 3):
            assert validate_model(m) == []

    def test_deterministic(self):
        first = list(enumerate_models(1, 2))
        second = list(enumerate_models(1, 2))
        assert first == second

    def test_requires_one_world(self):
        with pytest.raises(ValueError):
            list(enumerate_models(1, 0))


class TestCountermodels:
    def test_lem(self):
        model, world = find_countermodel([], LEM, 2)
        assert world == 0
        assert model == make_model(2, {(0, 0), (1, 1), (0, 1)}, {0: [1]})

    def test_peirce(self):
        model, world = find_countermodel([], PEIRCE, 2)
        assert model.worlds == 2
        assert not forces(model, world, PEIRCE)
        assert validate_model(model) == []

    def test_dne(self):
        model, world = find_countermodel([], DNE, 2)
        assert not forces(model, world, DNE)

    def test_theorems_have_no_countermodel(self):
        assert find_countermodel([], Implies(p0, p0), 5) is None
        assert find_countermodel([], Implies(BOT, p0), 4) is None

    def test_with_premises(self):
        model, world = find_countermodel([p0], p1, 1)
        assert forces(model, world, p0) and not forces(model, world, p1)


class TestMonotonicity:
    def test_depth_two_family(self):
        assert forcing_is_monotone(chain2(), all_formulas(1, 2))

    def test_single_world(self):
        m = make_model(1, {(0, 0)}, {0: []})
        assert forcing_is_monotone(m, all_formulas(1, 2))

    def test_bottom_only(self):
        assert forcing_is_monotone(chain2(), [BOT])

    def test_persistence_exhaustive_small(self):
        family = all_formulas(2, 2)
        for n in (1, 2, 3):
            for m in enumerate_models(2, n):
                assert forcing_is_monotone(m, family)


AXIOM_BUILDERS = [
    lambda a, b: ContractionDisj(a),
    lambda a, b: ContractionConj(a),
    lambda a, b: WeakeningDisj(a, b),
    lambda a, b: WeakeningConj(a, b),
    lambda a, b: PermutationDisj(a, b),
    lambda a, b: PermutationConj(a, b),
    lambda a, b: Exfalso(a),
]


class TestSoundnessPieces:
    def test_axioms_valid_everywhere(self):
        atoms = all_formulas(2, 1)
        instances = {check([], build(a, b))
                     for build in AXIOM_BUILDERS
                     for a in atoms for b in atoms}
        models = [m for n in (1, 2, 3) for m in enumerate_models(2, n)]
        for m in models:
            for f in instances:
                assert valid_in_model(m, f)

    def test_rules_preserve_validity(self):
        # if all premises of a rule are valid in a model, so is its conclusion
        atoms = all_formulas(2, 1)
        models = [m for n in (1, 2, 3) for m in enumerate_models(2, n)]
        pairs = [(a, b) for a in atoms for b in atoms]
        for m in models:
            for a, b in pairs:
                mp_minor, mp_major = a, Implies(a, b)
                if valid_in_model(m, mp_minor) and valid_in_model(m, mp_major):
                    assert valid_in_model(m, b)
                for c in atoms:
                    syl1, syl2 = Implies(a, b), Implies(b, c)
                    if valid_in_model(m, syl1) and valid_in_model(m, syl2):
                        assert valid_in_model(m, Implies(a, c))
                    exp = Implies(And(a, b), c)
                    if valid_in_model(m, exp):
                        assert valid_in_model(m, Implies(a, Implies(b, c)))
                        assert valid_in_model(m, exp)
                    imp = Implies(a, Implies(b, c))
                    if valid_in_model(m, imp):
                        assert valid_in_model(m, Implies(And(a, b), c))
                    if valid_in_model(m, Implies(a, b)):
                        assert valid_in_model(m, Implies(Or(c, a), Or(c, b)))


def truth_table(phi, env):
    if isinstance(phi, Variable):
        return env[phi.var.index]
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, And):
        return truth_table(phi.lhs, env) and truth_table(phi.rhs, env)
    if isinstance(phi, Or):
        return truth_table(phi.lhs, env) or truth_table(phi.rhs, env)
    return (not truth_table(phi.lhs, env)) or truth_table(phi.rhs, env)


class TestClassicalDegeneracy:
    def test_identity_relation_models_are_classical(self):
        family = all_formulas(2, 2)
        for n in (1, 2, 3):
            for m in enumerate_models(2, n):
                if set(m.rel) != {(w, w) for w in range(m.worlds)}:
                    continue
                for w in range(m.worlds):
                    env = {v: w in ws for v, ws in m.valuation}
                    for f in family:
                        assert forces(m, w, f) == truth_table(f, env)


class TestJson:
    def test_round_trip(self):
        m = chain2()
        assert model_from_json(model_to_json(m)) == m

    def test_loader_takes_closure(self):
        m = model_from_json({"worlds": 3, "rel": [[0, 1], [1, 2]],
                             "vars": 1, "val": {"p0": [2]}})
        assert (0, 2) in m.rel and all((w, w) in m.rel for w in range(3))

    def test_loader_rejects_non_monotone(self):
        with pytest.raises(ValueError):
            model_from_json({"worlds": 2, "rel": [[0, 1]], "vars": 1,
                             "val": {"p0": [0]}})

    def test_loader_rejects_unknown_vars(self):
        with pytest.raises(ValueError):
            model_from_json({"worlds": 1, "rel": [], "vars": 0,
                             "val": {"p0": [0]}})
