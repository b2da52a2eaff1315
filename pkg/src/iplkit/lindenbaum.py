"""Provable-equivalence quotients of finite formula universes.

Formulas are grouped into classes by certified provable equivalence
under a premise set, ordered by provable implication between
representatives.  The variable-free fragment realizes the two-element
quotient; universes with variables are verified class-wise without ever
materializing the full (infinite) quotient algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .formula import And, Formula, Implies, Or, encode
from .kripke import forces
from .theories import (Fails, FormulaUniverse, Holds, Oracle,
                       OracleInconclusive, Provable, Refuted, Unknown)


class OutOfUniverse(ValueError):
    """A class combination cannot be resolved inside the universe."""


@dataclass(frozen=True)
class QuotientTable:
    gamma: frozenset
    universe: FormulaUniverse
    classes: tuple          # tuple of formula tuples, each sorted by encode
    representatives: tuple  # minimal-encode member of each class
    provable_top: tuple     # bool per class: gamma proves the representative

    @cached_property
    def _class_of(self) -> dict:
        return {f: i for i, members in enumerate(self.classes) for f in members}

    def class_index(self, phi: Formula) -> int:
        try:
            return self._class_of[phi]
        except KeyError:
            raise OutOfUniverse(f"{phi} is not classified") from None


def provably_equivalent(gamma, phi: Formula, psi: Formula, oracle: Oracle):
    """Holds with a checked proof of gamma |- (phi -> psi) & (psi -> phi);
    Fails with a countermodel refuting one direction under gamma."""
    gamma = frozenset(gamma)
    target = And(Implies(phi, psi), Implies(psi, phi))
    verdict = oracle.provable(gamma, target)
    if isinstance(verdict, Provable):
        return Holds(verdict.witness)
    if isinstance(verdict, Refuted):
        model, world = verdict.model, verdict.world
        direction = ("left_to_right"
                     if not forces(model, world, Implies(phi, psi))
                     else "right_to_left")
        return Fails((model, world, direction))
    return Unknown(verdict.reason)


def provably_leq(gamma, phi: Formula, psi: Formula, oracle: Oracle):
    """Class order: Holds with a proof of gamma |- phi -> psi, Fails with
    a countermodel."""
    verdict = oracle.provable(frozenset(gamma), Implies(phi, psi))
    if isinstance(verdict, Provable):
        return Holds(verdict.witness)
    if isinstance(verdict, Refuted):
        return Fails((verdict.model, verdict.world))
    return Unknown(verdict.reason)


def build_quotient(gamma, universe: FormulaUniverse,
                   oracle: Oracle) -> QuotientTable:
    """Partition the universe by provable equivalence under gamma.

    Every pairwise query must be definitive; Unknown aborts with
    OracleInconclusive rather than guessing a class."""
    gamma = frozenset(gamma)
    classes: list = []
    for phi in universe.items:
        for members in classes:
            verdict = provably_equivalent(gamma, phi, members[0], oracle)
            if isinstance(verdict, Holds):
                members.append(phi)
                break
            if isinstance(verdict, Unknown):
                raise OracleInconclusive(
                    f"equivalence of {phi} and {members[0]} undecided")
        else:
            classes.append([phi])
    classes = [tuple(sorted(members, key=encode)) for members in classes]
    classes.sort(key=lambda members: encode(members[0]))
    reps = tuple(members[0] for members in classes)
    tops = []
    for rep in reps:
        verdict = oracle.provable(gamma, rep)
        if isinstance(verdict, Unknown):
            raise OracleInconclusive(f"provability of {rep} undecided")
        tops.append(isinstance(verdict, Provable))
    return QuotientTable(gamma, universe, tuple(classes), reps, tuple(tops))


def class_of(table: QuotientTable, phi: Formula) -> int:
    """Class of phi: direct lookup inside the universe, otherwise the
    homomorphic combination of its parts' classes wherever some member
    combination lies in the universe."""
    if phi in table.universe:
        return table.class_index(phi)
    if isinstance(phi, (And, Or, Implies)):
        i = class_of(table, phi.lhs)
        j = class_of(table, phi.rhs)
        ctor = type(phi)
        for m1 in table.classes[i]:
            for m2 in table.classes[j]:
                combo = ctor(m1, m2)
                if combo in table.universe:
                    return table.class_index(combo)
        raise OutOfUniverse(
            f"no {ctor.__name__} combination of classes {i} and {j} "
            "lies in the universe")
    raise OutOfUniverse(f"{phi} is not in the universe")


def quotient_ops_well_defined(gamma, universe: FormulaUniverse,
                              oracle: Oracle) -> bool:
    """The class of a combination depends only on the operand classes,
    for each connective, over all combinations inside the universe."""
    table = build_quotient(gamma, universe, oracle)
    for ctor in (And, Or, Implies):
        seen: dict = {}
        for a in universe.items:
            for b in universe.items:
                combo = ctor(a, b)
                if combo not in universe:
                    continue
                key = (table.class_index(a), table.class_index(b))
                cls = table.class_index(combo)
                if seen.setdefault(key, cls) != cls:
                    return False
    return True


def truth_matches_provability(gamma, universe: FormulaUniverse,
                              oracle: Oracle) -> bool:
    """Truth in the quotient coincides with provability: every premise
    lands in a provable-top class, and a universe formula's class is
    provable-top exactly when gamma proves the formula."""
    gamma = frozenset(gamma)
    if not gamma <= set(universe.items):
        raise ValueError("gamma must be a subset of the universe")
    table = build_quotient(gamma, universe, oracle)
    for g in gamma:
        if not table.provable_top[class_of(table, g)]:
            return False
    for phi in universe.items:
        verdict = oracle.provable(gamma, phi)
        if isinstance(verdict, Unknown):
            raise OracleInconclusive(f"provability of {phi} undecided")
        if table.provable_top[class_of(table, phi)] != isinstance(verdict, Provable):
            return False
    return True
