"""Finite Kripke models and the intuitionistic forcing relation.

Worlds are dense integer indices, the accessibility relation is an
explicit pair set (reflexive and transitive), and valuations are
monotone truth sets per variable.  The module also enumerates all valid
models of a given size up to world relabeling and searches them for
countermodels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Optional

from .formula import And, Bottom, Formula, Or, Variable, encode, variables


class EvalError(ValueError):
    """Evaluation against an unknown world or undeclared variable."""


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    rel: frozenset
    valuation: tuple  # ((var_index, frozenset of worlds), ...), sorted

    @cached_property
    def successors(self) -> tuple:
        out = [[] for _ in range(self.worlds)]
        for i, j in sorted(self.rel):
            out[i].append(j)
        return tuple(tuple(js) for js in out)

    def var_indices(self) -> tuple:
        return tuple(v for v, _ in self.valuation)

    def true_worlds(self, index: int) -> frozenset:
        for v, ws in self.valuation:
            if v == index:
                return ws
        raise EvalError(f"variable p{index} is not declared in this model")


def make_model(worlds: int, rel: Iterable, valuation: Mapping) -> KripkeModel:
    """Normalize raw pieces into a KripkeModel (no closure, no validation)."""
    if worlds < 1:
        raise ValueError("a model needs at least one world")
    pairs = frozenset((int(i), int(j)) for i, j in rel)
    for i, j in pairs:
        if not (0 <= i < worlds and 0 <= j < worlds):
            raise ValueError(f"relation pair ({i}, {j}) out of range")
    val = []
    for v in sorted(valuation):
        ws = frozenset(int(w) for w in valuation[v])
        if any(not 0 <= w < worlds for w in ws):
            raise ValueError(f"valuation of p{v} mentions an unknown world")
        val.append((int(v), ws))
    return KripkeModel(worlds, pairs, tuple(val))


@dataclass(frozen=True)
class Violation:
    kind: str  # "reflexivity" | "transitivity" | "monotonicity"
    witness: tuple


def validate_model(model: KripkeModel) -> list:
    """Empty list iff reflexivity, transitivity and monotonicity all hold."""
    out = []
    rel = model.rel
    for w in range(model.worlds):
        if (w, w) not in rel:
            out.append(Violation("reflexivity", (w,)))
    for a, b in sorted(rel):
        for c in range(model.worlds):
            if (b, c) in rel and (a, c) not in rel:
                out.append(Violation("transitivity", (a, b, c)))
    for v, ws in model.valuation:
        for a, b in sorted(rel):
            if a in ws and b not in ws:
                out.append(Violation("monotonicity", (v, a, b)))
    return out


def _check_formula_vars(model: KripkeModel, phi: Formula) -> None:
    declared = set(model.var_indices())
    for v in variables(phi):
        if v.index not in declared:
            raise EvalError(f"variable p{v.index} is not declared in this model")


def _forces(model: KripkeModel, world: int, phi: Formula, cache: dict) -> bool:
    key = (world, phi)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if isinstance(phi, Variable):
        out = world in model.true_worlds(phi.var.index)
    elif isinstance(phi, Bottom):
        out = False
    elif isinstance(phi, And):
        out = (_forces(model, world, phi.lhs, cache)
               and _forces(model, world, phi.rhs, cache))
    elif isinstance(phi, Or):
        out = (_forces(model, world, phi.lhs, cache)
               or _forces(model, world, phi.rhs, cache))
    else:
        out = all(_forces(model, w2, phi.rhs, cache)
                  for w2 in model.successors[world]
                  if _forces(model, w2, phi.lhs, cache))
    cache[key] = out
    return out


def forces(model: KripkeModel, world: int, phi: Formula) -> bool:
    """Intuitionistic truth of phi at a world of a valid model."""
    if not 0 <= world < model.worlds:
        raise EvalError(f"unknown world {world}")
    _check_formula_vars(model, phi)
    return _forces(model, world, phi, {})


def valid_in_model(model: KripkeModel, phi: Formula) -> bool:
    _check_formula_vars(model, phi)
    cache: dict = {}
    return all(_forces(model, w, phi, cache) for w in range(model.worlds))


def forces_all(model: KripkeModel, world: int, gamma) -> bool:
    """True iff every member of gamma holds at the world."""
    if not 0 <= world < model.worlds:
        raise EvalError(f"unknown world {world}")
    cache: dict = {}
    for phi in gamma:
        _check_formula_vars(model, phi)
        if not _forces(model, world, phi, cache):
            return False
    return True


@dataclass(frozen=True)
class ConsequenceVerdict:
    holds: bool
    model_index: Optional[int] = None
    world: Optional[int] = None


def consequence_over_models(models, gamma, phi: Formula) -> ConsequenceVerdict:
    """Local semantic consequence restricted to the supplied model family."""
    gamma = sorted(gamma, key=encode)
    for i, model in enumerate(models):
        for f in gamma + [phi]:
            _check_formula_vars(model, f)
        cache: dict = {}
        for w in range(model.worlds):
            if all(_forces(model, w, g, cache) for g in gamma):
                if not _forces(model, w, phi, cache):
                    return ConsequenceVerdict(False, i, w)
    return ConsequenceVerdict(True)


def forcing_is_monotone(model: KripkeModel, formulas) -> bool:
    """Exhaustive persistence check over the supplied formula family."""
    cache: dict = {}
    for phi in formulas:
        _check_formula_vars(model, phi)
        for a, b in model.rel:
            if _forces(model, a, phi, cache) and not _forces(model, b, phi, cache):
                return False
    return True


# ---------------------------------------------------------------------------
# Enumeration of all valid models up to world relabeling.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _preorders(n: int) -> tuple:
    """All reflexive transitive relations on range(n), labeled.

    Built by extending every preorder on n-1 points with a new point x:
    pick a down-closed predecessor set P and an up-closed successor set S
    with P x S inside the old relation.
    """
    if n <= 0:
        return (frozenset(),)
    if n == 1:
        return (frozenset({(0, 0)}),)
    x = n - 1
    out = []
    for rel in _preorders(n - 1):
        downsets = _closed_subsets(rel, n - 1, up=False)
        upsets = _closed_subsets(rel, n - 1, up=True)
        for pred in downsets:
            for succ in upsets:
                if all((a, b) in rel for a in pred for b in succ):
                    new = set(rel)
                    new.add((x, x))
                    new.update((a, x) for a in pred)
                    new.update((x, b) for b in succ)
                    out.append(frozenset(new))
    return tuple(out)


def _closed_subsets(rel: frozenset, n: int, up: bool) -> list:
    out = []
    for mask in range(1 << n):
        sub = frozenset(i for i in range(n) if mask >> i & 1)
        ok = True
        for a, b in rel:
            if up and a in sub and b not in sub:
                ok = False
                break
            if not up and b in sub and a not in sub:
                ok = False
                break
        if ok:
            out.append(sub)
    return out


def _rel_key(rel: frozenset) -> tuple:
    return tuple(sorted((i, j) for i, j in rel if i != j))


def _relabel_rel(rel: frozenset, perm) -> frozenset:
    return frozenset((perm[i], perm[j]) for i, j in rel)


@lru_cache(maxsize=None)
def _canonical_preorders(n: int) -> tuple:
    """Preorders on range(n) whose edge list is lexicographically minimal
    within their relabeling class, sorted by that edge list."""
    perms = list(permutations(range(n)))
    out = []
    for rel in _preorders(n):
        key = _rel_key(rel)
        if all(key <= _rel_key(_relabel_rel(rel, p)) for p in perms):
            out.append(rel)
    return tuple(sorted(out, key=_rel_key))


def _upsets(rel: frozenset, n: int) -> list:
    return sorted(_closed_subsets(rel, n, up=True), key=lambda s: tuple(sorted(s)))


def _val_key(valuation: tuple) -> tuple:
    return tuple(tuple(sorted(ws)) for _, ws in valuation)


@lru_cache(maxsize=None)
def _models(var_indices: tuple, n: int) -> tuple:
    """All valid models on n worlds over the given variables, one per
    isomorphism class, in deterministic order."""
    out = []
    for rel in _canonical_preorders(n):
        auts = [p for p in permutations(range(n))
                if _relabel_rel(rel, p) == rel]
        upsets = _upsets(rel, n)
        for choice in product(upsets, repeat=len(var_indices)):
            valuation = tuple(zip(var_indices, choice))
            key = _val_key(valuation)
            if all(key <= _val_key(tuple(
                    (v, frozenset(p[w] for w in ws)) for v, ws in valuation))
                    for p in auts):
                out.append(KripkeModel(n, rel, valuation))
    return tuple(out)


def enumerate_models(num_vars: int, num_worlds: int) -> Iterator[KripkeModel]:
    """Every valid model on exactly num_worlds worlds over p0..p(num_vars-1),
    up to world relabeling, in deterministic order."""
    if num_worlds < 1:
        raise ValueError("num_worlds must be at least 1")
    return iter(_models(tuple(range(num_vars)), num_worlds))


def find_countermodel(gamma, phi: Formula, max_worlds: int) -> Optional[tuple]:
    """First (model, world) in enumeration order with at most max_worlds
    worlds that forces gamma but not phi; None if there is none.  Absence
    is not a provability certificate."""
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    gamma = list(gamma)
    idx = set()
    for f in list(gamma) + [phi]:
        idx.update(v.index for v in variables(f))
    var_indices = tuple(sorted(idx))
    for n in range(1, max_worlds + 1):
        for model in _models(var_indices, n):
            cache: dict = {}
            for w in range(n):
                if (all(_forces(model, w, g, cache) for g in gamma)
                        and not _forces(model, w, phi, cache)):
                    return model, w
    return None


# ---------------------------------------------------------------------------
# JSON wire format.
# ---------------------------------------------------------------------------


def model_to_json(model: KripkeModel) -> dict:
    indices = model.var_indices()
    num_vars = max(indices) + 1 if indices else 0
    return {
        "worlds": model.worlds,
        "rel": [[i, j] for i, j in sorted(model.rel)],
        "vars": num_vars,
        "val": {f"p{v}": sorted(ws) for v, ws in model.valuation},
    }


def model_from_json(obj) -> KripkeModel:
    """Load a model, take the reflexive-transitive closure of the given
    relation, and reject valuations that are not monotone over it."""
    if not isinstance(obj, dict):
        raise ValueError("model JSON must be an object")
    try:
        worlds = int(obj["worlds"])
        rel = [(int(i), int(j)) for i, j in obj.get("rel", [])]
        num_vars = int(obj.get("vars", 0))
        val = dict(obj.get("val", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model JSON: {exc}") from exc
    closure = set(rel)
    closure.update((w, w) for w in range(worlds))
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    valuation = {}
    for v in range(num_vars):
        valuation[v] = [int(w) for w in val.pop(f"p{v}", [])]
    if val:
        raise ValueError(f"valuation keys {sorted(val)} exceed declared vars")
    model = make_model(worlds, closure, valuation)
    bad = validate_model(model)
    if bad:
        raise ValueError(f"model violates monotonicity: {bad[0]}")
    return model
