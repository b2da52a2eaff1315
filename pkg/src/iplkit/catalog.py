"""Fixed test catalog of Heyting algebras and small Kripke models.

Chains cover linear behavior, the two products cover Boolean and mixed
behavior, and the closed-set algebras of three small posets cover the
bridge constructions.
"""

from __future__ import annotations

from .bridge import closed_set_algebra
from .heyting import chain, product_algebra
from .kripke import KripkeModel, make_model


def chain_model(n: int, valuation=None) -> KripkeModel:
    """The n-world chain w0 -> w1 -> ... -> w(n-1)."""
    rel = {(i, j) for i in range(n) for j in range(n) if i <= j}
    return make_model(n, rel, valuation or {})


def identity_model(n: int, valuation=None) -> KripkeModel:
    """n worlds related only to themselves."""
    return make_model(n, {(i, i) for i in range(n)}, valuation or {})


def fork_model(valuation=None) -> KripkeModel:
    """One root seeing two incomparable maximal worlds."""
    rel = {(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)}
    return make_model(3, rel, valuation or {})


def standard_algebras() -> tuple:
    """The algebra catalog: C2, C3, C4, C5, C2xC2, C3xC2 and the
    closed-set algebras of the 2-chain, 3-chain and fork posets."""
    c2 = chain(2)
    c3 = chain(3)
    return (
        c2,
        c3,
        chain(4),
        chain(5),
        product_algebra(c2, c2),
        product_algebra(c3, c2),
        closed_set_algebra(chain_model(2), "Up(chain2)").algebra,
        closed_set_algebra(chain_model(3), "Up(chain3)").algebra,
        closed_set_algebra(fork_model(), "Up(fork3)").algebra,
    )
