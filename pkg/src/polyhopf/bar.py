"""Boundary maps on polygons, the bar differentials and coideal quotients.

Bar elements are formal sums of :class:`~polyhopf.algebra.Word` values.
A factor of a word is a :class:`~polyhopf.algebra.WedgeBlock`; its degree
is the number of polygons in it.

Signs.  Merging factors ``i`` and ``i+1`` by the wedge carries
``(-1)^(deg a_1 + ... + deg a_(i-1))`` and replacing factor ``j`` by its
boundary carries ``-(-1)^(deg a_1 + ... + deg a_(j-1))``.  For words of
polygons these reduce to ``(-1)^(i-1)`` and ``(-1)^j``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Optional

from .algebra import (
    Accumulator,
    FormalSum,
    WedgeBlock,
    Word,
    coproduct_words,
    wedge_blocks,
)
from .polygon import Polygon, enumerate_dissections, sigma, tau
from .rules import Rule, tree_of


@lru_cache(maxsize=1 << 16)
def _boundary(rule: Rule, P: Polygon) -> FormalSum:
    acc = Accumulator()
    for d in enumerate_dissections(P):
        if len(d) != 1:
            continue
        t = tree_of(rule, P, d)
        (u, v), = t.edges
        sign, b = WedgeBlock.build((t.labels[u], t.labels[v]))
        if sign:
            acc.add_term(b, sign * t.coeff)
    return acc.result()


def boundary(rule: Rule, P: Polygon) -> FormalSum:
    """``sum over single arrows of coeff * (source label) ^ (target label)``."""
    return _boundary(rule, Polygon(P))


def boundary_block(rule: Rule, b: WedgeBlock) -> FormalSum:
    """Leibniz extension of :func:`boundary` to a wedge block."""
    acc = Accumulator()
    before = 0
    for k, p in enumerate(b):
        head = WedgeBlock(b[:k])
        tail = WedgeBlock(b[k + 1:])
        sgn = -1 if before % 2 else 1
        for q, c in boundary(rule, p).raw_items():
            s1, w = wedge_blocks(head, q)
            if not s1:
                continue
            s2, w = wedge_blocks(w, tail)
            if s2:
                acc.add_term(w, c * sgn * s1 * s2)
        before += 1
    return acc.result()


def d1(x: FormalSum) -> FormalSum:
    """Merge neighbouring factors by the wedge product."""
    acc = Accumulator()
    for w, c in x.raw_items():
        deg = 0
        for i in range(len(w) - 1):
            sgn = -1 if deg % 2 else 1
            s, b = wedge_blocks(w[i], w[i + 1])
            if s:
                acc.add_term(Word(w[:i] + (b,) + w[i + 2:]), c * sgn * s)
            deg += w[i].degree
    return acc.result()


def d2(rule: Rule, x: FormalSum) -> FormalSum:
    """Apply the boundary to one factor at a time."""
    acc = Accumulator()
    for w, c in x.raw_items():
        deg = 0
        for j in range(len(w)):
            sgn = 1 if deg % 2 else -1
            for b, k in boundary_block(rule, w[j]).raw_items():
                acc.add_term(Word(w[:j] + (b,) + w[j + 1:]), c * sgn * k)
            deg += w[j].degree
    return acc.result()


def base_rule(rule: Rule) -> Rule:
    """Hopf rule whose boundary serves a perturbed rule."""
    from .rules import RULES

    return RULES[rule.base]


def cocycle_defect(rule: Rule, P: Polygon) -> FormalSum:
    """``(D1 + D2)`` applied to the rule's linearized dissection sum."""
    from .rules import lambda_phi

    x = lambda_phi(rule, P)
    return d1(x) + d2(base_rule(rule), x)


def boundary_squared(rule: Rule, P: Polygon) -> FormalSum:
    """``d(dP)`` with ``d`` extended to wedge blocks by Leibniz."""
    return boundary(rule, P).map(lambda b: boundary_block(rule, b))


def bar_coproduct(x: FormalSum) -> FormalSum:
    """Deconcatenation; terms are ``(left, right)`` word pairs."""
    return coproduct_words(x)


# --- coideal quotients -------------------------------------------------------


class Coideal:
    """Quotient family ``"I"`` (orientation) or ``"J"`` (rotation) up to weight ``n``."""

    __slots__ = ("family", "max_weight")

    def __init__(self, family: str, max_weight: int):
        if family not in ("I", "J"):
            raise ValueError("family must be 'I' or 'J'")
        if max_weight < 1:
            raise ValueError("max_weight must be positive")
        self.family = family
        self.max_weight = max_weight


def _key(P: Polygon):
    return P.sort_key()


def canonical_factor(coideal: Coideal, Q: Polygon):
    """``(coefficient, representative)`` of one polygon modulo the coideal.

    Returns ``(0, None)`` when the polygon itself lies in the coideal.
    """
    k = Q.weight
    if k > coideal.max_weight:
        raise ValueError(f"factor {Q.text()} exceeds weight {coideal.max_weight}")
    if coideal.family == "I":
        T = tau(Q)
        if T == Q:
            return (0, None) if k % 2 == 0 else (1, Q)
        if _key(Q) <= _key(T):
            return 1, Q
        return (1 if k % 2 else -1), T
    if k < 2:
        return 1, Q
    rots = [Q]
    for _ in range(k):
        rots.append(sigma(rots[-1]))
    return 1, min(rots, key=_key)


def _canonical_block(coideal: Coideal, b: WedgeBlock):
    coeff = 1
    items = []
    for p in b:
        c, q = canonical_factor(coideal, p)
        if not c:
            return 0, None
        coeff *= c
        items.append(q)
    s, nb = WedgeBlock.build(items)
    return coeff * s, nb


def quotient(coideal: Coideal, x: FormalSum) -> FormalSum:
    """Rewrite every factor to its canonical representative and recollect."""
    acc = Accumulator()
    for w, c in x.raw_items():
        coeff = c
        blocks = []
        for b in w:
            k, nb = _canonical_block(coideal, b)
            if not k:
                coeff = 0
                break
            coeff *= k
            blocks.append(nb)
        if coeff:
            acc.add_term(Word(blocks), coeff)
    return acc.result()


def q_n(n: int, x: FormalSum) -> FormalSum:
    return quotient(Coideal("I", n), x)


def r_n(n: int, x: FormalSum) -> FormalSum:
    return quotient(Coideal("J", n), x)
