"""Rules assigning signed decorated trees to dissections.

Every rule builds the tree dual to a dissection: one vertex per region,
one edge per arrow.  The four base rules differ in orientation, labels
and sign:

* ``phi1``: edges flow away from the root region;
* ``phi2``: as ``phi1``, but a region reached through a backward arrow is
  labelled by its reversal ``tau(Q)`` and contributes ``(-1)^weight(Q)``;
* ``phi3``: as ``phi1`` with coefficient ``(-1)^(number of backward arrows)``;
* ``phi4``: each edge flows from the left region of its arrow to the right.

A perturbed rule reverses the edges of a chosen set of arrows and picks up
a factor ``-1`` for each reversed edge.  ``phi_re``, ``phi_fv`` and
``phi_sigma_fv`` are the perturbations of ``phi2`` on root-ending arrows,
of ``phi4`` on arrows from the first vertex and of ``phi4`` on arrows
from the last vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional

from .algebra import Accumulator, FormalSum
from .polygon import (
    Arrow,
    Dissection,
    Polygon,
    enumerate_dissections,
    is_backward,
    regions,
    tau,
)
from .trees import Tree, linearize

FlipPredicate = Callable[[Polygon, Arrow], bool]

BASE_RULES = ("phi1", "phi2", "phi3", "phi4")


@dataclass(frozen=True)
class Rule:
    """A base rule, optionally perturbed on the arrows selected by ``flip``."""

    name: str
    base: str
    flip: Optional[FlipPredicate] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.base not in BASE_RULES:
            raise ValueError(f"unknown base rule {self.base!r}")

    @property
    def is_hopf(self) -> bool:
        return self.flip is None

    def flipped(self, P: Polygon, a: Arrow) -> bool:
        return self.flip is not None and self.flip(P, a)

    def perturb(self, name: str, flip: FlipPredicate) -> "Rule":
        if self.flip is not None:
            raise ValueError("only base rules can be perturbed")
        return Rule(name, self.base, flip)


def _root_ending(P: Polygon, a: Arrow) -> bool:
    return a.j == len(P)


def _first_vertex(P: Polygon, a: Arrow) -> bool:
    return a.i == 1


def _last_vertex(P: Polygon, a: Arrow) -> bool:
    return a.i == len(P)


PHI1 = Rule("phi1", "phi1")
PHI2 = Rule("phi2", "phi2")
PHI3 = Rule("phi3", "phi3")
PHI4 = Rule("phi4", "phi4")
PHI_RE = Rule("phi_re", "phi2", _root_ending)
PHI_FV = Rule("phi_fv", "phi4", _first_vertex)
PHI_SIGMA_FV = Rule("phi_sigma_fv", "phi4", _last_vertex)

RULES: Dict[str, Rule] = {r.name: r for r in (PHI1, PHI2, PHI3, PHI4, PHI_RE, PHI_FV, PHI_SIGMA_FV)}


def get_rule(name: str) -> Rule:
    try:
        return RULES[name]
    except KeyError:
        raise ValueError(f"unknown rule {name!r}; expected one of {', '.join(RULES)}") from None


def tree_of(rule: Rule, P: Polygon, d: Iterable[Arrow] = ()) -> Tree:
    """Signed decorated tree the rule assigns to ``(P, d)``."""
    dec = regions(P, d)
    labels = list(dec.regions)
    coeff = Fraction(1)
    if rule.base == "phi2":
        for r, par in enumerate(dec.parent):
            if par is not None and is_backward(dec.arrows[par].arrow):
                labels[r] = tau(labels[r])
                if labels[r].weight % 2:
                    coeff = -coeff
    edges = []
    tags = []
    for info in dec.arrows:
        a = info.arrow
        if rule.base == "phi4":
            e = (info.left, info.right)
        else:
            e = (info.root_side, info.cutoff_side)
            if rule.base == "phi3" and is_backward(a):
                coeff = -coeff
        if rule.flipped(P, a):
            e = (e[1], e[0])
            coeff = -coeff
        edges.append(e)
        tags.append(a)
    return Tree(labels, edges, coeff, tags)


def sign_of(rule: Rule, P: Polygon, d: Iterable[Arrow] = ()) -> Fraction:
    return tree_of(rule, P, d).coeff


def trees_of(rule: Rule, P: Polygon) -> FormalSum:
    """Formal sum of the forests of all dissections of ``P``."""
    acc = Accumulator()
    for d in enumerate_dissections(P):
        t = tree_of(rule, P, d)
        acc.add_term(t.forest(), t.coeff)
    return acc.result()


@lru_cache(maxsize=1 << 14)
def _lambda(rule: Rule, P: Polygon) -> FormalSum:
    acc = Accumulator()
    for d in enumerate_dissections(P):
        acc.add(linearize(tree_of(rule, P, d)))
    return acc.result()


def lambda_phi(rule: Rule, P: Polygon) -> FormalSum:
    """Sum over all dissections of the linearized rule trees."""
    if rule.flip is not None and rule.name not in RULES:
        # custom predicates are not reliably hashable by name
        acc = Accumulator()
        for d in enumerate_dissections(P):
            acc.add(linearize(tree_of(rule, P, d)))
        return acc.result()
    return _lambda(rule, Polygon(P))
