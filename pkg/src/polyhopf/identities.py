"""Verifiers for the relations between the linearized rule algebras.

Each verifier computes both sides from first principles and returns an
:class:`IdentityReport` whose ``defect`` is ``lhs - rhs`` (after the
relevant quotient where the relation only holds modulo a coideal).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Accumulator, FormalSum, Word, shuffle_many, shuffle_sums, word_sum
from .bar import q_n, r_n
from .polygon import (
    Arrow,
    Dissection,
    Polygon,
    arrow_classes,
    enumerate_dissections,
    is_dissection,
    is_nontrivial,
    regions,
    sigma,
    split,
    tau,
)
from .rules import (
    PHI2,
    PHI3,
    PHI4,
    PHI_FV,
    PHI_RE,
    PHI_SIGMA_FV,
    Rule,
    lambda_phi,
    tree_of,
)
from .trees import (
    Tree,
    delete_edges,
    flip_edges,
    graft_leaf,
    graft_root,
    linearize,
)


@dataclass
class IdentityReport:
    identity: str
    polygon: Polygon
    holds: bool
    defect: FormalSum
    millis: float
    parts: Dict[str, FormalSum] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "polygon": self.polygon.text(),
            "holds": self.holds,
            "defect": self.defect.to_json(),
            "millis": round(self.millis, 3),
        }
        if self.parts:
            out["parts"] = {k: v.to_json() for k, v in sorted(self.parts.items())}
        return out


# --- shared helpers ----------------------------------------------------------


def flip_set(rule: Rule, P: Polygon) -> List[Arrow]:
    """Arrows of ``P`` on which ``rule`` differs from its base rule."""
    from .polygon import nontrivial_arrows

    return [a for a in nontrivial_arrows(P) if rule.flipped(P, a)]


def _subsets_in(P: Polygon, s: Sequence[Arrow]) -> List[Dissection]:
    """Nonempty dissections made only of arrows from ``s``."""
    out = []
    for k in range(1, len(s) + 1):
        for c in itertools.combinations(s, k):
            if is_dissection(P, c):
                out.append(Dissection(c))
    return out


def _lambda_label(rule: Rule, Q: Polygon) -> FormalSum:
    return lambda_phi(rule, Q)


def edgeswitch_rhs(phi: Rule, P: Polygon, s: Sequence[Arrow]) -> FormalSum:
    """``sum over nonempty d in s of (-1)^|d| sign_phi(d) shuffle_j L_phi(P_d^j)``."""
    acc = Accumulator()
    for d in _subsets_in(P, s):
        t = tree_of(phi, P, d)
        sh = shuffle_many(_lambda_label(phi, Q) for Q in t.labels)
        acc.add(sh, (-1) ** len(d) * t.coeff)
    return acc.result()


def single_arrow_labels(phi: Rule, P: Polygon, a: Arrow):
    """``(sign, source label, target label)`` of the one-edge tree of ``a``."""
    t = tree_of(phi, P, [a])
    (u, v), = t.edges
    return t.coeff, t.labels[u], t.labels[v]


# --- individual identities ---------------------------------------------------


def trees_2I(P: Polygon, rule: Rule = PHI4, max_flip: int = 3) -> FormalSum:
    """Sum over edge sets ``I`` of ``sum_k L(T^k) - L(T minus I)`` on dissection trees."""
    acc = Accumulator()
    for d in enumerate_dissections(P):
        t = tree_of(rule, P, d)
        m = len(t.edges)
        for size in range(1, min(m, max_flip) + 1):
            for I in itertools.combinations(range(m), size):
                for k in range(len(I) + 1):
                    for sub in itertools.combinations(I, k):
                        acc.add(linearize(flip_edges(t, sub)))
                acc.add(linearize(delete_edges(t, I)), -t.coeff)
    return acc.result()


def edgeswitch(phi: Rule, psi: Rule, P: Polygon, s: Optional[Sequence[Arrow]] = None) -> FormalSum:
    """``L_psi - L_phi - sum (-1)^|d| sign_phi(d) shuffle L_phi(P_d^j)``.

    ``s`` is the set of arrows on which the two rules disagree; by default
    the flip set of the perturbed rule ``psi``.
    """
    if s is None:
        s = flip_set(psi, P)
    return lambda_phi(psi, P) - lambda_phi(phi, P) - edgeswitch_rhs(phi, P, s)


def lineartrees(phi: Rule, psi: Rule, P: Polygon) -> FormalSum:
    """``L_psi - L_phi + sum sign_phi(a) L_phi(P_a^1) shuffle L_psi(P_a^2)``."""
    acc = Accumulator()
    for a in flip_set(psi, P):
        c, src, dst = single_arrow_labels(phi, P, a)
        acc.add(shuffle_sums(lambda_phi(phi, src), lambda_phi(psi, dst)), c)
    return lambda_phi(psi, P) - lambda_phi(phi, P) + acc.result()


def lineartrees_leaf(phi: Rule, psi: Rule, P: Polygon) -> FormalSum:
    """``L_psi - L_phi + sum sign_phi(a) L_psi(P_a^1) shuffle L_phi(P_a^2)``."""
    acc = Accumulator()
    for a in flip_set(psi, P):
        c, src, dst = single_arrow_labels(phi, P, a)
        acc.add(shuffle_sums(lambda_phi(psi, src), lambda_phi(phi, dst)), c)
    return lambda_phi(psi, P) - lambda_phi(phi, P) + acc.result()


def redif(P: Polygon) -> FormalSum:
    """``L2(P) - Lre(P) - sum_i L2(P^rt) shuffle Lre(P^rst)`` over root-ending arrows."""
    N = len(P)
    acc = Accumulator()
    for i in range(2, N):
        sp = split(P, Arrow(i, N))
        acc.add(shuffle_sums(lambda_phi(PHI2, sp.root_polygon), lambda_phi(PHI_RE, sp.cutoff_polygon)))
    return lambda_phi(PHI2, P) - lambda_phi(PHI_RE, P) - acc.result()


def orientsign(P: Polygon) -> FormalSum:
    n = P.weight
    return q_n(n, lambda_phi(PHI_RE, P) + lambda_phi(PHI2, tau(P)) * (-1) ** n)


def orientsign_weight2(P: Polygon) -> FormalSum:
    """Exact weight-two collapse: ``Lre(P) + L2(tau P) - P - tau P``."""
    return (lambda_phi(PHI_RE, P) + lambda_phi(PHI2, tau(P))
            - word_sum(P) - word_sum(tau(P)))


def tau_combined(P: Polygon) -> FormalSum:
    n = P.weight
    N = len(P)
    lhs = lambda_phi(PHI2, P) + lambda_phi(PHI2, tau(P)) * (-1) ** n
    acc = Accumulator()
    for i in range(2, n + 1):
        sp = split(P, Arrow(i, N))
        acc.add(shuffle_sums(lambda_phi(PHI_RE, sp.root_polygon),
                             lambda_phi(PHI_RE, tau(sp.cutoff_polygon))), (-1) ** (n - i))
    return q_n(n, lhs - acc.result())


def relate_rhs(P: Polygon) -> FormalSum:
    _, b, _ = arrow_classes(P)
    return lambda_phi(PHI4, P) + edgeswitch_rhs(PHI4, P, sorted(b))


def relate_exact_defect(P: Polygon) -> FormalSum:
    return lambda_phi(PHI2, P) - relate_rhs(P)


def relate(P: Polygon) -> FormalSum:
    return q_n(P.weight, relate_exact_defect(P))


def fvlin(P: Polygon) -> FormalSum:
    """First-vertex linear relation for ``P`` and its rotated counterpart.

    ``L4(P) - Lfv(P) = sum L4(P_a^l) shuffle Lfv(P_a^r)`` over arrows from
    vertex 1, and the same for ``sigma P`` with arrows from the last vertex
    and the rule ``phi_sigma_fv``; the two defects are added.
    """
    N = len(P)
    acc = Accumulator()
    for j in range(2, N):
        a = Arrow(1, j)
        if not is_nontrivial(N, a):
            continue
        sp = split(P, a)
        acc.add(shuffle_sums(lambda_phi(PHI4, sp.left), lambda_phi(PHI_FV, sp.right)))
    first = lambda_phi(PHI4, P) - lambda_phi(PHI_FV, P) - acc.result()
    S = sigma(P)
    acc = Accumulator()
    for j in range(1, N - 1):
        a = Arrow(N, j)
        if not is_nontrivial(N, a):
            continue
        sp = split(S, a)
        acc.add(shuffle_sums(lambda_phi(PHI4, sp.left), lambda_phi(PHI_SIGMA_FV, sp.right)))
    second = lambda_phi(PHI4, S) - lambda_phi(PHI_SIGMA_FV, S) - acc.result()
    return first + second


# --- first-vertex versus rotated first-vertex --------------------------------


def _marked_trees(rule: Rule, Q: Polygon, probe: Tuple[int, str]) -> List[Tuple[Tree, int]]:
    out = []
    for d in enumerate_dissections(Q):
        out.append((tree_of(rule, Q, d), regions(Q, d).region_at(*probe)))
    return out


def _graft_sum(labels: Sequence[Tuple[Polygon, int]], parts, root: bool) -> FormalSum:
    acc = Accumulator()
    graft = graft_root if root else graft_leaf
    for combo in itertools.product(*parts):
        for lab, c in labels:
            g = graft(lab, list(combo))
            if g is not None:
                acc.add(linearize(g), c)
    return acc.result()


def fv_ofv_sides(P: Polygon) -> Tuple[FormalSum, FormalSum, FormalSum]:
    """``(lhs, root-grafted sum, leaf-grafted sum)`` before the quotient."""
    N = len(P)
    n = N - 1
    lhs = lambda_phi(PHI_FV, P) - lambda_phi(PHI_SIGMA_FV, sigma(P))
    A = Polygon(P[1:])
    B = Polygon(tuple(P[1:n]) + (P[0],))
    root_part = Accumulator()
    for i in range(2, n + 1):
        s = [(Polygon((P[i - 1], P[N - 1])), 1), (Polygon((P[N - 1], P[i - 1])), -1)]
        a = Arrow(1, i - 1)
        if not is_nontrivial(len(A), a):
            parts = [_marked_trees(PHI_FV, A, (1, "start"))]
        else:
            sp = split(A, a)
            parts = [_marked_trees(PHI4, sp.right, sp.right_probe),
                     _marked_trees(PHI_FV, sp.left, sp.left_probe)]
        root_part.add(_graft_sum(s, parts, True))
    leaf_part = Accumulator()
    NB = len(B)
    for i in range(2, n + 1):
        s = [(Polygon((P[i - 1], P[0])), 1), (Polygon((P[0], P[i - 1])), -1)]
        a = Arrow(NB, i - 1)
        if not is_nontrivial(NB, a):
            parts = [_marked_trees(PHI_SIGMA_FV, B, (i - 1, "end"))]
        else:
            sp = split(B, a)
            parts = [_marked_trees(PHI4, sp.left, sp.left_probe),
                     _marked_trees(PHI_SIGMA_FV, sp.right, sp.right_probe)]
        leaf_part.add(_graft_sum(s, parts, False))
    return lhs, root_part.result(), leaf_part.result()


def fv_ofv(P: Polygon) -> FormalSum:
    lhs, rp, lp = fv_ofv_sides(P)
    return r_n(P.weight, lhs - rp + lp)


def fv_ofv_parts(P: Polygon) -> Dict[str, FormalSum]:
    """Defect after the quotient split by the number of word factors."""
    d = fv_ofv(P)
    out: Dict[str, Accumulator] = {}
    for w, c in d.raw_items():
        out.setdefault(f"length_{len(w)}", Accumulator()).add_term(w, c)
    return {k: v.result() for k, v in out.items()}


# --- coproduct of dissection sums ---------------------------------------------


def is_admissible_dissection(rule: Rule, P: Polygon, c: Iterable[Arrow]) -> bool:
    """Every vertex of the rule tree is a pure source or a pure sink."""
    t = tree_of(rule, P, c)
    tails = {u for u, _ in t.edges}
    heads = {v for _, v in t.edges}
    return not (tails & heads)


def _admis_rhs(rule: Rule, P: Polygon) -> FormalSum:
    from .algebra import EMPTY

    acc = Accumulator()
    lam = lambda_phi(rule, P)
    for w, c in lam.raw_items():
        acc.add_term((w, EMPTY), c)
        acc.add_term((EMPTY, w), c)
    for d in enumerate_dissections(P):
        if not d or not is_admissible_dissection(rule, P, d):
            continue
        t = tree_of(rule, P, d)
        tails = {u for u, _ in t.edges}
        left = shuffle_many(lambda_phi(rule, t.labels[k]) for k in range(t.size) if k in tails)
        right = shuffle_many(lambda_phi(rule, t.labels[k]) for k in range(t.size) if k not in tails)
        for u, p in left.raw_items():
            for v, q in right.raw_items():
                acc.add_term((u, v), t.coeff * p * q)
    return acc.result()


def admis_coproduct(rule: Rule, P: Polygon) -> FormalSum:
    """``Delta L_phi(P)`` minus the sum over admissible dissections."""
    from .algebra import coproduct_words

    return coproduct_words(lambda_phi(rule, P)) - _admis_rhs(rule, P)


# --- the root-ending rule is not closed under the coproduct -------------------


def cut_component(rule: Rule, P: Polygon, c: Arrow) -> FormalSum:
    """Part of ``Delta L_rule(P)`` whose cut is exactly the edge of ``c``."""
    acc = Accumulator()
    for d in enumerate_dissections(P):
        if c not in d:
            continue
        t = tree_of(rule, P, d)
        k = t.tags.index(c)
        u, v = t.edges[k]
        kept = [e for j, e in enumerate(t.edges) if j != k]
        # split vertices into the two sides of the cut edge
        side = {u}
        frontier = [u]
        while frontier:
            x = frontier.pop()
            for a, b in kept:
                for y, z in ((a, b), (b, a)):
                    if y == x and z not in side:
                        side.add(z)
                        frontier.append(z)
        src = Tree([t.labels[x] for x in sorted(side)],
                   [(sorted(side).index(a), sorted(side).index(b)) for a, b in kept if a in side and b in side])
        other = sorted(set(range(t.size)) - side)
        dst = Tree([t.labels[x] for x in other],
                   [(other.index(a), other.index(b)) for a, b in kept if a in other and b in other])
        for w1, p in linearize(src).raw_items():
            for w2, q in linearize(dst).raw_items():
                acc.add_term((w1, w2), t.coeff * p * q)
    return acc.result()


def _pair_product(x: FormalSum, y: FormalSum, c) -> FormalSum:
    acc = Accumulator()
    for u, p in x.raw_items():
        for v, q in y.raw_items():
            acc.add_term((u, v), c * p * q)
    return acc.result()


def phi_re_not_hopf(P: Polygon, c: Arrow) -> Dict[str, FormalSum]:
    """Compare the cut component of ``L_re`` with mixed and pure factorizations.

    Returns the defects ``component - sign L_re(src) (x) L_2(dst)`` (expected
    zero) and ``component - sign L_re(src) (x) L_re(dst)`` (expected nonzero).
    """
    comp = cut_component(PHI_RE, P, c)
    sgn, src, dst = single_arrow_labels(PHI_RE, P, c)
    mixed = _pair_product(lambda_phi(PHI_RE, src), lambda_phi(PHI2, dst), sgn)
    pure = _pair_product(lambda_phi(PHI_RE, src), lambda_phi(PHI_RE, dst), sgn)
    return {"mixed": comp - mixed, "pure": comp - pure}


# --- registry -----------------------------------------------------------------


def _phi_re_not_hopf_defect(P: Polygon) -> FormalSum:
    """Zero iff every non-root-ending cut is mixed and at least one is not pure."""
    from .polygon import nontrivial_arrows

    acc = Accumulator()
    witnessed = False
    for a in nontrivial_arrows(P):
        if a.j == len(P):
            continue
        res = phi_re_not_hopf(P, a)
        for (u, v), k in res["mixed"].raw_items():
            acc.add_term(Word(u + v), k)
        if res["pure"] != 0:
            witnessed = True
    out = acc.result()
    if not witnessed and P.weight >= 3:
        out = out + word_sum(P)  # marks the missing witness
    return out


IDENTITIES: Dict[str, Tuple[Callable[[Polygon], FormalSum], int, int]] = {
    # name: (defect function, min weight, max weight or 0 for unbounded)
    "trees_2I": (lambda P: trees_2I(P, PHI4), 1, 0),
    "edgeswitch_phi4_phi3": (lambda P: edgeswitch(PHI4, PHI3, P, sorted(arrow_classes(P)[1])), 1, 0),
    "edgeswitch_phi2_phi_re": (lambda P: edgeswitch(PHI2, PHI_RE, P), 1, 0),
    "lineartrees_phi2_phi_re": (lambda P: lineartrees(PHI2, PHI_RE, P), 1, 0),
    "lineartrees_leaf_phi2_phi_re": (lambda P: lineartrees_leaf(PHI2, PHI_RE, P), 1, 0),
    "lineartrees_phi4_phi_fv": (lambda P: lineartrees(PHI4, PHI_FV, P), 1, 0),
    "lineartrees_leaf_phi4_phi_fv": (lambda P: lineartrees_leaf(PHI4, PHI_FV, P), 1, 0),
    "redif": (redif, 1, 0),
    "orientsign": (orientsign, 1, 0),
    "tau_combined": (tau_combined, 1, 0),
    "relate": (relate, 1, 0),
    "fvlin": (fvlin, 1, 0),
    "fv_ofv": (fv_ofv, 2, 0),
    "admis_coproduct_phi2": (lambda P: admis_coproduct(PHI2, P), 1, 0),
    "admis_coproduct_phi4": (lambda P: admis_coproduct(PHI4, P), 1, 0),
    "phi_re_not_hopf": (_phi_re_not_hopf_defect, 1, 0),
}


# Diagnostics reachable through ``verify`` but not part of the table run by
# ``verify-all``: they report exact defects that are expected to be nonzero
# or intermediate sums from proofs.
DIAGNOSTICS: Dict[str, Tuple[Callable[[Polygon], FormalSum], int, int]] = {
    "relate_exact_defect": (relate_exact_defect, 1, 0),
    "orientsign_intermediate": (orientsign_weight2, 2, 2),
    "fv_ofv_unquotiented": (lambda P: (lambda l, r, b: l - r + b)(*fv_ofv_sides(P)), 2, 0),
}


def identity_names(include_diagnostics: bool = False) -> List[str]:
    names = list(IDENTITIES)
    if include_diagnostics:
        names += list(DIAGNOSTICS)
    return names


def verify(name: str, P: Polygon) -> IdentityReport:
    table = IDENTITIES if name in IDENTITIES else DIAGNOSTICS
    if name not in table:
        raise ValueError(f"unknown identity {name!r}")
    P = Polygon(P)
    fn, lo, hi = table[name]
    if P.weight < lo or (hi and P.weight > hi):
        raise ValueError(f"{name} is not supported at weight {P.weight}")
    t0 = time.perf_counter()
    defect = fn(P)
    ms = (time.perf_counter() - t0) * 1000
    parts = fv_ofv_parts(P) if name == "fv_ofv" else {}
    return IdentityReport(name, P, defect == 0, defect, ms, parts)
