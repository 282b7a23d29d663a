"""Decorated directed trees and forests, their coproduct and linearization.

A tree is a connected acyclic graph whose edges carry an orientation.
Roots are vertices with no incoming edge, leaves are vertices with no
outgoing edge.  Signs live in the tree's coefficient, never on vertices.

Text format used by the command line: a vertex is written ``[label]``
and may be followed by ``(...)`` holding its neighbours, each prefixed by
``>`` (edge from the vertex to the neighbour) or ``<`` (edge into the
vertex); neighbours are separated by spaces.  Example of a chain
``A -> B <- C``::

    [A](>[B](<[C]))

A forest is written as its trees joined by `` * ``; the empty forest
is ``1``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    EMPTY,
    Accumulator,
    FormalSum,
    Word,
    block,
    shuffle_sums,
    sort_key,
    term_text,
)

Edge = Tuple[int, int]


class Tree:
    """Decorated directed tree with a rational coefficient.

    ``labels[k]`` decorates vertex ``k``; ``edges`` are ``(u, v)`` pairs
    meaning ``u -> v``; ``tags`` optionally records, per edge, the arrow
    it came from.  Equality compares coefficient and isomorphism class.
    """

    __slots__ = ("labels", "edges", "coeff", "tags")

    def __init__(self, labels: Sequence[Any], edges: Iterable[Edge] = (), coeff=1,
                 tags: Optional[Sequence[Any]] = None):
        self.labels = tuple(labels)
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        self.coeff = Fraction(coeff)
        self.tags = None if tags is None else tuple(tags)
        n = len(self.labels)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge {(u, v)}")
        if self.tags is not None and len(self.tags) != len(self.edges):
            raise ValueError("one tag per edge expected")

    @property
    def size(self) -> int:
        return len(self.labels)

    def roots(self) -> List[int]:
        heads = {v for _, v in self.edges}
        return [k for k in range(self.size) if k not in heads]

    def leaves(self) -> List[int]:
        tails = {u for u, _ in self.edges}
        return [k for k in range(self.size) if k not in tails]

    def is_tree(self) -> bool:
        return self.size >= 1 and len(self.edges) == self.size - 1 and len(_components(self.size, self.edges)) == 1

    def shape(self) -> "TreeShape":
        if not self.is_tree():
            raise ValueError("not a connected tree")
        return TreeShape.of(self.labels, self.edges)

    def forest(self) -> "Forest":
        """Forest term of the underlying (possibly disconnected) graph."""
        return Forest.from_graph(self.labels, self.edges)

    def as_sum(self) -> FormalSum:
        return FormalSum.monomial(self.forest(), self.coeff)

    def with_coeff(self, c) -> "Tree":
        return Tree(self.labels, self.edges, c, self.tags)

    def text(self) -> str:
        body = self.forest().text()
        if self.coeff == 1:
            return body
        return f"{self.coeff} {body}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.coeff == other.coeff and self.forest() == other.forest()

    def __hash__(self) -> int:
        return hash((self.coeff, self.forest()))

    def __repr__(self) -> str:
        return f"Tree({self.text()})"


def _components(n: int, edges: Iterable[Edge]) -> List[List[int]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: Dict[int, List[int]] = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values())


class TreeShape:
    """Isomorphism class of a decorated directed tree.

    Stored with vertices renumbered in canonical order; ``key`` is the
    minimal recursive encoding over all choices of base vertex.
    """

    __slots__ = ("key", "labels", "edges")

    def __init__(self, key, labels, edges):
        self.key = key
        self.labels = labels
        self.edges = edges

    @classmethod
    def of(cls, labels: Sequence[Any], edges: Sequence[Edge]) -> "TreeShape":
        return _canonical(tuple(labels), tuple(edges))

    def sort_key(self):
        return self.key

    def text(self) -> str:
        nbrs: Dict[int, List[Tuple[str, int]]] = {k: [] for k in range(len(self.labels))}
        for u, v in self.edges:
            nbrs[u].append((">", v))
            nbrs[v].append(("<", u))

        def render(v: int, parent: Optional[int]) -> str:
            s = f"[{term_text(self.labels[v])}]"
            kids = [f"{d}{render(c, v)}" for d, c in nbrs[v] if c != parent]
            if kids:
                s += "(" + " ".join(kids) + ")"
            return s

        return render(0, None)

    def tree(self, coeff=1) -> Tree:
        return Tree(self.labels, self.edges, coeff)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TreeShape) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"TreeShape({self.text()})"


@lru_cache(maxsize=1 << 16)
def _canonical(labels: Tuple[Any, ...], edges: Tuple[Edge, ...]) -> TreeShape:
    n = len(labels)
    nbrs: Dict[int, List[Tuple[int, int]]] = {k: [] for k in range(n)}
    for u, v in edges:
        nbrs[u].append((0, v))  # 0: edge leaves this vertex
        nbrs[v].append((1, u))  # 1: edge enters this vertex
    lkeys = [sort_key(x) for x in labels]

    def enc(v: int, parent: Optional[int]):
        kids = sorted((d, enc(c, v)) for d, c in nbrs[v] if c != parent)
        return (lkeys[v], tuple(kids))

    best_key, best_v = None, None
    for v in range(n):
        k = enc(v, None)
        if best_key is None or k < best_key:
            best_key, best_v = k, v

    # renumber by a walk that follows the encoding order
    order: List[int] = []
    new_edges: List[Edge] = []

    def walk(v: int, parent: Optional[int]) -> int:
        me = len(order)
        order.append(v)
        kids = sorted(((d, enc(c, v)), c) for d, c in nbrs[v] if c != parent)
        for (d, _), c in kids:
            k = walk(c, v)
            new_edges.append((me, k) if d == 0 else (k, me))
        return me

    walk(best_v, None)
    new_labels = tuple(labels[v] for v in order)
    return TreeShape(best_key, new_labels, tuple(sorted(new_edges)))


class Forest(tuple):
    """Commutative product of tree shapes; the empty forest is the unit."""

    __slots__ = ()

    def __new__(cls, shapes: Iterable[TreeShape] = ()):
        return super().__new__(cls, tuple(sorted(shapes, key=lambda s: s.key)))

    @classmethod
    def from_graph(cls, labels: Sequence[Any], edges: Sequence[Edge]) -> "Forest":
        labels = tuple(labels)
        comps = _components(len(labels), edges)
        shapes = []
        for comp in comps:
            idx = {v: k for k, v in enumerate(comp)}
            sub_edges = tuple((idx[u], idx[v]) for u, v in edges if u in idx)
            shapes.append(TreeShape.of(tuple(labels[v] for v in comp), sub_edges))
        return cls(shapes)

    def graph(self) -> Tuple[Tuple[Any, ...], Tuple[Edge, ...]]:
        """Disjoint union as one vertex list and edge list."""
        labels: List[Any] = []
        edges: List[Edge] = []
        for s in self:
            off = len(labels)
            labels.extend(s.labels)
            edges.extend((u + off, v + off) for u, v in s.edges)
        return tuple(labels), tuple(edges)

    def __mul__(self, other: "Forest") -> "Forest":
        return Forest(tuple(self) + tuple(other))

    def sort_key(self):
        return (len(self), tuple(s.key for s in self))

    def text(self) -> str:
        if not self:
            return "1"
        return " * ".join(s.text() for s in self)

    def __repr__(self) -> str:
        return f"Forest({self.text()})"


UNIT = Forest(())


def tree_from_text(text: str) -> Tree:
    """Parse the bracket format described in the module docstring."""
    labels: List[str] = []
    edges: List[Edge] = []
    pos = 0
    s = text.strip()

    def expect(ch: str) -> None:
        nonlocal pos
        if pos >= len(s) or s[pos] != ch:
            raise ValueError(f"expected {ch!r} at {pos} in {text!r}")
        pos += 1

    def vertex() -> int:
        nonlocal pos
        expect("[")
        end = s.find("]", pos)
        if end < 0:
            raise ValueError(f"unclosed label in {text!r}")
        me = len(labels)
        labels.append(s[pos:end])
        pos = end + 1
        if pos < len(s) and s[pos] == "(":
            pos += 1
            while True:
                while pos < len(s) and s[pos] == " ":
                    pos += 1
                if pos < len(s) and s[pos] == ")":
                    pos += 1
                    break
                if pos >= len(s) or s[pos] not in "<>":
                    raise ValueError(f"expected '>' or '<' at {pos} in {text!r}")
                d = s[pos]
                pos += 1
                c = vertex()
                edges.append((me, c) if d == ">" else (c, me))
        return me

    vertex()
    if pos != len(s):
        raise ValueError(f"trailing text in {text!r}")
    return Tree(labels, edges)


def label_polygons(t: Tree) -> Tree:
    """Turn comma separated text labels into polygons."""
    from .polygon import Polygon

    return Tree([Polygon.parse(x) if isinstance(x, str) else x for x in t.labels],
                t.edges, t.coeff, t.tags)


# --- admissible cuts and coproduct ------------------------------------------


def is_admissible(n: int, edges: Sequence[Edge], cut: Iterable[int]) -> bool:
    cut = set(cut)
    kept = [e for k, e in enumerate(edges) if k not in cut]
    comp_of = {}
    for c, comp in enumerate(_components(n, kept)):
        for v in comp:
            comp_of[v] = c
    kind: Dict[int, str] = {}
    for k in cut:
        u, v = edges[k]
        for c, tag in ((comp_of[u], "out"), (comp_of[v], "in")):
            if kind.setdefault(c, tag) != tag:
                return False
    return True


def admissible_cuts(T: Tree) -> List[Tuple[int, ...]]:
    """All admissible edge subsets (edge indices), the empty cut first."""
    m = len(T.edges)
    out = []
    for size in range(m + 1):
        for cut in combinations(range(m), size):
            if is_admissible(T.size, T.edges, cut):
                out.append(cut)
    return out


def cut_parts(T: Tree, cut: Iterable[int]) -> Tuple[Forest, Forest]:
    """``(R(c), L(c))``: components that cut edges leave / enter."""
    cut = set(cut)
    kept = [e for k, e in enumerate(T.edges) if k not in cut]
    comps = _components(T.size, kept)
    comp_of = {v: c for c, comp in enumerate(comps) for v in comp}
    sources = {comp_of[T.edges[k][0]] for k in cut}
    r_vs = sorted(v for v in range(T.size) if comp_of[v] in sources)
    l_vs = sorted(v for v in range(T.size) if comp_of[v] not in sources)
    return _induced(T.labels, T.edges, r_vs), _induced(T.labels, T.edges, l_vs)


def _induced(labels, edges, vs) -> Forest:
    idx = {v: k for k, v in enumerate(vs)}
    sub = [(idx[u], idx[v]) for u, v in edges if u in idx and v in idx]
    return Forest.from_graph([labels[v] for v in vs], sub)


def coproduct(T: Tree) -> FormalSum:
    """``T (x) 1 + 1 (x) T + sum over nonempty admissible cuts R(c) (x) L(c)``."""
    acc = Accumulator()
    F = T.forest()
    acc.add_term((F, UNIT), T.coeff)
    acc.add_term((UNIT, F), T.coeff)
    for cut in admissible_cuts(T):
        if cut:
            acc.add_term(cut_parts(T, cut), T.coeff)
    return acc.result()


@lru_cache(maxsize=1 << 14)
def _shape_coproduct(s: TreeShape) -> FormalSum:
    return coproduct(s.tree())


def tensor_mul(x: FormalSum, y: FormalSum) -> FormalSum:
    """Factorwise forest product on sums of ``(Forest, Forest)`` pairs."""
    acc = Accumulator()
    for (a1, a2), p in x.raw_items():
        for (b1, b2), q in y.raw_items():
            acc.add_term((a1 * b1, a2 * b2), p * q)
    return acc.result()


def coproduct_forest(F: Forest) -> FormalSum:
    """Multiplicative extension of :func:`coproduct`."""
    out = FormalSum.monomial((UNIT, UNIT))
    for s in F:
        out = tensor_mul(out, _shape_coproduct(s))
    return out


def coproduct_sum(x: FormalSum) -> FormalSum:
    """Coproduct of a formal sum of forests."""
    return x.map(coproduct_forest)


# --- linearization ----------------------------------------------------------


def _extensions(labels: Tuple[Any, ...], edges: Tuple[Edge, ...]) -> List[Word]:
    n = len(labels)
    indeg = [0] * n
    succ: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        indeg[v] += 1
        succ[u].append(v)
    out: List[Word] = []
    path: List[int] = []

    def walk() -> None:
        if len(path) == n:
            out.append(Word(block(labels[v]) for v in path))
            return
        for v in range(n):
            if indeg[v] == 0 and v not in path:
                path.append(v)
                for w in succ[v]:
                    indeg[w] -= 1
                walk()
                for w in succ[v]:
                    indeg[w] += 1
                path.pop()

    walk()
    return out


def linear_extensions(x) -> List[Word]:
    """Linear extensions of a :class:`Tree` or :class:`Forest` as words."""
    if isinstance(x, Tree):
        return _extensions(x.labels, x.edges)
    labels, edges = Forest(x).graph()
    return _extensions(labels, edges)


@lru_cache(maxsize=1 << 16)
def _lin_shape(s: TreeShape) -> FormalSum:
    return FormalSum((w, 1) for w in _extensions(s.labels, s.edges))


@lru_cache(maxsize=1 << 16)
def _lin_forest(F: Forest) -> FormalSum:
    out = FormalSum.monomial(EMPTY)
    for s in F:
        out = shuffle_sums(out, _lin_shape(s))
    return out


def linearize(x) -> FormalSum:
    """The map from trees to words: sum over linear extensions.

    Accepts a :class:`Tree`, a :class:`Forest` or a formal sum of forests.
    """
    if isinstance(x, Tree):
        return _lin_forest(x.forest()) * x.coeff
    if isinstance(x, Forest):
        return _lin_forest(x)
    if isinstance(x, FormalSum):
        return x.map(_lin_forest)
    raise TypeError(f"cannot linearize {type(x).__name__}")


def linearize_pairs(x: FormalSum) -> FormalSum:
    """Apply linearization to both factors of ``(Forest, Forest)`` terms."""
    acc = Accumulator()
    for (a, b), c in x.raw_items():
        la, lb = _lin_forest(a), _lin_forest(b)
        for u, p in la.raw_items():
            for v, q in lb.raw_items():
                acc.add_term((u, v), c * p * q)
    return acc.result()


# --- edge flips and grafting ------------------------------------------------


def flip_edges(T: Tree, I: Iterable[int]) -> Tree:
    I = set(I)
    if any(not 0 <= k < len(T.edges) for k in I):
        raise ValueError("unknown edge")
    edges = [(v, u) if k in I else (u, v) for k, (u, v) in enumerate(T.edges)]
    return Tree(T.labels, edges, T.coeff, T.tags)


def delete_edges(T: Tree, I: Iterable[int]) -> Forest:
    I = set(I)
    return Forest.from_graph(T.labels, [e for k, e in enumerate(T.edges) if k not in I])


def _graft(s: Any, parts: Sequence[Tuple[Tree, Optional[int]]], outward: bool) -> Optional[Tree]:
    labels: List[Any] = [s]
    edges: List[Edge] = []
    coeff = Fraction(1)
    for t, mark in parts:
        if mark is not None and not 0 <= mark < t.size:
            return None
        off = len(labels)
        labels.extend(t.labels)
        edges.extend((u + off, v + off) for u, v in t.edges)
        coeff *= t.coeff
        if mark is not None:
            edges.append((0, mark + off) if outward else (mark + off, 0))
    return Tree(labels, edges, coeff)


def graft_root(s: Any, parts: Sequence[Tuple[Tree, Optional[int]]]) -> Optional[Tree]:
    """New root ``s`` with an edge to each marked vertex.

    A part whose mark is ``None`` is carried along unattached.  Returns
    ``None`` (the zero tree) when a mark is not a vertex of its tree.
    """
    return _graft(s, parts, True)


def graft_leaf(s: Any, parts: Sequence[Tuple[Tree, int]]) -> Optional[Tree]:
    """New leaf ``s`` with an edge from each marked vertex."""
    return _graft(s, parts, False)


def _marked_union(parts):
    labels: List[Any] = []
    edges: List[Edge] = []
    marks: List[int] = []
    coeff = Fraction(1)
    for t, mark in parts:
        off = len(labels)
        labels.extend(t.labels)
        edges.extend((u + off, v + off) for u, v in t.edges)
        if mark is not None:
            marks.append(mark + off)
        coeff *= t.coeff
    return labels, edges, marks, coeff


def _closed_sets(n: int, edges: Sequence[Edge]) -> List[frozenset]:
    """Vertex sets closed under predecessors (prefix sets of linear orders)."""
    preds: List[set] = [set() for _ in range(n)]
    for u, v in edges:
        preds[v].add(u)
    out = []
    for size in range(n + 1):
        for U in combinations(range(n), size):
            U = frozenset(U)
            if all(preds[v] <= U for v in U):
                out.append(U)
    return out


def _restrict(labels, edges, vs, marks, s, outward):
    """Graph on ``vs`` with ``s`` attached to the marks that lie in ``vs``."""
    vs = sorted(vs)
    idx = {v: k + 1 for k, v in enumerate(vs)}
    new_labels = [s] + [labels[v] for v in vs]
    new_edges = [(idx[u], idx[v]) for u, v in edges if u in idx and v in idx]
    for m in marks:
        if m in idx:
            new_edges.append((0, idx[m]) if outward else (idx[m], 0))
    return Forest.from_graph(new_labels, new_edges)


def hochschild_defect_root(s: Any, parts: Sequence[Tuple[Tree, int]]) -> FormalSum:
    """``Delta L B_r - [(L B_r (x) L) Delta + 1 (x) L B_r]`` on marked trees.

    Pieces of the left factor that do not contain a mark are left
    unattached, as the new root only reaches the marked vertices.
    """
    return _defect(s, parts, True)


def hochschild_defect_leaf(s: Any, parts: Sequence[Tuple[Tree, int]]) -> FormalSum:
    """``Delta L B_l - [(L (x) L B_l) Delta + L B_l (x) 1]`` on marked trees."""
    return _defect(s, parts, False)


def _defect(s, parts, outward: bool) -> FormalSum:
    from .algebra import coproduct_words

    g = _graft(s, parts, outward)
    if g is None:
        return FormalSum.zero()
    lhs = coproduct_words(linearize(g))
    labels, edges, marks, coeff = _marked_union(parts)
    n = len(labels)
    acc = Accumulator()
    whole = linearize(g)
    for w, c in whole.raw_items():
        acc.add_term((EMPTY, w) if outward else (w, EMPTY), c)
    for U in _closed_sets(n, edges):
        rest = frozenset(range(n)) - U
        if outward:
            left = _restrict(labels, edges, U, marks, s, True)
            right = _induced(labels, edges, sorted(rest))
        else:
            left = _induced(labels, edges, sorted(U))
            right = _restrict(labels, edges, rest, marks, s, False)
        for u, p in _lin_forest(left).raw_items():
            for v, q in _lin_forest(right).raw_items():
                acc.add_term((u, v), coeff * p * q)
    return lhs - acc.result()
