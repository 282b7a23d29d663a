"""Decorated polygons, arrows, dissections and region decompositions.

Conventions (weight ``n`` polygon, ``N = n + 1`` sides, 1-based):

* side ``N`` is the root side; vertex ``i`` sits between sides ``i-1`` and
  ``i`` (cyclically), so vertex 1 is the first vertex;
* an arrow ``(i, j)`` runs from vertex ``i`` to the interior of side ``j``
  and is trivial when ``j`` is adjacent to ``i``;
* geometry is done on a circle of circumference ``2N``: vertex ``v`` sits at
  ``2v`` and side ``j`` covers ``(2j, 2j + 2)``.  Several arrows may land on
  one side; their landing order is the only non-crossing one.

The region to the right of an arrow is the one met walking
counterclockwise from its start vertex to its landing point; the other
region is on its left.  For a forward arrow the left region is the root
polygon, for a backward arrow the right region is.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple


class Polygon(tuple):
    """Side labels read counterclockwise, root side last."""

    __slots__ = ()

    def __new__(cls, sides: Iterable[str]):
        sides = tuple(str(s) for s in sides)
        if len(sides) < 2:
            raise ValueError("a polygon needs at least two sides")
        return super().__new__(cls, sides)

    @classmethod
    def parse(cls, text: str) -> "Polygon":
        parts = [p.strip() for p in text.split(",")]
        if any(not p for p in parts):
            raise ValueError(f"bad polygon text {text!r}")
        return cls(parts)

    @property
    def weight(self) -> int:
        return len(self) - 1

    @property
    def root(self) -> str:
        return self[-1]

    def sort_key(self):
        return (len(self), tuple(self))

    def text(self) -> str:
        return ",".join(self)

    def __repr__(self) -> str:
        return f"Polygon({self.text()})"


def tau(P: Polygon) -> Polygon:
    """Reverse orientation: ``r1..rn r(n+1) -> rn..r1 r(n+1)``."""
    return Polygon(tuple(reversed(P[:-1])) + (P[-1],))


def sigma(P: Polygon) -> Polygon:
    """Rotate labels one step: ``1 2 .. n+1 -> 2 .. n+1 1``."""
    return Polygon(tuple(P[1:]) + (P[0],))


class Arrow(NamedTuple):
    i: int  # start vertex
    j: int  # end side

    def text(self) -> str:
        return f"{self.i}->{self.j}"

    def sort_key(self):
        return (self.i, self.j)

    @classmethod
    def parse(cls, text: str) -> "Arrow":
        m = re.fullmatch(r"\s*(\d+)\s*->\s*(\d+)\s*", text)
        if not m:
            raise ValueError(f"bad arrow text {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))


def _prev(i: int, N: int) -> int:
    return N if i == 1 else i - 1


def is_nontrivial(N: int, a: Arrow) -> bool:
    return 1 <= a.i <= N and 1 <= a.j <= N and a.j != a.i and a.j != _prev(a.i, N)


def is_backward(a: Arrow) -> bool:
    return a.j < a.i


def is_root_ending(N: int, a: Arrow) -> bool:
    return a.j == N


def _check(P: Polygon, a: Arrow) -> int:
    N = len(P)
    if not is_nontrivial(N, a):
        raise ValueError(f"arrow {a.text()} is trivial or out of range in a {N}-gon")
    return N


@lru_cache(maxsize=None)
def _nontrivial(N: int) -> Tuple[Arrow, ...]:
    return tuple(Arrow(i, j) for i in range(1, N + 1) for j in range(1, N + 1)
                 if is_nontrivial(N, Arrow(i, j)))


def nontrivial_arrows(P: Polygon) -> List[Arrow]:
    return list(_nontrivial(len(P)))


# --- circle geometry -------------------------------------------------------


def _landing(N: int, a: Arrow) -> Fraction:
    # distance of the start vertex from the far end of the landing side,
    # counted counterclockwise; larger distance lands nearer vertex j
    d = (a.i - (a.j + 1)) % N
    return Fraction(2 * a.j) + Fraction(2 * (N - d), N)


def _in_arc(x: Fraction, a: Fraction, b: Fraction, L: int) -> bool:
    """True when ``x`` lies strictly inside the ccw arc from ``a`` to ``b``."""
    dx = (x - a) % L
    db = (b - a) % L
    return 0 < dx < db


@lru_cache(maxsize=None)
def _cross(N: int, a: Arrow, b: Arrow) -> bool:
    if a.i == b.i or a.j == b.j:
        return False
    L = 2 * N
    a0, a1 = Fraction(2 * a.i), _landing(N, a)
    b0, b1 = Fraction(2 * b.i), _landing(N, b)
    return _in_arc(b0, a0, a1, L) != _in_arc(b1, a0, a1, L)


def arrows_intersect(P: Polygon, a: Arrow, b: Arrow) -> bool:
    N = _check(P, a)
    _check(P, b)
    return _cross(N, a, b)


class Dissection(tuple):
    """Canonically sorted tuple of pairwise non-crossing arrows."""

    __slots__ = ()

    def __new__(cls, arrows: Iterable[Arrow] = ()):
        return super().__new__(cls, tuple(sorted(set(Arrow(*a) for a in arrows))))

    def text(self) -> str:
        return "{" + ",".join(a.text() for a in self) + "}"

    def sort_key(self):
        return (len(self), tuple(self))

    @classmethod
    def parse(cls, text: str) -> "Dissection":
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"bad dissection text {text!r}")
        body = body[1:-1].strip()
        if not body:
            return cls(())
        return cls(Arrow.parse(p) for p in body.split(","))


def is_dissection(P: Polygon, d: Iterable[Arrow]) -> bool:
    N = len(P)
    d = list(d)
    if any(not is_nontrivial(N, a) for a in d):
        return False
    return all(not _cross(N, a, b) for k, a in enumerate(d) for b in d[k + 1:])


@lru_cache(maxsize=None)
def _dissections(N: int) -> Tuple[Dissection, ...]:
    arrows = _nontrivial(N)
    out: List[Dissection] = []

    def walk(start: int, chosen: List[Arrow]) -> None:
        out.append(Dissection(chosen))
        for k in range(start, len(arrows)):
            a = arrows[k]
            if all(not _cross(N, a, b) for b in chosen):
                chosen.append(a)
                walk(k + 1, chosen)
                chosen.pop()

    walk(0, [])
    return tuple(sorted(out, key=lambda d: d.sort_key()))


def enumerate_dissections(P: Polygon) -> List[Dissection]:
    """All dissections, the empty one included, in canonical order."""
    return list(_dissections(len(P)))


# --- single-arrow split ----------------------------------------------------


@dataclass(frozen=True)
class Split:
    """The two subpolygons produced by contracting one arrow.

    ``*_map`` send a remaining arrow of the parent (given as an arrow of
    the parent) to its coordinates in the subpolygon; ``*_probe`` is the
    boundary point ``(side, "start" | "end")`` of the subpolygon that
    touches the contracted arrow.
    """

    arrow: Arrow
    left: Polygon
    right: Polygon
    left_is_root: bool
    left_probe: Tuple[int, str]
    right_probe: Tuple[int, str]

    @property
    def root_polygon(self) -> Polygon:
        return self.left if self.left_is_root else self.right

    @property
    def cutoff_polygon(self) -> Polygon:
        return self.right if self.left_is_root else self.left


def _rotation(m: int, r: int):
    """Index map of a polygon with ``m`` sides rotated so side ``r`` is last."""
    return lambda k: (k - r - 1) % m + 1


def _frames(N: int, a: Arrow):
    """Index maps for the right (R) and left (L) regions of ``a``.

    Returns ``(R_sides, R_vmap, R_smap, L_sides, L_vmap, L_smap)`` where the
    ``*_sides`` list original side indices in subpolygon order and the maps
    send original vertex / side indices into the subpolygon.
    """
    i, j = a
    back = is_backward(a)
    mR = (j - i) % N + 1
    R_orig = [(i + k - 2) % N + 1 for k in range(1, mR + 1)]  # sides i..j
    mL = (i - j) % N
    L_orig = [(j + k - 2) % N + 1 for k in range(1, mL + 1)]  # sides j..i-1

    if back:
        rR = R_orig.index(N) + 1
        rL = 1
    else:
        rR = mR
        rL = L_orig.index(N) + 1
    rotR = _rotation(mR, rR)
    rotL = _rotation(mL, rL)

    def R_v(v: int) -> int:
        k = 1 if v == i else (v - i) % N + 1
        return rotR(k)

    def R_s(s: int) -> int:
        return rotR((s - i) % N + 1)

    def L_v(v: int) -> int:
        k = 1 if v == i else (v - j) % N + 1
        return rotL(k)

    def L_s(s: int) -> int:
        return rotL((s - j) % N + 1)

    R_sides = [0] * mR
    for s in R_orig:
        R_sides[R_s(s) - 1] = s
    L_sides = [0] * mL
    for s in L_orig:
        L_sides[L_s(s) - 1] = s
    return R_sides, R_v, R_s, L_sides, L_v, L_s


def split(P: Polygon, a: Arrow) -> Split:
    """Contract ``a``; return root/cutoff and left/right subpolygons."""
    N = _check(P, a)
    R_sides, _, R_s, L_sides, _, L_s = _frames(N, a)
    left = Polygon(P[s - 1] for s in L_sides)
    right = Polygon(P[s - 1] for s in R_sides)
    return Split(
        arrow=a,
        left=left,
        right=right,
        left_is_root=not is_backward(a),
        left_probe=(L_s(a.j), "start"),
        right_probe=(R_s(a.j), "end"),
    )


def arrow_side(P: Polygon, a: Arrow, b: Arrow) -> str:
    """``"right"`` or ``"left"``: the region of ``a`` that contains ``b``."""
    N = len(P)
    L = 2 * N
    inside = _in_arc(_landing(N, b), Fraction(2 * a.i), _landing(N, a), L)
    return "right" if inside else "left"


def split_dissection(P: Polygon, a: Arrow, d: Iterable[Arrow]):
    """Split ``P`` along ``a`` and carry the other arrows of ``d`` along.

    Returns ``(split, left_arrows, right_arrows)`` where each arrow list holds
    ``(sub_arrow, original_arrow)`` pairs in subpolygon coordinates.
    """
    N = _check(P, a)
    sp = split(P, a)
    _, R_v, R_s, _, L_v, L_s = _frames(N, a)
    lefts, rights = [], []
    for b in d:
        if b == a:
            continue
        if arrow_side(P, a, b) == "right":
            rights.append((Arrow(R_v(b.i), R_s(b.j)), b))
        else:
            lefts.append((Arrow(L_v(b.i), L_s(b.j)), b))
    return sp, lefts, rights


def chi(P: Polygon, a: Arrow, d: Optional[Iterable[Arrow]] = None) -> int:
    """Weight of the cutoff polygon of ``a``.

    With a dissection ``d`` containing ``a`` the cutoff polygon is the
    region of ``d`` on the far side of ``a`` from the root region.
    """
    if d is None:
        return split(P, a).cutoff_polygon.weight
    dec = regions(P, d)
    return dec.regions[dec.info(a).cutoff_side].weight


def arrow_classes(P: Polygon):
    """``(re, b, fv)``: root-ending, backward and first-vertex arrows."""
    N = len(P)
    arrows = _nontrivial(N)
    re_ = frozenset(a for a in arrows if a.j == N)
    b = frozenset(a for a in arrows if a.j < a.i)
    fv = frozenset(a for a in arrows if a.i == 1)
    return re_, b, fv


def tau_arrow(P: Polygon, a: Arrow) -> Arrow:
    """Image of ``a`` in ``tau(P)``."""
    N = _check(P, a)
    i2 = N + 1 - a.i
    j2 = N if a.j == N else N - a.j
    return Arrow(i2, j2)


def sigma_arrow(P: Polygon, a: Arrow) -> Arrow:
    """Image of ``a`` in ``sigma(P)``: both indices move back one step."""
    N = _check(P, a)
    return Arrow(_prev(a.i, N), _prev(a.j, N))


# --- region decomposition --------------------------------------------------


@dataclass(frozen=True)
class ArrowInfo:
    arrow: Arrow
    left: int
    right: int
    root_side: int  # region on the root polygon side
    cutoff_side: int


@dataclass(frozen=True)
class RegionDecomposition:
    polygon: Polygon
    dissection: Dissection
    regions: Tuple[Polygon, ...]
    contains_root_side: Tuple[bool, ...]
    contains_first_vertex: Tuple[bool, ...]
    root_region: int
    arrows: Tuple[ArrowInfo, ...]
    parent: Tuple[Optional[int], ...]  # index into ``arrows`` of each region's parent arrow
    _probe: Dict[Tuple[int, str], int]

    def info(self, a: Arrow) -> ArrowInfo:
        for x in self.arrows:
            if x.arrow == a:
                return x
        raise KeyError(a)

    def region_at(self, side: int, where: str) -> int:
        """Region holding the start or end of side ``side`` of the polygon."""
        return self._probe[(side, where)]

    def children(self, r: int) -> List[int]:
        out = []
        for k, x in enumerate(self.arrows):
            if x.root_side == r:
                out.append(x.cutoff_side)
        return out

    def subtree(self, r: int) -> List[int]:
        out, stack = [], [r]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self.children(v))
        return out


@lru_cache(maxsize=1 << 16)
def _decompose(N: int, d: Dissection):
    """Label-free part of the region decomposition (depends only on N, d)."""
    L = 2 * N
    # boundary points: vertices and landing points, in ccw order
    points: List[Tuple[Fraction, str, object]] = [(Fraction(2 * v), "v", v) for v in range(1, N + 1)]
    lands = {a: _landing(N, a) for a in d}
    points += [(x, "x", a) for a, x in lands.items()]
    points.sort(key=lambda p: p[0])
    chords = [(Fraction(2 * a.i), lands[a]) for a in d]

    # pieces: (side, start_pos, end_pos) between consecutive points
    pieces = []
    for k, (pos, kind, obj) in enumerate(points):
        nxt = points[(k + 1) % len(points)][0]
        if nxt <= pos:
            nxt += L
        side = int(pos // 2) if pos < L + 2 else int((pos - L) // 2)
        side = (side - 1) % N + 1
        pieces.append((side, pos, nxt))

    def signature(p: Fraction) -> Tuple[bool, ...]:
        return tuple(_in_arc(p, c0, c1, L) for c0, c1 in chords)

    region_of_sig: Dict[Tuple[bool, ...], int] = {}
    region_pieces: List[List[Tuple[int, Fraction]]] = []
    piece_region = []
    for side, p0, p1 in pieces:
        mid = (p0 + p1) / 2
        sig = signature(mid % L)
        if sig not in region_of_sig:
            region_of_sig[sig] = len(region_pieces)
            region_pieces.append([])
        r = region_of_sig[sig]
        region_pieces[r].append((side, p0))
        piece_region.append(r)
    if len(region_pieces) != len(d) + 1:
        raise ValueError("inconsistent dissection")

    # probes: start and end of each side
    probe: Dict[Tuple[int, str], int] = {}
    for k, (side, p0, p1) in enumerate(pieces):
        if p0 == 2 * side or p0 == 2 * side - L:
            probe[(side, "start")] = piece_region[k]
        if p1 % L == (2 * side + 2) % L:
            probe[(side, "end")] = piece_region[k]
    root_region = probe[(N, "end")]

    # arrow adjacency
    infos = []
    for a in d:
        x = lands[a]
        k_after = next(k for k, p in enumerate(pieces) if p[1] == x)
        k_before = (k_after - 1) % len(pieces)
        infos.append((a, piece_region[k_after], piece_region[k_before]))

    # orient dual tree from the root region
    adj: Dict[int, List[Tuple[int, int]]] = {r: [] for r in range(len(region_pieces))}
    for idx, (a, l, r) in enumerate(infos):
        adj[l].append((r, idx))
        adj[r].append((l, idx))
    parent: List[Optional[int]] = [None] * len(region_pieces)
    toward_root: Dict[int, int] = {}
    seen = {root_region}
    stack = [root_region]
    while stack:
        u = stack.pop()
        for v, idx in adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = idx
                toward_root[idx] = u
                stack.append(v)
    if len(seen) != len(region_pieces):
        raise ValueError("region adjacency is not a tree")

    arrow_infos = []
    for idx, (a, l, r) in enumerate(infos):
        rs = toward_root[idx]
        cs = r if rs == l else l
        arrow_infos.append(ArrowInfo(a, l, r, rs, cs))

    # side lists of each region, rotated so its root side is last
    region_sides = []
    for r, pcs in enumerate(region_pieces):
        sides = [s for s, _ in sorted(pcs, key=lambda t: t[1])]
        if parent[r] is None:
            root_side = N
        else:
            root_side = arrow_infos[parent[r]].arrow.j
        # walk ccw starting from the piece right after the root piece
        k = sides.index(root_side)
        sides = sides[k + 1:] + sides[:k + 1]
        region_sides.append(tuple(sides))

    first_vertex = tuple(
        r == probe[(N, "end")] or r == probe[(1, "start")] for r in range(len(region_pieces))
    )
    has_root_side = tuple(N in s for s in region_sides)
    return (tuple(region_sides), root_region, tuple(arrow_infos), tuple(parent),
            probe, has_root_side, first_vertex)


def regions(P: Polygon, d: Iterable[Arrow] = ()) -> RegionDecomposition:
    d = Dissection(d)
    N = len(P)
    if not is_dissection(P, d):
        raise ValueError(f"{d.text()} is not a dissection of a {N}-gon")
    sides, root, infos, parent, probe, has_root, first = _decompose(N, d)
    polys = tuple(Polygon(P[s - 1] for s in ss) for ss in sides)
    # only the region holding the root piece next to the first vertex counts
    # as containing the root side
    root_flags = tuple(r == root for r in range(len(polys)))
    return RegionDecomposition(P, d, polys, root_flags, first, root, infos, parent, probe)
