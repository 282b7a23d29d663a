"""Exact formal sums, wedge blocks and the shuffle word algebra.

Scalars are :class:`fractions.Fraction`.  A :class:`FormalSum` is an
immutable map from basis terms to nonzero rationals; every operation
collects eagerly, so a stored coefficient is never zero.

Words are tuples of :class:`WedgeBlock` values.  A wedge block is the
exterior product of a few polygons, kept sorted; the sign of the sorting
permutation is moved into the surrounding coefficient when the block is
built with :meth:`WedgeBlock.build`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Tuple, Union

Scalar = Union[int, Fraction]


def sort_key(x: Any):
    """Canonical ordering key shared by every basis type."""
    k = getattr(x, "sort_key", None)
    if k is not None:
        return k()
    if isinstance(x, tuple):
        return tuple(sort_key(e) for e in x)
    return x


def term_text(x: Any) -> str:
    t = getattr(x, "text", None)
    if t is not None:
        return t()
    if isinstance(x, tuple):
        return " (x) ".join(term_text(e) for e in x)
    return str(x)


def fraction_text(q: Fraction) -> str:
    return str(Fraction(q))


class FormalSum:
    """Finite rational linear combination of hashable terms."""

    __slots__ = ("_c", "_hash")

    def __init__(self, data: Union[None, Dict[Any, Scalar], Iterable[Tuple[Any, Scalar]]] = None):
        c: Dict[Any, Fraction] = {}
        if data is not None:
            items = data.items() if isinstance(data, dict) else data
            for t, v in items:
                if v:
                    c[t] = c.get(t, 0) + v
        self._c = {t: Fraction(v) for t, v in c.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[Any, Fraction]) -> "FormalSum":
        # caller guarantees no zero coefficients
        s = cls.__new__(cls)
        s._c = c
        s._hash = None
        return s

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls._raw({})

    @classmethod
    def monomial(cls, term: Any, coeff: Scalar = 1) -> "FormalSum":
        if not coeff:
            return cls.zero()
        return cls._raw({term: Fraction(coeff)})

    # container protocol
    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.terms())

    def __contains__(self, term: Any) -> bool:
        return term in self._c

    def coeff(self, term: Any) -> Fraction:
        return self._c.get(term, Fraction(0))

    def terms(self) -> List[Any]:
        return sorted(self._c, key=sort_key)

    def items(self) -> List[Tuple[Any, Fraction]]:
        return [(t, self._c[t]) for t in self.terms()]

    def raw_items(self):
        """Unordered items; cheaper when order does not matter."""
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    # arithmetic
    def __add__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            if other == 0:
                return self
            return NotImplemented
        if len(other._c) > len(self._c):
            big, small = other._c, self._c
        else:
            big, small = self._c, other._c
        c = dict(big)
        for t, v in small.items():
            w = c.get(t, 0) + v
            if w:
                c[t] = w
            else:
                c.pop(t, None)
        return FormalSum._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "FormalSum":
        return FormalSum._raw({t: -v for t, v in self._c.items()})

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            if other == 0:
                return self
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: Scalar) -> "FormalSum":
        if isinstance(k, FormalSum):
            return NotImplemented
        if not k:
            return FormalSum.zero()
        k = Fraction(k)
        return FormalSum._raw({t: v * k for t, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FormalSum):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def map(self, f: Callable[[Any], "FormalSum"]) -> "FormalSum":
        """Extend ``f`` (term -> FormalSum) linearly."""
        acc = Accumulator()
        for t, v in self._c.items():
            acc.add(f(t), v)
        return acc.result()

    def map_terms(self, f: Callable[[Any], Any]) -> "FormalSum":
        """Relabel terms through ``f``; coefficients of merged terms add."""
        return FormalSum((f(t), v) for t, v in self._c.items())

    def to_json(self) -> List[dict]:
        return [{"coeff": fraction_text(v), "term": term_text(t)} for t, v in self.items()]

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for t, v in self.items():
            parts.append(f"{v}*[{term_text(t)}]")
        return " + ".join(parts)


class Accumulator:
    """Mutable helper for summing many formal sums in place."""

    __slots__ = ("_c",)

    def __init__(self):
        self._c: Dict[Any, Fraction] = {}

    def add_term(self, term: Any, coeff: Scalar) -> None:
        c = self._c
        w = c.get(term, 0) + coeff
        if w:
            c[term] = w
        else:
            c.pop(term, None)

    def add(self, s: FormalSum, scale: Scalar = 1) -> None:
        if not scale:
            return
        for t, v in s.raw_items():
            self.add_term(t, v * scale)

    def result(self) -> FormalSum:
        return FormalSum._raw({t: Fraction(v) for t, v in self._c.items() if v})


def linear_sum(parts: Iterable[Tuple[FormalSum, Scalar]]) -> FormalSum:
    acc = Accumulator()
    for s, k in parts:
        acc.add(s, k)
    return acc.result()


# ---------------------------------------------------------------------------
# wedge blocks and words


def _sort_sign(items: Tuple[Any, ...]) -> Tuple[int, Tuple[Any, ...]]:
    """Sort ``items`` canonically; return the permutation sign (0 on repeats)."""
    keys = [sort_key(x) for x in items]
    order = sorted(range(len(items)), key=lambda i: keys[i])
    for a, b in zip(order, order[1:]):
        if keys[a] == keys[b]:
            return 0, ()
    # parity via inversion count; blocks are tiny
    inv = sum(1 for i, j in combinations(range(len(order)), 2) if order[i] > order[j])
    return (-1 if inv % 2 else 1), tuple(items[i] for i in order)


class WedgeBlock(tuple):
    """Canonically sorted exterior product of polygons.

    The sign of the sorting permutation is not stored on the block;
    :meth:`build` returns it so callers fold it into a coefficient.
    """

    __slots__ = ()

    @classmethod
    def build(cls, items: Iterable[Any]) -> Tuple[int, "WedgeBlock"]:
        sign, srt = _sort_sign(tuple(items))
        if sign == 0:
            return 0, cls(())
        return sign, cls(srt)

    @property
    def degree(self) -> int:
        return len(self)

    def sort_key(self):
        return tuple(sort_key(p) for p in self)

    def text(self) -> str:
        return "^".join(term_text(p) for p in self)

    def __repr__(self) -> str:
        return f"WedgeBlock({self.text()})"


def block(p: Any) -> WedgeBlock:
    """Degree-one block holding a single polygon."""
    return WedgeBlock((p,))


def wedge(p: Any, q: Any) -> FormalSum:
    """``p ∧ q`` as a formal sum of blocks (zero when ``p == q``)."""
    sign, b = WedgeBlock.build((p, q))
    return FormalSum.monomial(b, sign)


def wedge_blocks(a: WedgeBlock, b: WedgeBlock) -> Tuple[int, WedgeBlock]:
    return WedgeBlock.build(tuple(a) + tuple(b))


class Word(tuple):
    """Tensor word of wedge blocks; the empty word is the unit."""

    __slots__ = ()

    @classmethod
    def of(cls, *polys: Any) -> "Word":
        return cls(block(p) for p in polys)

    def sort_key(self):
        return (len(self), tuple(b.sort_key() for b in self))

    def text(self) -> str:
        return "|".join(b.text() for b in self)

    def __add__(self, other):  # concatenation keeps the type
        return Word(tuple.__add__(self, other))

    def __getitem__(self, i):
        r = tuple.__getitem__(self, i)
        return Word(r) if isinstance(i, slice) else r

    def __repr__(self) -> str:
        return f"Word({self.text()})"


EMPTY = Word(())


def word_sum(*polys: Any) -> FormalSum:
    return FormalSum.monomial(Word.of(*polys))


@lru_cache(maxsize=1 << 18)
def _shuffle_counts(u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: Dict[Word, int] = {}
    head_u = Word((u[0],))
    head_v = Word((v[0],))
    for w, k in _shuffle_counts(Word(u[1:]), v):
        key = head_u + w
        out[key] = out.get(key, 0) + k
    for w, k in _shuffle_counts(u, Word(v[1:])):
        key = head_v + w
        out[key] = out.get(key, 0) + k
    return tuple(out.items())


def shuffle(u: Word, v: Word) -> FormalSum:
    """Sum over all interleavings of ``u`` and ``v``."""
    return FormalSum(dict(_shuffle_counts(Word(u), Word(v))))


def shuffle_sums(x: FormalSum, y: FormalSum) -> FormalSum:
    """Bilinear extension of :func:`shuffle`."""
    acc = Accumulator()
    for u, a in x.raw_items():
        for v, b in y.raw_items():
            ab = a * b
            for w, k in _shuffle_counts(u, v):
                acc.add_term(w, ab * k)
    return acc.result()


def shuffle_many(sums: Iterable[FormalSum]) -> FormalSum:
    out = FormalSum.monomial(EMPTY)
    for s in sums:
        out = shuffle_sums(out, s)
    return out


def deconcatenate(w: Word) -> List[Tuple[Word, Word]]:
    w = Word(w)
    return [(w[:i], w[i:]) for i in range(len(w) + 1)]


def coproduct_words(x: FormalSum) -> FormalSum:
    """Deconcatenation extended linearly; terms are ``(left, right)`` pairs."""
    acc = Accumulator()
    for w, a in x.raw_items():
        for pair in deconcatenate(w):
            acc.add_term(pair, a)
    return acc.result()


def tensor_shuffle(x: FormalSum, y: FormalSum) -> FormalSum:
    """Factorwise shuffle product on sums of ``(left, right)`` pairs."""
    acc = Accumulator()
    for (a1, a2), p in x.raw_items():
        for (b1, b2), q in y.raw_items():
            for l, k in _shuffle_counts(a1, b1):
                for r, m in _shuffle_counts(a2, b2):
                    acc.add_term((l, r), p * q * k * m)
    return acc.result()


def concat_sums(x: FormalSum, y: FormalSum) -> FormalSum:
    """Bilinear concatenation of word sums."""
    acc = Accumulator()
    for u, a in x.raw_items():
        for v, b in y.raw_items():
            acc.add_term(u + v, a * b)
    return acc.result()


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _solve_exact(columns: List[FormalSum], target: FormalSum) -> Optional[List[Fraction]]:
    """Unique solution of ``sum c_k columns[k] = target`` or ``None``."""
    rows = sorted({t for col in columns for t in col} | set(target), key=sort_key)
    m = [[col.coeff(t) for col in columns] + [target.coeff(t)] for t in rows]
    ncol = len(columns)
    pivots = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            return None  # free variable, solution not unique
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    return [m[k][-1] for k in range(ncol)]


def reversal_shuffle_coefficients(n: int) -> Dict[int, Fraction]:
    """Coefficients ``c_i`` with ``w + (-1)^n rev(w) = sum_i c_i (w_1..w_i) sh (w_n..w_(i+1))``.

    Solved exactly over a word of ``n`` distinct letters with ``i`` ranging
    over ``1..n-1``; indices with a zero coefficient are dropped.  Raises
    ``ValueError`` when no unique solution exists.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    w = Word.of(*range(1, n + 1))
    cols = [shuffle(w[:i], Word(reversed(w[i:]))) for i in range(1, n)]
    target = FormalSum.monomial(w) + FormalSum.monomial(Word(reversed(w)), (-1) ** n)
    sol = _solve_exact(cols, target)
    if sol is None:
        raise ValueError(f"no unique reversal relation for n = {n}")
    return {i: c for i, c in zip(range(1, n), sol) if c}
