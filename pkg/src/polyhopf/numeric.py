"""Floating-point multiple logarithms and iterated integrals.

``li_ones(z)`` is the depth-``r`` multiple logarithm with all indices one,

    Li(z_1, ..., z_r) = sum_{0 < k_1 < ... < k_r} z_1^k_1 ... z_r^k_r / (k_1 ... k_r),

and ``iterated_integral((a_1, ..., a_n, y))`` is ``I(0; a_1, ..., a_n; y)``,
which equals ``(-1)^n Li(a_2/a_1, ..., a_n/a_(n-1), y/a_n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .algebra import Word, reversal_shuffle_coefficients, shuffle


class NumericError(ValueError):
    """Input outside the convergence domain or tolerance not reachable."""


@dataclass(frozen=True)
class EvalConfig:
    depth: int = 200
    tol: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.depth, int) or self.depth < 1:
            raise ValueError("depth must be a positive integer")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


class SamplePoint(tuple):
    """Strictly decreasing positive reals ``x_1 > ... > x_(n+1) > 0``."""

    def __new__(cls, xs: Sequence[float]):
        xs = tuple(float(x) for x in xs)
        if len(xs) < 2:
            raise ValueError("a sample point needs at least two entries")
        if xs[-1] <= 0 or any(a <= b for a, b in zip(xs, xs[1:])):
            raise ValueError("sample point must be strictly decreasing and positive")
        return super().__new__(cls, xs)


class Evaluation(NamedTuple):
    value: float
    tail_bound: float


def tail_bound(r: int, rho: float, depth: int) -> float:
    """Bound on ``sum over k_r > depth`` of the series.

    Every term with largest index ``K`` is at most ``rho^K / K`` in absolute
    value and there are ``C(K-1, r-1)`` of them.  The sum is taken term by
    term until the term ratio drops below one, then closed geometrically.
    """
    if rho == 0:
        return 0.0
    if rho >= 1:
        return math.inf
    log_rho = math.log(rho)
    total = 0.0
    K = max(depth + 1, r)
    while True:
        log_t = math.lgamma(K) - math.lgamma(r) - math.lgamma(K - r + 1) + K * log_rho - math.log(K)
        t = math.exp(log_t)
        # every later term ratio is at most rho K / (K - r + 1), which
        # decreases in K, so it closes the remaining sum geometrically
        q = rho * K / (K - r + 1)
        if q < 1:
            return total + t / (1 - q)
        total += t
        K += 1


def _tails(z: Sequence[float]) -> List[float]:
    """``y_i = z_i z_(i+1) ... z_r``."""
    return list(accumulate(reversed(z), lambda a, b: a * b))[::-1]


def li_eval(z: Sequence[float], cfg: EvalConfig = EvalConfig()) -> Evaluation:
    """Truncated series with its tail bound.

    With ``y_i = z_i ... z_r`` a term equals ``prod_i y_i^(k_i - k_(i-1)) / prod k_i``,
    which keeps every power bounded when all ``|y_i| < 1``.  Writing
    ``A_j(k)`` for the partial sums with ``k_j = k`` gives the recurrence
    ``A_j(k) = B_j(k) / k`` with ``B_j(k+1) = y_j (B_j(k) + A_(j-1)(k))``.
    """
    z = [float(v) for v in z]
    r = len(z)
    if r == 0:
        return Evaluation(1.0, 0.0)
    y = _tails(z)
    rho = max(abs(v) for v in y)
    if rho >= 1:
        raise NumericError(f"series diverges: tail product of modulus {rho} >= 1")
    bound = tail_bound(r, rho, cfg.depth)
    if bound > cfg.tol:
        raise NumericError(f"tail bound {bound:.3e} exceeds tolerance {cfg.tol:.3e} at depth {cfg.depth}")
    N = cfg.depth
    # prev[k] = A_(j-1)(k) for k = 0..N
    prev = [0.0] * (N + 1)
    p = 1.0
    for k in range(1, N + 1):
        p *= y[0]
        prev[k] = p / k
    for j in range(1, r):
        cur = [0.0] * (N + 1)
        b = 0.0
        for k in range(1, N + 1):
            b = y[j] * (b + prev[k - 1])
            cur[k] = b / k
        prev = cur
    return Evaluation(math.fsum(prev), bound)


def li_ones(z: Sequence[float], cfg: EvalConfig = EvalConfig()) -> float:
    return li_eval(z, cfg).value


def integral_eval(args: Sequence[float], cfg: EvalConfig = EvalConfig()) -> Evaluation:
    """``I(0; a_1, ..., a_n; y)`` for ``args = (a_1, ..., a_n, y)``."""
    args = [float(v) for v in args]
    if len(args) < 2:
        raise ValueError("need at least one letter and an endpoint")
    if any(a == 0 for a in args[:-1]):
        raise NumericError("letters must be nonzero")
    n = len(args) - 1
    ratios = [args[i + 1] / args[i] for i in range(n)]
    ev = li_eval(ratios, cfg)
    return Evaluation((-1) ** n * ev.value, ev.tail_bound)


def iterated_integral(args: Sequence[float], cfg: EvalConfig = EvalConfig()) -> float:
    return integral_eval(args, cfg).value


def _word_integral(word: Word, y: float, cfg: EvalConfig) -> float:
    return iterated_integral([b[0] for b in word] + [y], cfg)


def shuffle_integral(u: Sequence[float], v: Sequence[float], y: float,
                     cfg: EvalConfig = EvalConfig()) -> Tuple[float, float]:
    """``(I(u; y) I(v; y), sum over shuffles w of I(w; y))``."""
    lhs = 1.0
    if u:
        lhs *= iterated_integral(list(u) + [y], cfg)
    if v:
        lhs *= iterated_integral(list(v) + [y], cfg)
    rhs = 0.0
    for w, c in shuffle(Word.of(*u), Word.of(*v)).raw_items():
        rhs += float(c) * (_word_integral(w, y, cfg) if w else 1.0)
    return lhs, rhs


def itershuffle_statement(n: int) -> Dict[int, int]:
    """Corrected coefficients ``{i: c_i}`` of

    ``I(r_1..r_n) + (-1)^n I(r_n..r_1) = sum_i c_i I(r_1..r_i) I(r_n..r_(i+1))``,

    all integrals ending at ``r_(n+1)``.  Derived exactly from the shuffle
    algebra, which yields ``c_i = (-1)^(n-i+1)`` for ``i = 1..n-1``.
    """
    return {i: int(c) for i, c in reversal_shuffle_coefficients(n).items()}


def verify_itershuffle(x: Sequence[float], cfg: EvalConfig = EvalConfig()) -> Tuple[bool, float, float]:
    x = SamplePoint(x)
    n = len(x) - 1
    if n not in (2, 3, 4):
        raise ValueError("itershuffle is checked for n in {2, 3, 4}")
    r, y = list(x[:-1]), x[-1]
    lhs = iterated_integral(r + [y], cfg) + (-1) ** n * iterated_integral(r[::-1] + [y], cfg)
    rhs = 0.0
    for i, c in itershuffle_statement(n).items():
        rhs += c * iterated_integral(r[:i] + [y], cfg) * iterated_integral(r[i:][::-1] + [y], cfg)
    return abs(lhs - rhs) < cfg.tol, lhs, rhs
