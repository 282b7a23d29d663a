import math
import random

import pytest

import oracles
from polyhopf.numeric import (
    EvalConfig,
    NumericError,
    SamplePoint,
    integral_eval,
    itershuffle_statement,
    iterated_integral,
    li_eval,
    li_ones,
    shuffle_integral,
    tail_bound,
    verify_itershuffle,
)

CFG = EvalConfig(200, 1e-8)
SAMPLES = {
    2: [(4, 2, 1), (5, 3, 1), (3, 2, 1)],
    3: [(8, 4, 2, 1), (7, 5, 3, 1), (10, 6, 3, 2)],
    4: [(16, 8, 4, 2, 1), (9, 6, 4, 2.5, 1), (20, 12, 7, 4, 2)],
}


class TestLiOnes:
    @pytest.mark.parametrize("k", range(1, 10))
    def test_log(self, k):
        z = k / 10
        assert abs(li_ones([z], CFG) + math.log(1 - z)) < 1e-10

    def test_half_at_depth_60(self):
        assert abs(li_ones([0.5], EvalConfig(60, 1e-10)) - math.log(2)) < 1e-10

    def test_zero(self):
        assert li_ones([0.0], CFG) == 0.0

    def test_naive_oracle(self):
        assert abs(li_ones([0.3, 0.4], EvalConfig(40, 1.0)) - oracles.naive_li([0.3, 0.4], 40)) < 1e-12
        assert abs(li_ones([0.3, 0.4, 0.8], EvalConfig(30, 1.0)) - oracles.naive_li([0.3, 0.4, 0.8], 30)) < 1e-12

    def test_frozen(self):
        assert abs(li_ones([0.3, 0.4], EvalConfig(40, 1.0)) - oracles.LI_03_04) < 1e-12
        assert abs(li_ones([0.3, 0.4, 0.8], EvalConfig(30, 1.0)) - oracles.LI_03_04_08) < 1e-12

    def test_random_against_oracle(self):
        rng = random.Random(0)
        for _ in range(10):
            z = [rng.uniform(-0.9, 0.9) for _ in range(rng.randint(1, 3))]
            assert abs(li_ones(z, EvalConfig(25, 1e6)) - oracles.naive_li(z, 25)) < 1e-12

    def test_large_inner_argument(self):
        # z_1 > 1 is fine while every tail product stays below one
        v = li_ones([1.5, 0.5], CFG)
        assert abs(v - oracles.naive_li([1.5, 0.5], 40)) < 1e-6

    def test_divergent(self):
        with pytest.raises(NumericError):
            li_ones([1.0], CFG)
        with pytest.raises(NumericError):
            li_ones([0.5, 2.5], CFG)

    def test_tolerance_unreachable(self):
        with pytest.raises(NumericError):
            li_ones([0.99], EvalConfig(10, 1e-12))

    def test_tail_bound_is_a_bound(self):
        for z in ([0.7], [0.6, 0.9], [0.5, 0.5, 0.8]):
            shallow = li_eval(z, EvalConfig(40, 1.0))
            deep = li_ones(z, EvalConfig(400, 1.0))
            assert abs(deep - shallow.value) <= shallow.tail_bound
        assert tail_bound(2, 0.0, 10) == 0.0
        assert tail_bound(1, 1.0, 10) == math.inf

    def test_doubling_depth(self):
        for z in ([0.5], [0.5, 0.5], [0.3, 0.6, 0.9]):
            a = li_ones(z, EvalConfig(300, 1.0))
            b = li_ones(z, EvalConfig(600, 1.0))
            assert abs(a - b) < 1e-8

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EvalConfig(0, 1e-8)
        with pytest.raises(ValueError):
            EvalConfig(10, 0)


class TestIntegrals:
    def test_depth_one(self):
        for a, y in ((2.0, 1.0), (5.0, 3.0), (1.0, 0.25)):
            assert abs(iterated_integral([a, y], CFG) - math.log(1 - y / a)) < 1e-10

    def test_equal_ratios(self):
        assert iterated_integral([4, 2, 1], CFG) == li_ones([0.5, 0.5], CFG)

    def test_eval_reports_bound(self):
        ev = integral_eval([4, 2, 1], CFG)
        assert ev.tail_bound < 1e-8

    def test_shuffle_pairs(self):
        lhs, rhs = shuffle_integral([3], [5], 1, CFG)
        assert abs(lhs - rhs) < 1e-8

    def test_shuffle_random_words(self):
        rng = random.Random(21)
        for _ in range(20):
            u = [rng.uniform(2, 6) for _ in range(rng.randint(1, 3))]
            v = [rng.uniform(2, 6) for _ in range(rng.randint(1, 3))]
            lhs, rhs = shuffle_integral(u, v, 1.0, CFG)
            assert abs(lhs - rhs) < 1e-8

    def test_sample_point(self):
        with pytest.raises(ValueError):
            SamplePoint([1, 2])
        with pytest.raises(ValueError):
            SamplePoint([2, 2, 1])
        with pytest.raises(ValueError):
            SamplePoint([2, 1, 0])


class TestItershuffle:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_statement(self, n):
        assert itershuffle_statement(n) == {i: (-1) ** (n - i + 1) for i in range(1, n)}

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_numeric(self, n):
        for x in SAMPLES[n]:
            holds, lhs, rhs = verify_itershuffle(x, CFG)
            assert holds, (x, lhs, rhs)

    def test_n2_product_form(self):
        r = iterated_integral([4, 2, 1], CFG) + iterated_integral([2, 4, 1], CFG)
        assert abs(r - iterated_integral([4, 1], CFG) * iterated_integral([2, 1], CFG)) < 1e-8

    def test_palindrome(self):
        assert iterated_integral([3, 5, 3, 1], CFG) == iterated_integral([3, 5, 3, 1][::-1][1:] + [1], CFG)

    def test_printed_form_fails_numerically(self):
        x = [8, 4, 2, 1]
        r, y = x[:-1], x[-1]
        n = 3
        lhs = iterated_integral(r + [y], CFG) + (-1) ** n * iterated_integral(r[::-1] + [y], CFG)
        rhs = 0.0
        for i in range(2, n + 1):
            right = iterated_integral(r[i:][::-1] + [y], CFG) if r[i:] else 1.0
            rhs += (-1) ** (n - i) * iterated_integral(r[:i] + [y], CFG) * right
        assert abs(lhs - rhs) > 1e-4

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            verify_itershuffle([2, 1], CFG)
