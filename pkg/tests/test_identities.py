import random

import pytest

from polyhopf.algebra import FormalSum, Word, shuffle_sums, word_sum
from polyhopf.bar import q_n, r_n
from polyhopf.identities import (
    DIAGNOSTICS,
    IDENTITIES,
    fv_ofv_sides,
    identity_names,
    phi_re_not_hopf,
    relate_exact_defect,
    relate_rhs,
    verify,
)
from polyhopf.polygon import Arrow, Polygon, sigma, tau
from polyhopf.rules import PHI2, PHI4, PHI_FV, PHI_RE, PHI_SIGMA_FV, lambda_phi

HOLDING = [n for n in identity_names() if n != "fv_ofv"]


def P(text):
    return Polygon.parse(text)


def distinct(n):
    return Polygon([str(k) for k in range(1, n + 2)])


def L(rule, text):
    return lambda_phi(rule, P(text))


class TestTable:
    @pytest.mark.parametrize("name", HOLDING)
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_distinct_labels(self, name, n):
        r = verify(name, distinct(n))
        assert r.holds, r.defect
        assert r.defect == 0

    @pytest.mark.parametrize("name", HOLDING)
    def test_repeated_labels(self, name):
        rng = random.Random(name)
        for n in (2, 3, 4):
            for _ in range(4):
                Q = Polygon([rng.choice("ab") for _ in range(n + 1)])
                assert verify(name, Q).holds, Q.text()

    def test_errors(self):
        with pytest.raises(ValueError):
            verify("nope", distinct(2))
        with pytest.raises(ValueError):
            verify("fv_ofv", distinct(1))

    def test_report_json(self):
        r = verify("redif", distinct(2))
        j = r.to_json()
        assert set(j) >= {"identity", "polygon", "holds", "defect", "millis"}
        assert j["polygon"] == "1,2,3" and j["holds"] is True


class TestRelate:
    def test_weight_two_exact(self):
        lhs = L(PHI2, "a,b,c") - L(PHI4, "a,b,c")
        rhs = -shuffle_sums(L(PHI4, "a,c"), L(PHI4, "b,a"))
        assert lhs == rhs
        assert relate_exact_defect(P("a,b,c")) == 0

    def test_weight_three_defect(self):
        d = relate_exact_defect(P("a,b,c,d"))
        assert d == word_sum(P("a,d"), P("b,c,a")) + word_sum(P("a,d"), P("c,b,a"))
        assert q_n(3, d) == 0
        assert verify("relate_exact_defect", P("a,b,c,d")).defect == d


class TestOrientSign:
    def test_weight_two_intermediate(self):
        Q = P("r0,r1,r2")
        x = L(PHI_RE, "r0,r1,r2") + lambda_phi(PHI2, tau(Q))
        assert x == word_sum(Q) + word_sum(tau(Q))
        assert verify("orientsign_intermediate", Q).holds

    def test_untwisted_sum_is_not_the_collapse(self):
        # adding L2(P) instead of L2(tau P) leaves mixed words behind
        Q = P("r0,r1,r2")
        x = L(PHI_RE, "r0,r1,r2") + L(PHI2, "r0,r1,r2")
        assert x != word_sum(Q) + word_sum(tau(Q))


class TestFvLin:
    def test_square_display(self):
        lhs = L(PHI4, "1,2,3,4") - L(PHI_FV, "1,2,3,4")
        rhs = shuffle_sums(L(PHI4, "2,3,4"), L(PHI_FV, "1,2")) + shuffle_sums(L(PHI4, "3,4"), L(PHI_FV, "1,2,3"))
        assert lhs == rhs


class TestFvOfv:
    """The first-vertex / rotated first-vertex relation as displayed does not hold."""

    def test_weight_two_lhs(self):
        Q = P("1,2,3")
        lhs = L(PHI_FV, "1,2,3") - lambda_phi(PHI_SIGMA_FV, sigma(Q))
        expected = (word_sum(Q) - word_sum(sigma(Q))
                    - word_sum(P("1,2"), P("2,3")) + word_sum(P("1,3"), P("2,3"))
                    + word_sum(P("2,1"), P("1,3")) - word_sum(P("2,1"), P("3,1"))
                    + word_sum(P("2,1"), P("3,2")) - word_sum(P("3,1"), P("2,3")))
        assert lhs == expected

    def test_display_words_unreachable(self):
        # [2,3|2,3] cannot come from a dissection of a triangle: both factors
        # would have to be the same side pair
        Q = P("1,2,3")
        lhs = L(PHI_FV, "1,2,3") - lambda_phi(PHI_SIGMA_FV, sigma(Q))
        assert lhs.coeff(Word.of(P("2,3"), P("2,3"))) == 0

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_reported_as_failing(self, n):
        r = verify("fv_ofv", distinct(n))
        assert not r.holds
        assert r.parts and sum(len(v) for v in r.parts.values()) == len(r.defect)

    def test_sides_are_computed(self):
        lhs, rp, lp = fv_ofv_sides(distinct(3))
        assert lhs != 0 and rp != 0 and lp != 0


class TestReNotHopf:
    def test_example_polygon(self):
        Q = P("1,2,3,4,5,6")
        witnessed = False
        for a in (Arrow(4, 2), Arrow(6, 2), Arrow(2, 5)):
            res = phi_re_not_hopf(Q, a)
            assert res["mixed"] == 0
            witnessed = witnessed or res["pure"] != 0
        assert witnessed


class TestDiagnostics:
    def test_registry(self):
        assert set(DIAGNOSTICS) <= set(identity_names(True))
        assert not set(DIAGNOSTICS) & set(IDENTITIES)
