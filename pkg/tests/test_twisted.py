import pytest
from hypothesis import given, settings, strategies as st

from cpfskein.algebra import Fraction, LaurentPoly, act_permute
from cpfskein.braid import BraidError, BraidWord, Permutation
from cpfskein.twisted import (
    AlgebraElement,
    elem_equal,
    make_relator_II,
    make_relator_III,
    relator_II,
    relator_III,
    relator_III4,
    relator_III7,
    relator_III8,
    verify_relator_identities,
)

N = 3


def t(i, k=1):
    return LaurentPoly.var(i, N, k)


def coefs():
    exps = st.tuples(*[st.integers(-2, 2)] * N)
    return st.dictionaries(exps, st.integers(-3, 3), min_size=1, max_size=3).map(
        lambda d: Fraction.from_poly(LaurentPoly(N, d))
    )


def words(length=4):
    return st.lists(st.sampled_from([1, -1, 2, -2]), max_size=length).map(
        lambda xs: BraidWord(N, tuple(xs))
    )


def elements():
    return st.lists(st.tuples(coefs(), words()), max_size=3).map(lambda ts: AlgebraElement(N, ts))


class TestProduct:
    def test_twist_moves_coefficient(self):
        # sigma_1 * t_1 = t_2 * sigma_1: the strand at position 1 came from position 2
        lhs = AlgebraElement.braid(BraidWord(N, (1,))) * Fraction.from_poly(t(0))
        rhs = AlgebraElement.braid(BraidWord(N, (1,)), t(1))
        assert lhs == rhs

    @given(elements(), elements(), elements())
    @settings(max_examples=40, deadline=None)
    def test_associative(self, x, y, z):
        assert elem_equal((x * y) * z, x * (y * z))

    @given(elements(), elements(), elements())
    @settings(max_examples=40, deadline=None)
    def test_distributive(self, x, y, z):
        assert elem_equal(x * (y + z), x * y + x * z)

    @given(elements())
    @settings(max_examples=40, deadline=None)
    def test_identity(self, x):
        one = AlgebraElement.scalar(1, N)
        assert elem_equal(one * x, x) and elem_equal(x * one, x)

    def test_terms_merge_on_normal_form(self):
        x = AlgebraElement(N, [
            (Fraction.one(N), BraidWord(N, (1, 2, 1))),
            (Fraction.one(N), BraidWord(N, (2, 1, 2))),
        ])
        assert len(x) == 1
        assert x.coefficient(BraidWord(N, (1, 2, 1))) == Fraction.const(2, N)

    def test_strand_mismatch(self):
        with pytest.raises(BraidError):
            AlgebraElement.braid(BraidWord(2, (1,))) + AlgebraElement.braid(BraidWord(3, (1,)))


class TestRelators:
    def test_relator_II_terms(self):
        r = relator_II(N, 1)
        assert r.coefficient(BraidWord(N, (1, 1))) == Fraction.one(N)
        assert r.coefficient(BraidWord(N, (-1, -1))) == Fraction.one(N)
        assert r.coefficient(BraidWord(N, ())) == -Fraction.from_poly(t(0) * t(1) + t(0, -1) * t(1, -1))

    def test_relator_III_has_six_terms(self):
        assert len(relator_III(N, 1)) == 6

    def test_relator_identities(self):
        assert verify_relator_identities() == {"III4": True, "III8": True, "III": True, "III7": True}

    def test_III7_term_count(self):
        assert relator_III7().expanded_term_count() == 22

    def test_III4_and_III8_sizes(self):
        assert len(relator_III4()) == 4
        assert len(relator_III8()) == 8

    def test_instances_are_twisted(self):
        perm = Permutation((1, 0, 2))
        inst = make_relator_II(2, perm, N)
        for (c, w), (c0, w0) in zip(sorted(inst.element, key=lambda p: str(p[1])),
                                    sorted(relator_II(N, 2), key=lambda p: str(p[1]))):
            assert c == act_permute(c0, perm.images)

    def test_instance_range_checked(self):
        with pytest.raises(BraidError):
            make_relator_III(2, None, N)
        with pytest.raises(BraidError):
            make_relator_II(3, None, N)
