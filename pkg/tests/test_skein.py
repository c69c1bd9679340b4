import sympy
import pytest
from hypothesis import given, settings, strategies as st

from cpfskein.algebra import Fraction, LaurentPoly
from cpfskein.braid import BraidWord, nf_key
from cpfskein.skein import (
    generic_rewrite,
    normalize_power,
    reduce_top,
    rewrite_triple,
    segment,
    verify_cases,
)

T = sympy.symbols("x0:3")
X = sympy.Symbol("s")


def to_sympy(p: LaurentPoly):
    return sympy.Add(*[c * sympy.Mul(*[x**k for x, k in zip(T, e)]) for e, c in p.terms.items()])


def power_by_remainder(a, b, k):
    """sigma^k on the basis sigma^-1..sigma^2 using x^4 - P x^2 + 1 = 0."""
    P = T[a] * T[b] + 1 / (T[a] * T[b])
    f = X**4 - P * X**2 + 1
    inv = P * X - X**3
    base = X if k + 1 >= 0 else inv
    y = sympy.rem(sympy.expand(base ** abs(k + 1)), f, X)
    poly = sympy.Poly(y, X)
    return {j - 1: sympy.simplify(poly.coeff_monomial(X**j)) for j in range(4)}


def words(n_max=5, length=12):
    return st.integers(2, n_max).flatmap(
        lambda n: st.lists(
            st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=length
        ).map(lambda xs: BraidWord(n, tuple(xs)))
    )


class TestPowers:
    @pytest.mark.parametrize("k", [-6, -5, -3, -2, -1, 0, 1, 2, 3, 4, 7])
    @pytest.mark.parametrize("pair", [(0, 1), (1, 1), (2, 0)])
    def test_matches_polynomial_remainder(self, pair, k):
        got = {e: to_sympy(c.num) for c, e in normalize_power(pair, k, 3)}
        want = power_by_remainder(*pair, k)
        for e in (-1, 0, 1, 2):
            assert sympy.simplify(got.get(e, 0) - want[e]) == 0, (pair, k, e)

    def test_small_powers_are_fixed(self):
        for k in (-1, 0, 1, 2):
            assert normalize_power((0, 1), k, 2) == [(Fraction.one(2), k)]


class TestSegment:
    @given(words())
    @settings(max_examples=150, deadline=None)
    def test_round_trip(self, w):
        seg = segment(w)
        top = w.strands - 1
        assert nf_key(seg.to_word()) == nf_key(w)
        assert all(abs(x) != top for x in seg.head.letters)
        for k, b in seg.blocks:
            assert k != 0
            assert all(abs(x) != top for x in b.letters)

    def test_cancelling_powers_merge(self):
        seg = segment(BraidWord(3, (2, 1, -1, -2, 1)))
        assert seg.r == 0


class TestTriples:
    def test_every_case_verified(self):
        results = verify_cases()
        assert len(results) == 9
        assert all(results.values())

    def test_cases_unaffected_by_higher_derivations(self):
        generic_rewrite(1, -1, 3)
        generic_rewrite(3, 2, 3)
        results = verify_cases()
        assert len(results) == 9 and all(results.values())

    @pytest.mark.parametrize("k", [-1, 1, 2, 3])
    @pytest.mark.parametrize("l", [-1, 1, 2])
    @pytest.mark.parametrize("m", [-1, 1, 2, 3])
    def test_rewrite_shapes(self, k, l, m):
        for c, a, b, cc in generic_rewrite(k, l, m):
            assert b in (-1, 0, 1, 2)
            assert not c.is_zero()

    def test_range_checked(self):
        with pytest.raises(ValueError):
            rewrite_triple((0, 1, 2), 4, 1, 1, 3)

    def test_colored_rewrite_is_substitution(self):
        generic = generic_rewrite(1, 1, 1)
        colored = rewrite_triple((0, 0, 1), 1, 1, 1, 2)
        assert [(a, b, cc) for _, a, b, cc in generic] == [(a, b, cc) for _, a, b, cc in colored]
        for (c0, *_), (c1, *_) in zip(generic, colored):
            assert c0.substitute([0, 0, 1], 2) == c1


class TestReduction:
    @given(words(4, 10))
    @settings(max_examples=60, deadline=None)
    def test_terms_have_one_top_power(self, w):
        n = w.strands
        for term in reduce_top(w):
            assert term.k in (-1, 0, 1, 2)
            for part in (term.alpha, term.gamma):
                assert all(abs(x) < n - 1 for x in part.letters)

    def test_word_without_top_generator(self):
        w = BraidWord(3, (1, 1))
        (term,) = reduce_top(w)
        assert term.k == 0 and nf_key(term.word()) == nf_key(w)

    def test_square_of_top_generator_is_kept(self):
        (term,) = reduce_top(BraidWord(2, (1, 1)))
        assert term.k == 2 and term.coef == Fraction.one(2)
