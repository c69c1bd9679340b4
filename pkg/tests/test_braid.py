import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from cpfskein.braid import (
    BraidError,
    BraidWord,
    ColoredBraid,
    NotClosableError,
    closure_components,
    conjugate_colored,
    destabilize,
    garside_nf,
    is_closable,
    nf_key,
    parse_word,
    stabilize,
)


def words(n_max=5, length=10):
    return st.integers(2, n_max).flatmap(
        lambda n: st.lists(
            st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=length
        ).map(lambda xs: BraidWord(n, tuple(xs)))
    )


def burau(w: BraidWord, t=Q(2)):
    """Unreduced Burau matrix at a rational point, an independent homomorphism."""
    n = w.strands
    m = [[Q(int(i == j)) for j in range(n)] for i in range(n)]
    for x in w.letters:
        i = abs(x) - 1
        g = [[Q(int(r == c)) for c in range(n)] for r in range(n)]
        if x > 0:
            g[i][i], g[i][i + 1], g[i + 1][i], g[i + 1][i + 1] = 1 - t, t, Q(1), Q(0)
        else:
            g[i][i], g[i][i + 1], g[i + 1][i], g[i + 1][i + 1] = Q(0), Q(1), 1 / t, 1 - 1 / t
        m = [[sum(m[r][k] * g[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
    return m


def apply_relation(w: BraidWord, rng: random.Random) -> BraidWord:
    """Insert a random relator somewhere in the word."""
    n = w.strands
    pos = rng.randint(0, len(w.letters))
    i = rng.randint(1, n - 1)
    choices = [(i, -i), (-i, i)]
    if i + 1 < n:
        choices.append((i, i + 1, i, -(i + 1), -i, -(i + 1)))
    far = [j for j in range(1, n) if abs(j - i) > 1]
    if far:
        j = rng.choice(far)
        choices.append((i, j, -i, -j))
    rel = rng.choice(choices)
    return BraidWord(n, w.letters[:pos] + rel + w.letters[pos:])


class TestWords:
    def test_parse(self):
        assert parse_word("1 -2, 1", 3).letters == (1, -2, 1)
        with pytest.raises(BraidError):
            parse_word("1 q", 3)
        with pytest.raises(BraidError):
            parse_word("3", 3)

    def test_inverse_and_free_reduction(self):
        w = BraidWord(3, (1, -2, 1))
        assert (w * w.inverse()).free_reduce() == BraidWord(3, ())

    def test_permutation_of_generator(self):
        assert BraidWord(3, (1,)).permutation().images == (1, 0, 2)
        assert BraidWord(3, (1, 2)).permutation().images == (2, 0, 1)

    def test_cycles(self):
        assert BraidWord(4, (1, 3)).permutation().cycles() == [[0, 1], [2, 3]]


class TestNormalForm:
    @given(words(), st.randoms(use_true_random=False))
    @settings(max_examples=150, deadline=None)
    def test_relations_do_not_change_key(self, w, rng):
        v = w
        for _ in range(3):
            v = apply_relation(v, rng)
        assert nf_key(v) == nf_key(w)

    @given(words(4, 8), words(4, 8))
    @settings(max_examples=200, deadline=None)
    def test_distinct_burau_means_distinct_key(self, u, v):
        if u.strands != v.strands:
            return
        if burau(u) != burau(v):
            assert nf_key(u) != nf_key(v)
        if nf_key(u) == nf_key(v):
            assert burau(u) == burau(v)

    @given(words())
    @settings(max_examples=100, deadline=None)
    def test_normal_form_word_round_trip(self, w):
        assert nf_key(garside_nf(w).to_word()) == nf_key(w)

    def test_half_twist_squared_is_central(self):
        delta = BraidWord(3, (1, 2, 1))
        full = delta * delta
        s = BraidWord(3, (2,))
        assert nf_key(full * s) == nf_key(s * full)
        assert garside_nf(full).infimum == 2


class TestColored:
    def test_closability(self):
        assert is_closable(ColoredBraid(BraidWord(2, (1, 1)), ("a", "b")))
        assert not is_closable(ColoredBraid(BraidWord(2, (1,)), ("a", "b")))

    def test_color_count_checked(self):
        with pytest.raises(BraidError):
            ColoredBraid(BraidWord(2, ()), ("a",))

    def test_conjugation_moves_colors(self):
        cb = ColoredBraid(BraidWord(3, (2, 2)), ("a", "b", "c"))
        out = conjugate_colored(cb, BraidWord(3, (1,)))
        assert out.top_colors == ("b", "a", "c")
        assert is_closable(out)

    def test_conjugation_needs_closable(self):
        with pytest.raises(NotClosableError):
            conjugate_colored(ColoredBraid(BraidWord(2, (1,)), ("a", "b")), BraidWord(2, ()))

    def test_stabilize_round_trip(self):
        cb = ColoredBraid(BraidWord(2, (1, 1, 1)), ("a", "a"))
        for sign in (1, -1):
            up = stabilize(cb, sign)
            assert up.strands == 3 and is_closable(up)
            assert destabilize(up) == cb

    def test_destabilize_rejects(self):
        with pytest.raises(BraidError):
            destabilize(ColoredBraid(BraidWord(3, (2, 1, 2)), ("a", "a", "a")))

    def test_components(self):
        cb = ColoredBraid(BraidWord(3, (1, 1)), ("a", "b", "c"))
        assert sorted(closure_components(cb), key=lambda c: min(c[0])) == [
            (frozenset({1}), "a"), (frozenset({2}), "b"), (frozenset({3}), "c")
        ]
