import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cpfskein import BraidWord, ColoredBraid, Fraction, LaurentPoly, cpf_closed_braid
from cpfskein.algebra import Minus
from cpfskein.hartley import (
    SplitDiagram,
    bareiss_det,
    curvature_counts,
    fox_jacobian,
    normalized_invariant,
    oracle_invariant,
    resolve_unit,
    row_sums_vanish,
    row_weight_identity,
    verify_table1,
    wirtinger_from_closure,
)
from cpfskein.verify import random_closable

X = sympy.symbols("x0:2")


def colored(n, letters, colors):
    return ColoredBraid(BraidWord(n, tuple(letters)), tuple(colors))


def to_sympy(p):
    return sympy.Add(*[c * sympy.Mul(*[x**k for x, k in zip(X, e)]) for e, c in p.terms.items()])


def corpus(seed, count):
    rng = random.Random(seed)
    return [random_closable(rng, 4, 8) for _ in range(count)]


class TestDeterminant:
    @given(st.integers(1, 4).flatmap(lambda n: st.lists(
        st.lists(st.dictionaries(st.tuples(st.integers(-1, 1), st.integers(-1, 1)), st.integers(-2, 2),
                                 max_size=2), min_size=n, max_size=n),
        min_size=n, max_size=n)))
    @settings(max_examples=80, deadline=None)
    def test_matches_sympy(self, rows):
        mat = [[LaurentPoly(2, d) for d in row] for row in rows]
        want = sympy.Matrix([[to_sympy(p) for p in row] for row in mat]).det()
        assert sympy.simplify(to_sympy(bareiss_det(mat, 2)) - want) == 0

    def test_empty(self):
        assert bareiss_det([], 1) == LaurentPoly.const(1, 1)


class TestDiagram:
    @pytest.mark.parametrize("cb", corpus(3, 30), ids=str)
    def test_row_laws(self, cb):
        try:
            diagram, relators = wirtinger_from_closure(cb)
        except SplitDiagram:
            return
        mat = fox_jacobian(relators, diagram.arc_colors, diagram.nvars)
        assert row_sums_vanish(mat)
        assert row_weight_identity(diagram, mat)
        assert diagram.m == len(cb.word.letters)

    def test_split_link(self):
        with pytest.raises(SplitDiagram):
            wirtinger_from_closure(colored(3, [1, 1], "aab"))

    def test_curvature_counts(self):
        cb = colored(2, [1, 1], "ab")
        diagram, _ = wirtinger_from_closure(cb)
        counts = curvature_counts(cb, diagram)
        assert counts.kappa == (1, 1)
        assert sum(counts.nu) == 2


class TestOracle:
    def test_split_is_zero(self):
        assert oracle_invariant(colored(2, [], "ab")).value == Fraction.zero(2)

    def test_hopf_unit(self):
        cb = colored(2, [1, 1], "ab")
        o = oracle_invariant(cb, choices=2)
        assert resolve_unit(o.value, cpf_closed_braid(cb).value) is not None
        assert normalized_invariant(cb) == Fraction.one(2)

    def test_unknot_normalised(self):
        cb = colored(1, [], "a")
        assert normalized_invariant(cb) == Fraction(LaurentPoly.const(1, 1), {Minus(0): 1})

    @pytest.mark.parametrize("cb", corpus(5, 30), ids=str)
    def test_agrees_with_engine(self, cb):
        engine = cpf_closed_braid(cb).value
        units = {resolve_unit(oracle_invariant(cb, choices=3, rng=random.Random(s)).value, engine)
                 for s in range(3)}
        assert None not in units and len(units) == 1
        assert normalized_invariant(cb) == engine


def test_laplace_table():
    report = verify_table1()
    assert report.ok
    assert (report.entries_checked, report.rows_checked) == (120, 20)
