import random

import pytest

from cpfskein.braid import is_closable, nf_key
from cpfskein.verify import (
    MOVES,
    SUITES,
    invariance_corpus,
    random_closable,
    random_knot,
    suite_axioms,
)
from cpfskein.cpf import component_count


def test_corpus_is_reproducible():
    a = invariance_corpus(5, 10)
    b = invariance_corpus(5, 10)
    assert [(cb, chain) for cb, chain in a] == [(cb, chain) for cb, chain in b]


def test_moves_keep_braids_closable():
    for cb, chain in invariance_corpus(3, 50):
        assert is_closable(cb)
        assert [name for name, _ in chain] == list(MOVES)
        for _, moved in chain:
            assert is_closable(moved)


def test_braid_relation_move_keeps_the_braid():
    rng = random.Random(1)
    for _ in range(50):
        cb = random_closable(rng)
        moved = MOVES["braid relation"](rng, cb)
        assert nf_key(moved.word) == nf_key(cb.word)


def test_random_knots_have_one_component():
    rng = random.Random(2)
    for _ in range(30):
        k = random_knot(rng)
        assert component_count(k.strands, k.word.letters) == 1


def test_failures_are_reported_with_context():
    rep = suite_axioms(trials=3, seed=0, kinds=("II",))
    assert rep.ok and len(rep.checks) == 3
    rep.add("forced failure", False, "A=[1] B=[2]")
    assert not rep.ok
    assert rep.lines()[0] == "FAIL forced failure: A=[1] B=[2]"


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_run_small(name):
    fn = SUITES[name]
    rep = fn() if name in ("identities", "table1") else fn(trials=3, seed=9)
    assert rep.ok, rep.lines()
