"""
Seeded property suites: skein axioms, isotopy invariance, algebra identities,
the coefficient table, oracle agreement, color merging and knots.

Every suite takes a ``random.Random`` seed and is deterministic.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .algebra import Fraction, LaurentPoly, rho_reduce
from .braid import BraidWord, ColoredBraid, conjugate_colored, stabilize
from .cpf import CPFEngine, color_indices, component_count, cpf_closed_braid, merge_colors, to_alexander
from .hartley import normalized_invariant, oracle_invariant, resolve_unit, verify_table1
from .skein import _ctx_after, _perm_of, verify_cases
from .twisted import (
    AlgebraElement,
    relator_II,
    relator_III,
    relator_III4,
    relator_III7,
    relator_III8,
    verify_relator_identities,
)

PALETTE = ("a", "b", "c", "d")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))

    def lines(self, verbose: bool = False) -> list[str]:
        out = []
        for c in self.checks:
            if verbose or not c.passed:
                status = "PASS" if c.passed else "FAIL"
                out.append(f"{status} {c.name}" + (f": {c.detail}" if c.detail else ""))
        passed = sum(c.passed for c in self.checks)
        out.append(f"{self.suite}: {passed}/{len(self.checks)} checks passed")
        return out


# ---------------------------------------------------------------------------
# corpus generation


def random_word(rng: random.Random, n: int, length: int) -> BraidWord:
    if n < 2:
        return BraidWord(n, ())
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length)))


class _Classes:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def color_for(rng: random.Random, n: int, perms: Iterable[Sequence[int]],
              same: Iterable[tuple[int, int]] = (), palette: Sequence[str] = PALETTE) -> tuple[str, ...]:
    """Random colors constant on the cycles of every permutation given."""
    cls = _Classes(n)
    for perm in perms:
        for p, q in enumerate(perm):
            cls.union(p, q)
    for a, b in same:
        cls.union(a, b)
    chosen: dict[int, str] = {}
    out = []
    for p in range(n):
        root = cls.find(p)
        if root not in chosen:
            chosen[root] = rng.choice(palette)
        out.append(chosen[root])
    return tuple(out)


def random_closable(rng: random.Random, max_strands: int = 4, max_length: int = 10,
                    palette: Sequence[str] = PALETTE, min_strands: int = 2) -> ColoredBraid:
    n = rng.randint(min_strands, max_strands)
    w = random_word(rng, n, rng.randint(1, max_length))
    return ColoredBraid(w, color_for(rng, n, [w.permutation().images], palette=palette))


def random_knot(rng: random.Random, max_strands: int = 4, max_length: int = 10) -> ColoredBraid:
    """A random braid whose closure has one component, colored ``a``."""
    while True:
        n = rng.randint(2, max_strands)
        w = random_word(rng, n, rng.randint(n - 1, max_length))
        if component_count(n, w.letters) == 1:
            return ColoredBraid(w, ("a",) * n)


def move_conjugate(rng: random.Random, cb: ColoredBraid) -> ColoredBraid:
    alpha = random_word(rng, cb.strands, rng.randint(1, 3))
    return conjugate_colored(cb, alpha)


def move_stabilize(rng: random.Random, cb: ColoredBraid) -> ColoredBraid:
    return stabilize(cb, rng.choice((1, -1)))


def move_free_insert(rng: random.Random, cb: ColoredBraid) -> ColoredBraid:
    n = cb.strands
    if n < 2:
        return cb
    i = rng.randint(1, n - 1) * rng.choice((1, -1))
    letters = list(cb.word.letters)
    pos = rng.randint(0, len(letters))
    letters[pos:pos] = [i, -i]
    return ColoredBraid(BraidWord(n, tuple(letters)), cb.top_colors)


def move_braid_relation(rng: random.Random, cb: ColoredBraid) -> ColoredBraid:
    """Rewrite one occurrence of a braid relation, or insert one as a trivial loop."""
    n = cb.strands
    letters = list(cb.word.letters)
    spots = []
    for p in range(len(letters) - 2):
        a, b, c = letters[p:p + 3]
        if a == c and a * b > 0 and abs(abs(a) - abs(b)) == 1:
            spots.append(("three", p))
    for p in range(len(letters) - 1):
        if abs(abs(letters[p]) - abs(letters[p + 1])) >= 2:
            spots.append(("far", p))
    if spots:
        kind, p = rng.choice(spots)
        if kind == "three":
            a, b = letters[p], letters[p + 1]
            letters[p:p + 3] = [b, a, b]
        else:
            letters[p], letters[p + 1] = letters[p + 1], letters[p]
    elif n >= 3:
        i = rng.randint(1, n - 2)
        pos = rng.randint(0, len(letters))
        letters[pos:pos] = [i, i + 1, i, -(i + 1), -i, -(i + 1)]
    return ColoredBraid(BraidWord(n, tuple(letters)), cb.top_colors)


MOVES: dict[str, Callable[[random.Random, ColoredBraid], ColoredBraid]] = {
    "conjugacy": move_conjugate,
    "free insertion": move_free_insert,
    "braid relation": move_braid_relation,
    "stabilization": move_stabilize,
}


def invariance_corpus(seed: int, trials: int, max_strands: int = 4, max_length: int = 10):
    """(original, [(move, braid after the moves so far)]) pairs."""
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        cb = random_closable(rng, max_strands, max_length)
        chain = []
        cur = cb
        for name, move in MOVES.items():
            cur = move(rng, cur)
            chain.append((name, cur))
        out.append((cb, chain))
    return out


# ---------------------------------------------------------------------------
# relations evaluated on random contexts


def _embed(elem: AlgebraElement, n: int, i: int) -> list[tuple[Fraction, tuple[int, ...]]]:
    """A three-strand element moved to positions i, i+1, i+2 of B_n."""
    var_map = [i - 1, i, i + 1]
    out = []
    for c, w in elem:
        letters = tuple((abs(x) + i - 1) * (1 if x > 0 else -1) for x in w.letters)
        out.append((c.substitute(var_map, n), letters))
    return out


def _local_terms(kind: str, n: int, i: int) -> list[tuple[Fraction, tuple[int, ...]]]:
    if kind == "II":
        return [(c, w.letters) for c, w in relator_II(n, i)]
    if kind == "III":
        return [(c, w.letters) for c, w in relator_III(n, i)]
    if kind == "III4":
        return _embed(relator_III4(3), n, i)
    if kind == "III8":
        return _embed(relator_III8(3), n, i)
    if kind == "I":
        t = LaurentPoly.var(i - 1, n)
        one = Fraction.one(n)
        return [(one, (i,)), (-one, (-i,)), (-Fraction.from_poly(t - t ** -1), ())]
    raise ValueError(f"unknown relation {kind}")


def relation_value(terms, head: BraidWord, tail: BraidWord, colors: Sequence[str],
                   engine: CPFEngine | None = None) -> Fraction:
    """sum coef * cpf(head * word * tail) with coefficients read at the local top."""
    n = head.strands
    names, ctx = color_indices(colors)
    local = _ctx_after(ctx, head.letters)
    total = Fraction.zero(len(names))
    for coef, letters in terms:
        cb = ColoredBraid(BraidWord(n, head.letters + letters + tail.letters), tuple(colors))
        v = cpf_closed_braid(cb, engine)
        if v.value.is_zero():
            continue
        total = total + coef.substitute(list(local), len(names)) * v.value
    return total


def random_context(rng: random.Random, kind: str, max_strands: int, max_length: int):
    lo = 2 if kind in ("II", "I") else 3
    n = rng.randint(lo, max(lo, max_strands))
    i = rng.randint(1, n - (1 if kind in ("II", "I") else 2))
    terms = _local_terms(kind, n, i)
    half = max(1, max_length // 2)
    head = random_word(rng, n, rng.randint(0, half))
    tail = random_word(rng, n, rng.randint(0, half))
    perms = [_perm_of(n, head.letters + w + tail.letters) for _, w in terms]
    same = []
    if kind == "I":
        # both strands at the crossing carry one color
        inv = _ctx_after(tuple(range(n)), head.letters)
        same.append((inv[i - 1], inv[i]))
    colors = color_for(rng, n, perms, same)
    return n, i, terms, head, tail, colors


def suite_axioms(trials: int = 100, seed: int = 0, max_strands: int = 4, max_length: int = 10,
                 kinds: Sequence[str] = ("II", "III", "I", "III4", "III8")) -> SuiteReport:
    rep = SuiteReport("axioms")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for kind in kinds:
        for trial in range(trials):
            n, i, terms, head, tail, colors = random_context(rng, kind, max_strands, max_length)
            value = relation_value(terms, head, tail, colors)
            rep.add(f"({kind}) #{trial}", value.is_zero(),
                    "" if value.is_zero() else f"A=[{head}] B=[{tail}] i={i} colors={' '.join(colors)}")
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# suites


def suite_invariance(trials: int = 200, seed: int = 0, max_strands: int = 4, max_length: int = 10) -> SuiteReport:
    rep = SuiteReport("invariance")
    t0 = time.perf_counter()
    for idx, (cb, chain) in enumerate(invariance_corpus(seed, trials, max_strands, max_length)):
        base = cpf_closed_braid(cb)
        for name, moved in chain:
            v = cpf_closed_braid(moved)
            same = v.value == base.value and v.colors == base.colors
            rep.add(f"#{idx} {name}", same, "" if same else f"{cb} -> {moved}: {base} vs {v}")
    rep.elapsed = time.perf_counter() - t0
    return rep


def suite_identities() -> SuiteReport:
    rep = SuiteReport("identities")
    t0 = time.perf_counter()
    for name, ok in verify_relator_identities().items():
        rep.add(f"identity {name}", ok)
    count = relator_III7().expanded_term_count()
    rep.add("III7 expanded term count is 22", count == 22, f"got {count}")
    for case, ok in verify_cases().items():
        rep.add(f"three-strand case {case}", ok)
    rep.elapsed = time.perf_counter() - t0
    return rep


def suite_table1() -> SuiteReport:
    rep = SuiteReport("table1")
    t0 = time.perf_counter()
    r = verify_table1()
    bad = {(name, col) for name, col, _, _ in r.mismatches}
    for name in sorted({m[0] for m in r.mismatches} | set(_table_rows())):
        for col in range(1, 7):
            rep.add(f"S_{name} in delta_{col}", (name, col) not in bad)
    zero_bad = {name for name, _ in r.nonzero_rows}
    for name in _table_rows():
        rep.add(f"combination row S_{name} vanishes", name not in zero_bad)
    rep.elapsed = time.perf_counter() - t0
    return rep


def _table_rows() -> list[str]:
    from .hartley import _table1

    return list(_table1())


def suite_oracle(trials: int = 200, seed: int = 0, max_strands: int = 4, max_length: int = 10,
                 choices: int = 3) -> SuiteReport:
    rep = SuiteReport("oracle")
    t0 = time.perf_counter()
    rng = random.Random(seed + 1)
    for idx, (cb, chain) in enumerate(invariance_corpus(seed, trials, max_strands, max_length)):
        for label, item in (("base", cb), ("perturbed", chain[-2][1])):
            engine = cpf_closed_braid(item).value
            units = set()
            agree = True
            for _ in range(choices):
                o = oracle_invariant(item, choices=1, rng=rng)
                unit = resolve_unit(o.value, engine)
                agree = agree and unit is not None
                units.add(unit)
            rep.add(f"#{idx} {label} agrees up to a unit", agree, "" if agree else f"{item}")
            rep.add(f"#{idx} {label} unit stable", len(units) == 1, "" if len(units) == 1 else str(units))
            exact = normalized_invariant(item) == engine
            rep.add(f"#{idx} {label} normalised value equal", exact, "" if exact else f"{item}")
    rep.elapsed = time.perf_counter() - t0
    return rep


def suite_merge(trials: int = 50, seed: int = 0, max_strands: int = 4, max_length: int = 10) -> SuiteReport:
    rep = SuiteReport("merge")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    made = 0
    while made < trials:
        cb = random_closable(rng, max_strands, max_length, palette=("a", "b"))
        if len(set(cb.top_colors)) != 2:
            continue
        made += 1
        v = cpf_closed_braid(cb)
        merged = merge_colors(v, {"b": "a"})
        direct = cpf_closed_braid(ColoredBraid(cb.word, ("a",) * cb.strands))
        rep.add(f"#{made} merge b->a", merged == direct, "" if merged == direct else f"{cb}")
        rho = rho_reduce(v.value)
        same = rho == direct.value
        rep.add(f"#{made} full merge equals one-variable reduction", same, "" if same else f"{cb}")
    rep.elapsed = time.perf_counter() - t0
    return rep


def alexander_value(cb: ColoredBraid, trace=None) -> LaurentPoly:
    """Knot polynomial in s = t^2 as an integer-exponent Laurent polynomial."""
    v = cpf_closed_braid(cb, trace=trace)
    if v.value.is_zero():
        return LaurentPoly.zero(1)
    a = to_alexander(v)
    if not a.exponents_integral():
        raise ValueError(f"{cb} gives half-integer exponents")
    return LaurentPoly(1, {(e[0] // 2,): c for e, c in a.poly.terms.items()})


def suite_knots(trials: int = 50, seed: int = 0, max_strands: int = 4, max_length: int = 10) -> SuiteReport:
    rep = SuiteReport("knots")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    s = LaurentPoly.var(0, 1)
    multi: list[str] = []

    def trace(n, letters, colors):
        if component_count(n, letters) != 1:
            multi.append(f"n={n} word={letters}")

    unknot = alexander_value(ColoredBraid(BraidWord(1, ()), ("a",)))
    rep.add("(O) unknot", unknot == LaurentPoly.const(1, 1), str(unknot))
    for idx in range(trials):
        knot = random_knot(rng, max_strands, max_length)
        multi.clear()
        alexander_value(knot, trace)
        rep.add(f"#{idx} sub-evaluations stay single-component", not multi,
                "" if not multi else f"{knot}: {multi[0]}")

        # (II_K) around a random crossing position of the knot
        n = knot.strands
        i = rng.randint(1, n - 1)
        cut = rng.randint(0, len(knot.word.letters))
        head = knot.word.letters[:cut]
        tail = knot.word.letters[cut:]
        vals = {}
        for label, mid in (("pos", (i, i)), ("neg", (-i, -i)), ("none", ())):
            cb = ColoredBraid(BraidWord(n, head + mid + tail), ("a",) * n)
            vals[label] = alexander_value(cb, trace)
        lhs = vals["pos"] + vals["neg"]
        rhs = (s + s ** -1) * vals["none"]
        rep.add(f"#{idx} (II_K)", lhs == rhs, "" if lhs == rhs else f"{knot} at {i}")

        # (III_K) needs three strands; stabilize when the knot has two
        k3 = knot if n >= 3 else stabilize(knot, 1)
        n3 = k3.strands
        j = rng.randint(1, n3 - 2)
        ctx_head = random_word(rng, n3, rng.randint(0, 3))
        base = ctx_head.letters + k3.word.letters + ctx_head.inverse().letters
        cut = rng.randint(0, len(base))
        h3, t3 = base[:cut], base[cut:]
        # all four pieces permute like sigma_j sigma_{j+1} sigma_j; undo that once
        fix = (j, j + 1, j)
        fix_inv = tuple(-x for x in reversed(fix))
        pieces = {
            "A": (-j, -(j + 1), j), "B": (j, j + 1, -j),
            "C": (j, -(j + 1), -j), "D": (-j, j + 1, j),
        }
        vals = {}
        for label, piece in pieces.items():
            word = BraidWord(n3, h3 + piece + fix_inv + t3)
            vals[label] = alexander_value(ColoredBraid(word, ("a",) * n3), trace)
        lhs = vals["A"] + vals["B"]
        rhs = vals["C"] + vals["D"]
        rep.add(f"#{idx} (III_K)", lhs == rhs, "" if lhs == rhs else f"{k3} at {j}")
        rep.add(f"#{idx} relation terms stay single-component", not multi,
                "" if not multi else multi[0])
    rep.elapsed = time.perf_counter() - t0
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "axioms": suite_axioms,
    "invariance": suite_invariance,
    "identities": suite_identities,
    "table1": suite_table1,
    "oracle": suite_oracle,
    "knots": suite_knots,
    "merge": suite_merge,
}

__all__ = [
    "CheckResult",
    "MOVES",
    "SUITES",
    "SuiteReport",
    "invariance_corpus",
    "random_closable",
    "random_knot",
    "relation_value",
    "suite_axioms",
    "suite_identities",
    "suite_invariance",
    "suite_knots",
    "suite_merge",
    "suite_oracle",
    "suite_table1",
]
