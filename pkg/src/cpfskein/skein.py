"""
Rewriting braids modulo the ideal generated by the two-strand and
three-strand skein relators.

Every braid in B_n is rewritten as a combination of braids
``alpha * sigma_{n-1}^k * gamma`` with ``alpha, gamma`` in B_{n-1} and
``k`` in {-1, 0, 1, 2}. Coefficients are evaluated directly in color
variables: a ``ctx`` tuple lists the variable index of the strand sitting at
each position at the top of the braid being rewritten. Passing distinct
indices ``(0, 1, ..., n-1)`` gives the generic coefficients.

The heart is a table of rewrites of ``s2^k s1^l s2^m`` into combinations of
``s1^a s2^b s1^c`` with ``b`` in {-1, 0, 1, 2}. It is derived at import-free
runtime in P_3 B_3 from explicit products of relators and then instantiated
with the three colors at the triple's position.
"""

from __future__ import annotations

import functools
import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import Fraction, LaurentPoly
from .braid import BraidWord, _garside, _perm_of
from .twisted import AlgebraElement, elem_equal, relator_II, relator_III

Letters = tuple[int, ...]


class ReductionError(RuntimeError):
    """An internal invariant of the rewriting failed."""


# ---------------------------------------------------------------------------
# small helpers on letter tuples


def _key(n: int, letters: Letters) -> tuple:
    return _garside(n, letters)


def _free(letters: Iterable[int]) -> Letters:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _pow(i: int, k: int) -> Letters:
    return (i if k > 0 else -i,) * abs(k)


def _ctx_after(ctx: tuple[int, ...], letters: Letters) -> tuple[int, ...]:
    """Variables at each position after the prefix ``letters``."""
    if not letters:
        return ctx
    perm = _perm_of(len(ctx), letters)
    out = [0] * len(ctx)
    for p, q in enumerate(perm):
        out[q] = ctx[p]
    return tuple(out)


# ---------------------------------------------------------------------------
# powers modulo the two-strand relator


@functools.lru_cache(maxsize=1 << 14)
def _power_vector(a: int, b: int, nvars: int, k: int) -> tuple[LaurentPoly, ...]:
    """Coefficients of sigma^k on the basis (sigma^-1, e, sigma, sigma^2)."""
    if -1 <= k <= 2:
        v = [LaurentPoly.zero(nvars)] * 4
        v[k + 1] = LaurentPoly.const(1, nvars)
        return tuple(v)
    ta, tb = LaurentPoly.var(a, nvars), LaurentPoly.var(b, nvars)
    c = ta * tb + (ta ** -1) * (tb ** -1)
    if k > 2:
        p, q = _power_vector(a, b, nvars, k - 2), _power_vector(a, b, nvars, k - 4)
    else:
        p, q = _power_vector(a, b, nvars, k + 2), _power_vector(a, b, nvars, k + 4)
    return tuple(c * x - y for x, y in zip(p, q))


def normalize_power(pair: tuple[int, int], k: int, nvars: int) -> list[tuple[Fraction, int]]:
    """sigma^k as a combination of sigma^e, e in {-1, 0, 1, 2}.

    ``pair`` holds the variables of the two strands at the crossing positions;
    the coefficient ``t_a t_b + t_a^-1 t_b^-1`` is symmetric in them.
    """
    a, b = sorted(pair)
    vec = _power_vector(a, b, nvars, k)
    return [(Fraction.from_poly(c), e) for c, e in zip(vec, (-1, 0, 1, 2)) if not c.is_zero()]


# ---------------------------------------------------------------------------
# segmentation


@dataclass(frozen=True)
class SegmentedWord:
    """beta_0 sigma^{k_1} beta_1 ... sigma^{k_r} beta_r with sigma = sigma_{n-1}."""

    strands: int
    head: BraidWord
    blocks: tuple[tuple[int, BraidWord], ...]

    @property
    def r(self) -> int:
        return len(self.blocks)

    def to_word(self) -> BraidWord:
        n = self.strands
        letters = list(self.head.letters)
        for k, b in self.blocks:
            letters += _pow(n - 1, k) + b.letters
        return BraidWord(n, tuple(letters))


def _segment(n: int, letters: Letters) -> tuple[Letters, list[tuple[int, Letters]]]:
    top = n - 1
    head: list[int] = []
    blocks: list[list] = []
    for x in letters:
        if abs(x) == top:
            s = 1 if x > 0 else -1
            if blocks and not blocks[-1][1]:
                blocks[-1][0] += s
                if blocks[-1][0] == 0:
                    # sigma^k sigma^-k cancelled: glue the neighbouring B_{n-1} parts
                    blocks.pop()
            else:
                blocks.append([s, []])
        else:
            if blocks:
                blocks[-1][1].append(x)
            else:
                head.append(x)
    # a popped block may leave two B_{n-1} stretches adjacent; they were already
    # appended to the same list, so only the power merge needs care
    return tuple(head), [(k, tuple(b)) for k, b in blocks]


def segment(w: BraidWord) -> SegmentedWord:
    n = w.strands
    if n < 2:
        raise ValueError("segmentation needs at least two strands")
    head, blocks = _segment(n, _free(w.letters))
    return SegmentedWord(
        n, BraidWord(n, head), tuple((k, BraidWord(n, b)) for k, b in blocks)
    )


# ---------------------------------------------------------------------------
# the three-strand rewrite table (generic variables 0, 1, 2)

Triple = tuple[int, int, int]
Shape = tuple[int, int, int]
TripleTerms = dict[Shape, Fraction]

_G = 3  # generic variable count
_GCTX = (0, 1, 2)


def _w3(*letters: int) -> BraidWord:
    return BraidWord(3, tuple(letters))


def _shape_letters(s: Shape) -> Letters:
    a, b, c = s
    return _pow(1, a) + _pow(2, b) + _pow(1, c)


@functools.lru_cache(maxsize=1)
def _shape_index() -> dict[tuple, Shape]:
    index: dict[tuple, Shape] = {}
    rng = range(-4, 5)
    shapes = sorted(
        itertools.product(rng, range(-3, 4), rng),
        key=lambda s: (abs(s[0]) + abs(s[1]) + abs(s[2]), s[1] == 0 and s[2] != 0, s),
    )
    for s in shapes:
        index.setdefault(_key(3, _shape_letters(s)), s)
    return index


def _add_into(acc: TripleTerms, shape: Shape, coef: Fraction) -> None:
    a, b, c = shape
    if b == 0:
        shape = (a + c, 0, 0)
    if shape in acc:
        v = acc[shape] + coef
        if v.is_zero():
            del acc[shape]
        else:
            acc[shape] = v
    elif not coef.is_zero():
        acc[shape] = coef


def _emit_shape(acc: TripleTerms, shape: Shape, coef: Fraction) -> None:
    """Add ``coef * s1^a s2^b s1^c`` with the middle power normalised."""
    a, b, c = shape
    if -1 <= b <= 2:
        _add_into(acc, shape, coef)
        return
    ctx = _ctx_after(_GCTX, _pow(1, a))
    for ce, e in normalize_power((ctx[1], ctx[2]), b, _G):
        _add_into(acc, (a, e, c), coef * ce)


_table: dict[Triple, tuple[tuple[Fraction, Shape], ...]] = {}
_table_lock = threading.RLock()
_building: set[Triple] = set()
CASE_DETERMINANTS: dict[Triple, Fraction] = {}
CASE_ORDER: list[tuple[int, int]] = []


def _generic_triple(k: int, l: int, m: int) -> tuple[tuple[Fraction, Shape], ...]:
    key = (k, l, m)
    hit = _table.get(key)
    if hit is not None:
        return hit
    with _table_lock:
        hit = _table.get(key)
        if hit is not None:
            return hit
        if key in _building:
            raise ReductionError(f"circular dependency while deriving case {key}")
        _building.add(key)
        try:
            acc = _derive_triple(k, l, m)
        finally:
            _building.discard(key)
        result = tuple((c, s) for s, c in sorted(acc.items()))
        _table[key] = result
        if k == 1 and m in (-1, 1, 2):
            CASE_ORDER.append((l, m))
        return result


def _derive_triple(k: int, l: int, m: int) -> TripleTerms:
    acc: TripleTerms = {}
    if l not in (-1, 1, 2):
        raise ReductionError(f"middle exponent {l} not normalised")
    if m == 3 or m == -2 or m > 3:
        ctx = _ctx_after(_GCTX, _pow(2, k) + _pow(1, l))
        for cm, e in normalize_power((ctx[1], ctx[2]), m, _G):
            if e == 0:
                _emit_s2_prefix_free(acc, k, l, 0, cm)
            else:
                for c, s in _generic_triple(k, l, e):
                    _add_into(acc, s, cm * c)
        return acc
    if m not in (-1, 1, 2):
        raise ReductionError(f"last exponent {m} out of range")
    if k == -1 or k < -1 or k > 3:
        for ck, e in normalize_power((1, 2), k, _G):
            if e == -1:
                # sigma^-1 = c sigma - sigma^3
                for ck2, e2 in ((c, x) for c, x in _lift_inverse()):
                    for c, s in _generic_triple(e2, l, m):
                        _add_into(acc, s, ck * ck2 * c)
            elif e == 0:
                _emit_s2_prefix_free(acc, 0, l, m, ck)
            else:
                for c, s in _generic_triple(e, l, m):
                    _add_into(acc, s, ck * c)
        return acc
    if k in (2, 3):
        for c, (a, b, cc) in _generic_triple(1, l, m):
            _emit_s2_power_times(acc, k - 1, (a, b, cc), c)
        return acc
    if k != 1:
        raise ReductionError(f"first exponent {k} out of range")
    return _derive_base_case(l, m)


def _lift_inverse() -> list[tuple[Fraction, int]]:
    # sigma_2^-1 = c * sigma_2 - sigma_2^3 with c on the top variables (1, 2)
    c = Fraction.from_poly(_pair_plus(1, 2))
    return [(c, 1), (-Fraction.one(_G), 3)]


def _pair_plus(a: int, b: int) -> LaurentPoly:
    ta, tb = LaurentPoly.var(a, _G), LaurentPoly.var(b, _G)
    return ta * tb + (ta ** -1) * (tb ** -1)


def _emit_s2_prefix_free(acc: TripleTerms, k: int, l: int, m: int, coef: Fraction) -> None:
    """A word s2^k s1^l s2^m where one outer exponent vanished: a plain shape."""
    if k == 0:
        _emit_shape(acc, (l, m, 0), coef)
    else:
        _emit_shape(acc, (0, k, l), coef)


def _emit_s2_power_times(acc: TripleTerms, j: int, shape: Shape, coef: Fraction) -> None:
    """Add ``s2^j * coef * s1^a s2^b s1^c`` (coefficient twisted by s2^j)."""
    from .algebra import act_permute

    a, b, c = shape
    coef = act_permute(coef, _perm_of(3, _pow(2, j)))
    if a == 0:
        _emit_shape(acc, (0, j + b, c), coef)
        return
    if b == 0:
        _emit_shape(acc, (0, j, a + c), coef)
        return
    ctx = _ctx_after(_GCTX, _pow(2, j))
    for ca, a2 in normalize_power((ctx[0], ctx[1]), a, _G):
        if a2 == 0:
            _emit_shape(acc, (0, j + b, c), coef * ca)
            continue
        for c3, (x, y, z) in _generic_triple(j, a2, b):
            _add_into(acc, (x, y, z + c), coef * ca * c3)


# recipes for the four non-trivial base cases: relator products and unknown braids
def _recipes() -> dict[tuple[int, int], tuple[list[AlgebraElement], list[BraidWord], int]]:
    II = relator_II(3)
    III = relator_III(3)
    w = _w3
    target_121 = w(2, 1, 1, 2)
    iii_prime = III * w(1, 2, 1)
    return {
        (-1, 1): ([w(-1) * III * w(2)], [w(2, -1, 2)], 0),
        (-1, 2): ([w(-1) * III * w(2, 2)], [w(2, -1, 2, 2)], 0),
        (2, 1): (
            [iii_prime, w(-1, -1) * iii_prime, II * target_121],
            [w(1, 1) * target_121, target_121, w(-1, -1) * target_121],
            1,
        ),
        (2, 2): ([iii_prime * w(2)], [w(2, 1, 1, 2, 2)], 0),
    }


def _derive_base_case(l: int, m: int) -> TripleTerms:
    acc: TripleTerms = {}
    lhs = _key(3, _shape_letters((0, 1, 0)) + _pow(1, l) + _pow(2, m))
    shape = _shape_index().get(lhs)
    if shape is not None:
        # one of the five braid identities
        _emit_shape(acc, shape, Fraction.one(_G))
        return acc
    recipe = _recipes().get((l, m))
    if recipe is None:
        raise ReductionError(f"no derivation for s2 s1^{l} s2^{m}")
    relations, unknowns, target = recipe
    ukeys = [_key(3, u.letters) for u in unknowns]
    q = len(unknowns)
    matrix = [[Fraction.zero(_G)] * q for _ in range(q)]
    rhs: list[TripleTerms] = []
    for r, rel in enumerate(relations):
        rest: TripleTerms = {}
        for c, word in rel:
            kw = _key(3, word.letters)
            if kw in ukeys:
                j = ukeys.index(kw)
                matrix[r][j] = matrix[r][j] + c
            else:
                _expand_known(rest, word, -c)
        rhs.append(rest)
    det = _det(matrix)
    if det.is_zero():
        raise ReductionError(f"singular system for case (1, {l}, {m})")
    CASE_DETERMINANTS[(1, l, m)] = det
    inv_det = det.inverse()
    if not inv_det.is_factored():
        raise ReductionError(f"determinant of case (1, {l}, {m}) is not invertible in P_3")
    for r in range(q):
        cof = _cofactor(matrix, r, target)
        if cof.is_zero():
            continue
        for s, c in rhs[r].items():
            _add_into(acc, s, c * cof * inv_det)
    return acc


_choices: dict[tuple, tuple] = {}


def _classify(word: BraidWord) -> tuple:
    """How a three-strand word is expressed: a plain shape, or a shape around a k=1 case.

    The first successful choice for a braid is recorded so the derivation and
    its witness agree.
    """
    kw = _key(3, word.letters)
    hit = _choices.get(kw)
    if hit is not None:
        return hit
    shape = _shape_index().get(kw)
    if shape is not None:
        choice: tuple = ("shape", shape)
    else:
        for a, c, l, m in _candidates():
            if _key(3, _pow(1, a) + (2,) + _pow(1, l) + _pow(2, m) + _pow(1, c)) != kw:
                continue
            if _ready(l, m):
                choice = ("case", (a, c, l, m))
                break
        else:
            raise ReductionError(f"cannot express {word} through known rewrites")
    _choices[kw] = choice
    return choice


def _expand_known(acc: TripleTerms, word: BraidWord, coef: Fraction) -> None:
    """Add ``coef * word`` where the word is a shape or a shape around an earlier case."""
    kind, data = _classify(word)
    if kind == "shape":
        _emit_shape(acc, data, coef)
        return
    a, c, l, m = data
    ctx1 = _ctx_after(_GCTX, _pow(1, a))
    ctx2 = _ctx_after(ctx1, (2,))
    var_map = list(ctx1)
    for cl, l2 in normalize_power((ctx2[0], ctx2[1]), l, _G):
        if l2 == 0:
            _emit_shape(acc, (a, 1 + m, c), coef * cl)
            continue
        for c3, (x, y, z) in _generic_triple(1, l2, m):
            _add_into(acc, (a + x, y, z + c), coef * cl * c3.substitute(var_map, _G))


@functools.lru_cache(maxsize=1)
def _candidates() -> list[tuple[int, int, int, int]]:
    out = []
    for a, c in itertools.product(range(-2, 3), repeat=2):
        for l in (-3, -2, -1, 1, 2, 3):
            for m in (-1, 1, 2):
                out.append((a, c, l, m))
    out.sort(key=lambda t: (abs(t[0]) + abs(t[1]) + abs(t[2]), t))
    return out


def _ready(l: int, m: int) -> bool:
    """False when using the k=1 entry for ``(l, m)`` would re-enter a case being derived."""
    for l2 in {e for _, e in normalize_power((0, 1), l, _G)}:
        if l2 != 0 and (1, l2, m) in _building:
            return False
    return True


def _det(mat: list[list[Fraction]]) -> Fraction:
    q = len(mat)
    if q == 1:
        return mat[0][0]
    total = Fraction.zero(mat[0][0].nvars)
    for j in range(q):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _cofactor(mat: list[list[Fraction]], r: int, c: int) -> Fraction:
    q = len(mat)
    if q == 1:
        return Fraction.one(mat[0][0].nvars)
    minor = [row[:c] + row[c + 1:] for i, row in enumerate(mat) if i != r]
    d = _det(minor)
    return d if (r + c) % 2 == 0 else -d


def generic_rewrite(k: int, l: int, m: int) -> list[tuple[Fraction, int, int, int]]:
    """The rewrite of s2^k s1^l s2^m in generic variables (0, 1, 2)."""
    return [(c, a, b, cc) for c, (a, b, cc) in _generic_triple(k, l, m)]


@functools.lru_cache(maxsize=1 << 14)
def rewrite_triple(
    colors: tuple[int, int, int], k: int, l: int, m: int, nvars: int
) -> tuple[tuple[Fraction, int, int, int], ...]:
    """``s2^k s1^l s2^m`` as a combination of ``s1^a s2^b s1^c``, b in {-1,0,1,2}.

    ``colors`` are the variables of the strands at the three positions at the
    top of the triple; ``k, m`` in {-1, 1, 2, 3}, ``l`` in {-1, 1, 2}.
    """
    if k not in (-1, 1, 2, 3) or m not in (-1, 1, 2, 3) or l not in (-1, 1, 2):
        raise ValueError(f"exponents {(k, l, m)} outside the supported range")
    out = []
    var_map = list(colors)
    for c, (a, b, cc) in _generic_triple(k, l, m):
        out.append((c.substitute(var_map, nvars), a, b, cc))
    return tuple(out)


def triple_element(terms: Iterable[tuple[Fraction, int, int, int]]) -> AlgebraElement:
    """The P_3 B_3 element sum coef * s1^a s2^b s1^c (generic coefficients)."""
    return AlgebraElement(3, [(c, BraidWord(3, _shape_letters((a, b, cc)))) for c, a, b, cc in terms])


# ---------------------------------------------------------------------------
# witnesses: each k=1 rewrite differs from its left side by an explicit
# combination of relator instances and previously verified rewrites


def _braid(*letters: int) -> AlgebraElement:
    return AlgebraElement.braid(_w3(*letters))


@functools.lru_cache(maxsize=None)
def _power_witness(i: int, b: int) -> AlgebraElement:
    """sigma_i^b minus its normalised form, written through (II) instances."""
    if -1 <= b <= 2:
        return AlgebraElement.zero(3)
    c = Fraction.from_poly(_pair_plus(i - 1, i))
    step = -2 if b > 2 else 2
    return (
        _braid(*_pow(i, b + step)) * relator_II(3, i)
        + _power_witness(i, b + step).scale(c)
        - _power_witness(i, b + 2 * step)
    )


def _shape_witness(shape: Shape) -> AlgebraElement:
    a, b, c = shape
    return _braid(*_pow(1, a)) * _power_witness(2, b) * _braid(*_pow(1, c))


def _scalar_through(prefix: Letters, coef: Fraction) -> AlgebraElement:
    """``prefix * coef * prefix^-1``: a generic coefficient moved to the far left."""
    inv = tuple(-x for x in reversed(prefix))
    return _braid(*prefix) * AlgebraElement.scalar(coef, 3) * _braid(*inv)


def _word_witness(word: BraidWord, diffs: dict[tuple[int, int], AlgebraElement]) -> AlgebraElement:
    """``word`` minus its expansion, through relators and the rewrites in ``diffs``."""
    kind, data = _classify(word)
    if kind == "shape":
        return _shape_witness(data)
    a, c, l, m = data
    head, tail = _pow(1, a), _pow(1, c)
    out = _braid(*head, 2) * _power_witness(1, l) * _braid(*_pow(2, m), *tail)
    for cl, l2 in normalize_power((0, 1), l, _G):
        moved = _scalar_through(head + (2,), cl)
        if l2 == 0:
            out = out + moved * _shape_witness((a, 1 + m, c))
        else:
            out = out + moved * _braid(*head) * diffs[(l2, m)] * _braid(*tail)
    return out


def case_difference(l: int, m: int) -> AlgebraElement:
    """``s2 s1^l s2^m`` minus its rewrite, as an algebra element."""
    lhs = _braid(2, *_pow(1, l), *_pow(2, m))
    return lhs - triple_element(generic_rewrite(1, l, m))


def case_witness(l: int, m: int, diffs: dict[tuple[int, int], AlgebraElement]) -> AlgebraElement:
    """An explicit ideal element that must equal ``case_difference(l, m)``.

    ``diffs`` holds the differences of the cases derived before this one.
    """
    generic_rewrite(1, l, m)
    lhs_key = _key(3, (2,) + _pow(1, l) + _pow(2, m))
    shape = _shape_index().get(lhs_key)
    if shape is not None:
        return _shape_witness(shape)
    relations, unknowns, target = _recipes()[(l, m)]
    ukeys = [_key(3, u.letters) for u in unknowns]
    q = len(unknowns)
    matrix = [[Fraction.zero(_G)] * q for _ in range(q)]
    for r, rel in enumerate(relations):
        for c, word in rel:
            kw = _key(3, word.letters)
            if kw in ukeys:
                matrix[r][ukeys.index(kw)] = matrix[r][ukeys.index(kw)] + c
    inv_det = _det(matrix).inverse()
    out = AlgebraElement.zero(3)
    for r, rel in enumerate(relations):
        lam = _cofactor(matrix, r, target) * inv_det
        if lam.is_zero():
            continue
        rest = AlgebraElement.zero(3)
        for c, word in rel:
            if _key(3, word.letters) not in ukeys:
                rest = rest + _word_witness(word, diffs).scale(c)
        out = out + (rel - rest).scale(lam)
    return out


def verify_cases() -> dict[tuple[int, int, int], bool]:
    """Check every k=1 rewrite against its witness, in derivation order.

    The determinant of the three-unknown case must be a square of the
    (1, 2) pair factor up to sign.
    """
    for l in (-1, 1, 2):
        for m in (-1, 1, 2):
            generic_rewrite(1, l, m)
    diffs: dict[tuple[int, int], AlgebraElement] = {}
    results: dict[tuple[int, int, int], bool] = {}
    for l, m in list(CASE_ORDER):
        diff = case_difference(l, m)
        ok = elem_equal(diff, case_witness(l, m, diffs))
        diffs[(l, m)] = diff
        results[(1, l, m)] = ok
    pair = Fraction.from_poly(LaurentPoly.var(0, 3) * LaurentPoly.var(1, 3)
                              - LaurentPoly.var(0, 3, -1) * LaurentPoly.var(1, 3, -1))
    det = CASE_DETERMINANTS.get((1, 2, 1))
    results[(1, 2, 1)] = results.get((1, 2, 1), False) and det is not None and (
        det == pair * pair or det == -(pair * pair)
    )
    return results


# ---------------------------------------------------------------------------
# reduction of a whole braid


@dataclass(frozen=True)
class ReducedTerm:
    coef: Fraction
    alpha: BraidWord
    k: int
    gamma: BraidWord

    def word(self) -> BraidWord:
        n = self.alpha.strands
        return BraidWord(n, self.alpha.letters + _pow(n - 1, self.k) + self.gamma.letters)


@dataclass(frozen=True)
class ReducedForm:
    strands: int
    terms: tuple[ReducedTerm, ...]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


Acc = dict[tuple, list]


class Reducer:
    """Memoising implementation of the braid reduction.

    The memo tables are plain dicts; a lock serialises inserts so concurrent
    readers only ever see complete entries. Entries are keyed by the word,
    not its normal form: reduced forms are not unique, and one taken from a
    long representative can be far larger than the word's own.
    """

    def __init__(self):
        self._memo: dict[tuple, tuple] = {}
        self._lock = threading.Lock()

    def reduce(self, n: int, letters: Letters, ctx: tuple[int, ...], nvars: int) -> tuple:
        """Tuple of (coef, alpha, k, gamma) with letters tuples; merged on normal forms."""
        letters = _free(letters)
        key = (n, letters, ctx, nvars)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        acc: Acc = {}
        self._reduce_into(acc, n, letters, ctx, nvars, Fraction.one(nvars))
        result = tuple((c, a, k, g) for c, a, k, g in acc.values() if not c.is_zero())
        with self._lock:
            self._memo.setdefault(key, result)
        return result

    def clear(self) -> None:
        with self._lock:
            self._memo.clear()

    # accumulation

    @staticmethod
    def _emit(acc: Acc, n: int, alpha: Letters, k: int, gamma: Letters, coef: Fraction) -> None:
        if coef.is_zero():
            return
        alpha, gamma = _free(alpha), _free(gamma)
        if k == 0:
            alpha, gamma = _free(alpha + gamma), ()
        key = (_key(n, alpha), k, _key(n, gamma))
        slot = acc.get(key)
        if slot is None:
            acc[key] = [coef, alpha, k, gamma]
        else:
            slot[0] = slot[0] + coef

    def _reduce_into(self, acc: Acc, n, letters, ctx, nvars, coef) -> None:
        if n < 2:
            raise ValueError("reduction needs at least two strands")
        head, blocks = _segment(n, letters)
        if not blocks:
            self._emit(acc, n, head, 0, (), coef)
            return
        if len(blocks) == 1:
            k, tail = blocks[0]
            self._r1(acc, n, head, k, tail, ctx, nvars, coef)
            return
        k1 = blocks[0][0]
        suffix = list(blocks[0][1])
        for k, b in blocks[1:]:
            suffix += _pow(n - 1, k) + b
        ctx2 = _ctx_after(ctx, head + _pow(n - 1, k1))
        for c, a2, k2, g2 in self.reduce(n, tuple(suffix), ctx2, nvars):
            if k2 == 0:
                self._r1(acc, n, head, k1, a2 + g2, ctx, nvars, coef * c)
            else:
                self._r2(acc, n, head, k1, a2, k2, g2, ctx, nvars, coef * c)

    def _r1(self, acc, n, pre, k, post, ctx, nvars, coef) -> None:
        if k == 0:
            self._emit(acc, n, pre + post, 0, (), coef)
            return
        c_at = _ctx_after(ctx, pre)
        for ce, e in normalize_power((c_at[n - 2], c_at[n - 1]), k, nvars):
            self._emit(acc, n, pre, e, post, coef * ce)

    def _r2(self, acc, n, pre, k, mid, m, post, ctx, nvars, coef) -> None:
        if not _free(mid) or _key(n, mid) == _key(n, ()):
            self._r1(acc, n, pre, k + m, post, ctx, nvars, coef)
            return
        top = n - 1
        c_pre = _ctx_after(ctx, pre)
        for ca, a in normalize_power((c_pre[n - 2], c_pre[n - 1]), k, nvars):
            if a == 0:
                self._r1(acc, n, pre + mid, m, post, ctx, nvars, coef * ca)
                continue
            c_mid = _ctx_after(c_pre, _pow(top, a))
            c_post = _ctx_after(c_mid, mid)
            for cb, b in normalize_power((c_post[n - 2], c_post[n - 1]), m, nvars):
                cab = coef * ca * cb
                if b == 0:
                    self._emit(acc, n, pre, a, mid + post, cab)
                    continue
                for c1, al1, l, ga1 in self.reduce(n - 1, mid, c_mid[: n - 1], nvars):
                    if l == 0:
                        self._r1(acc, n, pre + al1 + ga1, a + b, post, ctx, nvars, cab * c1)
                        continue
                    c_t = _ctx_after(c_pre, al1)
                    tri = (c_t[n - 3], c_t[n - 2], c_t[n - 1])
                    for c3, x, y, z in rewrite_triple(tri, a, l, b, nvars):
                        alpha = pre + al1 + _pow(n - 2, x)
                        gamma = _pow(n - 2, z) + ga1 + post
                        self._emit(acc, n, alpha, y, gamma, cab * c1 * c3)


_default_reducer = Reducer()


def reduce_top(w: BraidWord, colors: Sequence[int] | None = None, nvars: int | None = None,
               reducer: Reducer | None = None) -> ReducedForm:
    """Rewrite ``w`` as sum coef * alpha sigma_{n-1}^k gamma, k in {-1, 0, 1, 2}.

    ``colors[p]`` is the variable of the strand at top position ``p + 1``;
    the default gives every strand its own variable.
    """
    n = w.strands
    ctx = tuple(colors) if colors is not None else tuple(range(n))
    nv = nvars if nvars is not None else max(ctx) + 1
    red = reducer or _default_reducer
    terms = red.reduce(n, w.letters, ctx, nv)
    return ReducedForm(n, tuple(
        ReducedTerm(c, BraidWord(n, a), k, BraidWord(n, g)) for c, a, k, g in terms
    ))


def reduced_form_element(rf: ReducedForm) -> AlgebraElement:
    """The reduced form as an algebra element (generic coefficients only)."""
    return AlgebraElement(rf.strands, [(t.coef, t.word()) for t in rf])
