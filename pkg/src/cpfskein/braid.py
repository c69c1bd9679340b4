"""
Braid words, permutations, Garside normal forms and colored closed braids.

Conventions: braids are read top to bottom, strands are numbered at the top
from 1, and the letter ``+i`` is the generator sigma_i crossing the strands at
positions ``i`` and ``i+1`` (strand at ``i`` passes over). ``-i`` is its inverse.
The product ``u * v`` draws ``v`` below ``u``.

Permutations are stored 0-based (``images[p]`` is the bottom position of the
strand starting at top position ``p``); the public accessors are 1-based.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field


class BraidError(ValueError):
    """Malformed braid input or a move applied outside its preconditions."""


class NotClosableError(BraidError):
    pass


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        """1-based image: the bottom position of the strand starting at ``i``."""
        return self.images[i - 1] + 1

    def then(self, other: Permutation) -> Permutation:
        """The permutation of ``u * v`` given ``self = perm(u)``, ``other = perm(v)``."""
        return Permutation(tuple(other.images[x] for x in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for p, q in enumerate(self.images):
            inv[q] = p
        return Permutation(tuple(inv))

    def cycles(self) -> list[list[int]]:
        """Cycles as lists of 0-based positions, each starting at its smallest element."""
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen:
                continue
            cyc = []
            p = start
            while p not in seen:
                seen.add(p)
                cyc.append(p)
                p = self.images[p]
            out.append(cyc)
        return out

    def is_identity(self) -> bool:
        return all(p == q for p, q in enumerate(self.images))


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise BraidError(f"generator {x} out of range for {self.strands} strands")

    @classmethod
    def identity(cls, n: int) -> BraidWord:
        return cls(n, ())

    @classmethod
    def power(cls, n: int, i: int, k: int) -> BraidWord:
        """sigma_i^k."""
        return cls(n, (i if k > 0 else -i,) * abs(k))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        if not isinstance(other, BraidWord):
            return NotImplemented
        if other.strands != self.strands:
            raise BraidError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def free_reduce(self) -> BraidWord:
        out: list[int] = []
        for x in self.letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return BraidWord(self.strands, tuple(out))

    def with_strands(self, n: int) -> BraidWord:
        return BraidWord(n, self.letters)

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def permutation(self) -> Permutation:
        return underlying_permutation(self)

    def nf(self) -> GarsideNF:
        return garside_nf(self)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters) or "e"


def parse_word(text: str, strands: int) -> BraidWord:
    """Whitespace-separated signed generator indices, e.g. ``"1 -2 1"``."""
    letters = []
    for tok in text.replace(",", " ").split():
        try:
            x = int(tok)
        except ValueError:
            raise BraidError(f"not an integer: {tok!r}") from None
        letters.append(x)
    return BraidWord(strands, tuple(letters))


def underlying_permutation(w: BraidWord) -> Permutation:
    return Permutation(_perm_of(w.strands, w.letters))


@functools.lru_cache(maxsize=1 << 16)
def _perm_of(n: int, letters: tuple[int, ...]) -> tuple[int, ...]:
    pos = list(range(n))          # pos[strand] = current position
    at = list(range(n))           # at[position] = strand
    for x in letters:
        i = abs(x) - 1
        a, b = at[i], at[i + 1]
        at[i], at[i + 1] = b, a
        pos[a], pos[b] = i + 1, i
    return tuple(pos)


# ---------------------------------------------------------------------------
# Garside normal form (classical structure, Delta = half twist)


@dataclass(frozen=True)
class GarsideNF:
    """Delta^infimum times left-greedy simple factors (0-based permutation tuples)."""

    strands: int
    infimum: int
    factors: tuple[tuple[int, ...], ...] = field(default=())

    def is_identity(self) -> bool:
        return self.infimum == 0 and not self.factors

    def to_word(self) -> BraidWord:
        """A word representing this braid (positive factors after a power of Delta)."""
        n = self.strands
        delta = _simple_word(tuple(range(n - 1, -1, -1)))
        letters: list[int] = []
        if self.infimum > 0:
            letters += list(delta) * self.infimum
        elif self.infimum < 0:
            letters += [-x for x in reversed(delta)] * -self.infimum
        for f in self.factors:
            letters += list(_simple_word(f))
        return BraidWord(n, tuple(letters))


def garside_nf(w: BraidWord) -> GarsideNF:
    inf, factors = _garside(w.strands, w.letters)
    return GarsideNF(w.strands, inf, factors)


def nf_key(w: BraidWord) -> tuple:
    """Hashable key; equal exactly when the words are equal in the braid group."""
    return (w.strands,) + _garside(w.strands, w.letters)


def _swap(perm: tuple[int, ...], i: int) -> tuple[int, ...]:
    # compose with the transposition (i, i+1) on the bottom side
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in perm)


def _starts_with(perm: tuple[int, ...], i: int) -> bool:
    # sigma_i is a left divisor iff the strands at top positions i, i+1 cross
    return perm[i] > perm[i + 1]


def _right_mult_simple(perm: tuple[int, ...], i: int) -> bool:
    # perm * sigma_i stays simple iff the strands ending at i, i+1 have not crossed yet
    p = perm.index(i)
    q = perm.index(i + 1)
    return p < q


def _strip_left(perm: tuple[int, ...], i: int) -> tuple[int, ...]:
    # sigma_i^-1 * perm, assuming sigma_i is a left divisor
    lst = list(perm)
    lst[i], lst[i + 1] = lst[i + 1], lst[i]
    return tuple(lst)


def _left_weight(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(a)
    moved = True
    while moved:
        moved = False
        for i in range(n - 1):
            if _starts_with(b, i) and _right_mult_simple(a, i):
                a = _swap(a, i)
                b = _strip_left(b, i)
                moved = True
    return a, b


@functools.lru_cache(maxsize=1 << 16)
def _garside(n: int, letters: tuple[int, ...]) -> tuple[int, tuple[tuple[int, ...], ...]]:
    ident = tuple(range(n))
    delta = tuple(range(n - 1, -1, -1))
    inf = 0
    factors: list[tuple[int, ...]] = []
    for x in letters:
        i = abs(x) - 1
        if x > 0:
            factors.append(_swap(ident, i))
        else:
            # sigma_i^-1 = Delta^-1 (Delta sigma_i^-1); pushing Delta^-1 left flips every factor
            factors = [tuple(n - 1 - f[n - 1 - p] for p in range(n)) for f in factors]
            inf -= 1
            factors.append(tuple(i + 1 if d == i else i if d == i + 1 else d for d in delta))
    changed = True
    while changed:
        changed = False
        for j in range(len(factors) - 2, -1, -1):
            a, b = _left_weight(factors[j], factors[j + 1])
            if (a, b) != (factors[j], factors[j + 1]):
                factors[j], factors[j + 1] = a, b
                changed = True
    lo, hi = 0, len(factors)
    while lo < hi and factors[lo] == delta:
        lo += 1
    while hi > lo and factors[hi - 1] == ident:
        hi -= 1
    return inf + lo, tuple(factors[lo:hi])


@functools.lru_cache(maxsize=4096)
def _simple_word(perm: tuple[int, ...]) -> tuple[int, ...]:
    # bubble sort the bottom positions; each adjacent swap is a positive generator
    n = len(perm)
    letters = []
    cur = tuple(range(n))
    target = perm
    while cur != target:
        for i in range(n - 1):
            # find a generator that is a left divisor of cur^-1 * target
            rest = _quotient(cur, target)
            if _starts_with(rest, i):
                letters.append(i + 1)
                cur = _swap(cur, i)
                break
    return tuple(letters)


def _quotient(cur: tuple[int, ...], target: tuple[int, ...]) -> tuple[int, ...]:
    # permutation r with cur then r == target
    inv = [0] * len(cur)
    for p, q in enumerate(cur):
        inv[q] = p
    return tuple(target[inv[q]] for q in range(len(cur)))


# ---------------------------------------------------------------------------
# colored braids


@dataclass(frozen=True)
class ColoredBraid:
    """A braid with a color label on each strand at the top."""

    word: BraidWord
    top_colors: tuple[str, ...]

    def __post_init__(self):
        if len(self.top_colors) != self.word.strands:
            raise BraidError(
                f"{len(self.top_colors)} colors given for {self.word.strands} strands"
            )

    @property
    def strands(self) -> int:
        return self.word.strands

    def bottom_colors(self) -> tuple[str, ...]:
        perm = self.word.permutation().images
        out = [""] * self.strands
        for p, q in enumerate(perm):
            out[q] = self.top_colors[p]
        return tuple(out)

    def __str__(self) -> str:
        return f"[{self.word}] ({' '.join(self.top_colors)})"


def is_closable(cb: ColoredBraid) -> bool:
    """True iff ``t_i == t_{i^beta}`` for every strand."""
    perm = cb.word.permutation().images
    return all(cb.top_colors[p] == cb.top_colors[q] for p, q in enumerate(perm))


def _require_closable(cb: ColoredBraid) -> None:
    if not is_closable(cb):
        raise NotClosableError(f"colored braid {cb} is not closable")


def conjugate_colored(cb: ColoredBraid, alpha: BraidWord) -> ColoredBraid:
    """``alpha * beta * alpha^-1`` with colors ``t'_i = t_{i^alpha}``."""
    _require_closable(cb)
    if alpha.strands != cb.strands:
        raise BraidError("conjugating braid has the wrong strand count")
    perm = alpha.permutation().images
    colors = tuple(cb.top_colors[perm[p]] for p in range(cb.strands))
    return ColoredBraid(alpha * cb.word * alpha.inverse(), colors)


def stabilize(cb: ColoredBraid, sign: int = 1) -> ColoredBraid:
    """Markov move ``beta -> beta sigma_n^{+-1}`` duplicating the last color."""
    n = cb.strands
    word = BraidWord(n + 1, cb.word.letters + ((n if sign > 0 else -n),))
    return ColoredBraid(word, cb.top_colors + (cb.top_colors[-1],))


def destabilize(cb: ColoredBraid) -> ColoredBraid:
    """Inverse Markov move: ``beta sigma_{n-1}^{+-1}`` in B_n to ``beta`` in B_{n-1}."""
    n = cb.strands
    letters = cb.word.letters
    if n < 2 or not letters or abs(letters[-1]) != n - 1:
        raise BraidError("word does not end with sigma_{n-1}^{+-1}")
    if any(abs(x) == n - 1 for x in letters[:-1]):
        raise BraidError("sigma_{n-1} occurs before the final letter")
    if cb.top_colors[n - 2] != cb.top_colors[n - 1]:
        raise BraidError("last two strands carry different colors")
    return ColoredBraid(BraidWord(n - 1, letters[:-1]), cb.top_colors[:-1])


def closure_components(cb: ColoredBraid) -> list[tuple[frozenset[int], str]]:
    """Components of the closure as (1-based strand set, color)."""
    _require_closable(cb)
    return [
        (frozenset(p + 1 for p in cyc), cb.top_colors[cyc[0]])
        for cyc in cb.word.permutation().cycles()
    ]
