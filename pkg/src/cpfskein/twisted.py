"""
The twisted group algebra P_n B_n and its skein relators.

Coefficients of an ``AlgebraElement`` are fractions whose variable ``i``
stands for the color of the strand at top position ``i + 1``. Multiplication
twists the right-hand coefficient by the left braid's permutation:

    (C1 b1) (C2 b2) = (C1 * b1.C2) (b1 b2)

Terms are merged on the Garside normal form of their braid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .algebra import Fraction, LaurentPoly, act_permute, pair_factors
from .braid import BraidError, BraidWord, Permutation, nf_key


class AlgebraElement:
    __slots__ = ("strands", "terms")

    def __init__(self, strands: int, terms: Iterable[tuple[Fraction, BraidWord]] = ()):
        self.strands = strands
        merged: dict[tuple, tuple[Fraction, BraidWord]] = {}
        for c, w in terms:
            if w.strands != strands:
                raise BraidError("strand count mismatch")
            if c.nvars != strands:
                raise ValueError("coefficients must have one variable per strand")
            key = nf_key(w)
            if key in merged:
                old, rep = merged[key]
                merged[key] = (old + c, rep)
            else:
                merged[key] = (c, w.free_reduce())
        self.terms = {k: v for k, v in merged.items() if not v[0].is_zero()}

    @classmethod
    def braid(cls, w: BraidWord, coef: Fraction | LaurentPoly | int = 1) -> AlgebraElement:
        n = w.strands
        if isinstance(coef, int):
            coef = Fraction.const(coef, n)
        elif isinstance(coef, LaurentPoly):
            coef = Fraction.from_poly(coef)
        return cls(n, [(coef, w)])

    @classmethod
    def scalar(cls, coef: Fraction | LaurentPoly | int, n: int) -> AlgebraElement:
        return cls.braid(BraidWord.identity(n), coef)

    @classmethod
    def zero(cls, n: int) -> AlgebraElement:
        return cls(n)

    def __iter__(self) -> Iterator[tuple[Fraction, BraidWord]]:
        return iter(self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, w: BraidWord) -> Fraction:
        hit = self.terms.get(nf_key(w))
        return hit[0] if hit else Fraction.zero(self.strands)

    def _check(self, other: AlgebraElement) -> None:
        if self.strands != other.strands:
            raise BraidError("strand count mismatch")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        return AlgebraElement(self.strands, list(self) + list(other))

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.strands, [(-c, w) for c, w in self])

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scale(self, c: Fraction | LaurentPoly | int) -> AlgebraElement:
        """Left multiplication by the scalar ``c * e`` (no twist)."""
        return AlgebraElement(self.strands, [(cc * c, w) for cc, w in self])

    def __mul__(self, other) -> AlgebraElement:
        if isinstance(other, (Fraction, LaurentPoly, int)):
            # right scalar c*e: (C b)(c e) = (C * b.c) b
            return self * AlgebraElement.scalar(other, self.strands)
        if isinstance(other, BraidWord):
            other = AlgebraElement.braid(other)
        self._check(other)
        return elem_mul(self, other)

    def __rmul__(self, other) -> AlgebraElement:
        if isinstance(other, (Fraction, LaurentPoly, int)):
            return self.scale(other)
        if isinstance(other, BraidWord):
            return elem_mul(AlgebraElement.braid(other), self)
        return NotImplemented

    def __truediv__(self, c: Fraction | LaurentPoly) -> AlgebraElement:
        if isinstance(c, LaurentPoly):
            c = Fraction.from_poly(c)
        return self.scale(c.inverse())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return elem_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def expanded_term_count(self) -> int:
        """Number of monomial-times-braid terms after expanding every coefficient."""
        total = 0
        for c, _ in self:
            if not c.is_polynomial():
                raise ValueError("term count is only defined for Laurent coefficients")
            total += len(c.num.terms)
        return total

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        names = [f"t{i + 1}" for i in range(self.strands)]
        parts = [f"({c.to_str(names)})*[{w}]" for c, w in sorted(self, key=lambda t: str(t[1]))]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"AlgebraElement({self.to_str()})"


def elem_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Twisted product, extended bilinearly."""
    if x.strands != y.strands:
        raise BraidError("strand count mismatch")
    out = []
    for c1, w1 in x:
        perm = w1.permutation().images
        for c2, w2 in y:
            out.append((c1 * act_permute(c2, perm), w1 * w2))
    return AlgebraElement(x.strands, out)


def elem_equal(x: AlgebraElement, y: AlgebraElement) -> bool:
    if x.strands != y.strands:
        return False
    return len(x - y) == 0


def is_homogeneous(x: AlgebraElement) -> bool:
    perms = {w.permutation() for _, w in x}
    return len(perms) <= 1


# ---------------------------------------------------------------------------
# relators


def _t(n: int):
    return [LaurentPoly.var(i, n) for i in range(n)]


def _word(n: int, *letters: int) -> BraidWord:
    return BraidWord(n, tuple(letters))


def pair_poly(n: int, a: int, b: int, sign: int = -1) -> LaurentPoly:
    """``t_a t_b + sign * t_a^-1 t_b^-1`` (0-based variable indices)."""
    t = _t(n)
    return t[a] * t[b] + sign * (t[a] ** -1) * (t[b] ** -1)


def relator_II(n: int, i: int = 1) -> AlgebraElement:
    """sigma_i^2 + sigma_i^-2 - (t_i t_{i+1} + t_i^-1 t_{i+1}^-1) e."""
    a, b = i - 1, i
    return AlgebraElement(n, [
        (Fraction.one(n), _word(n, i, i)),
        (Fraction.one(n), _word(n, -i, -i)),
        (-Fraction.from_poly(pair_poly(n, a, b, +1)), BraidWord.identity(n)),
    ])


def relator_III(n: int, i: int = 1) -> AlgebraElement:
    """The six-braid relator on positions i, i+1, i+2 (variables at those positions)."""
    t = _t(n)
    a, b, c = i - 1, i, i + 1
    j = i + 1
    A = Fraction.from_poly(t[a] ** -1 * t[b] ** -1 - t[a] * t[b])
    B = Fraction.from_poly(t[b] * t[c] - t[b] ** -1 * t[c] ** -1)
    C = Fraction.from_poly(t[a] * t[c] ** -1 - t[a] ** -1 * t[c])
    return AlgebraElement(n, [
        (A, _word(n, -i, -j, i)), (A, _word(n, i, j, -i)),
        (B, _word(n, i, -j, -i)), (B, _word(n, -i, j, i)),
        (C, _word(n, i, j, i)), (C, _word(n, -i, -j, -i)),
    ])


@dataclass(frozen=True)
class RelatorInstance:
    kind: str            # "II" or "III"
    position: int
    prefix_perm: Permutation
    element: AlgebraElement


def _twist(x: AlgebraElement, perm: Permutation) -> AlgebraElement:
    return AlgebraElement(x.strands, [(act_permute(c, perm.images), w) for c, w in x])


def make_relator_II(i: int, prefix_perm: Permutation | None, n: int) -> RelatorInstance:
    if not 1 <= i <= n - 1:
        raise BraidError(f"position {i} out of range for (II) on {n} strands")
    perm = prefix_perm or Permutation.identity(n)
    return RelatorInstance("II", i, perm, _twist(relator_II(n, i), perm))


def make_relator_III(i: int, prefix_perm: Permutation | None, n: int) -> RelatorInstance:
    if not 1 <= i <= n - 2:
        raise BraidError(f"position {i} out of range for (III) on {n} strands")
    perm = prefix_perm or Permutation.identity(n)
    return RelatorInstance("III", i, perm, _twist(relator_III(n, i), perm))


def relator_III4(n: int = 3) -> AlgebraElement:
    one = Fraction.one(n)
    return AlgebraElement(n, [
        (one, _word(n, -1, 2, -1)), (-one, _word(n, 1, -2, 1)),
        (one, _word(n, 2, -1, 2)), (-one, _word(n, -2, 1, -2)),
    ])


def relator_III8(n: int = 3) -> AlgebraElement:
    t = _t(n)
    F = Fraction.from_poly
    t1, t2, t3 = t[0], t[1], t[2]
    return AlgebraElement(n, [
        (F(t1 * t2), _word(n, -1, -2, 1)),
        (F(-(t1 ** -1) * t2 ** -1), _word(n, 1, 2, -1)),
        (F(t2 ** -1 * t3 ** -1), _word(n, 1, -2, -1)),
        (F(-t2 * t3), _word(n, -1, 2, 1)),
        (F(t1 ** -1 * t3), _word(n, 1, 2, 1)),
        (F(-t1 * t3 ** -1), _word(n, -1, -2, -1)),
        (Fraction.one(n), _word(n, -1, 2, -1)),
        (-Fraction.one(n), _word(n, 1, -2, 1)),
    ])


def relator_III7(n: int = 3) -> AlgebraElement:
    t = _t(n)
    F = Fraction.from_poly
    t1, t2, t3 = t[0], t[1], t[2]
    inv = lambda x: x ** -1  # noqa: E731
    return AlgebraElement(n, [
        (F((t1 + inv(t1)) * (t2 - inv(t2))), _word(n, 2, 1, 1, 2)),
        (F(-(t2 - inv(t2)) * (t3 + inv(t3))), _word(n, 1, 2, 2, 1)),
        (F(-(inv(t1) * t3 - t1 * inv(t3))), _word(n, 1, 1, 2, 2)),
        (F(-(inv(t1) * t3 - t1 * inv(t3))), _word(n, 2, 2, 1, 1)),
        (F((inv(t1) * t2 * t3 - t1 * inv(t2) * inv(t3)) * (t3 + inv(t3))), _word(n, 1, 1)),
        (F(-(t1 + inv(t1)) * (t1 * t2 * inv(t3) - inv(t1) * inv(t2) * t3)), _word(n, 2, 2)),
        (F(-(inv(t1) ** 2 * t3 ** 2 - t1 ** 2 * inv(t3) ** 2)), BraidWord.identity(n)),
    ])


# ---------------------------------------------------------------------------
# the identities relating the relators in P_3 B_3


def _div_pair12(x: AlgebraElement) -> AlgebraElement:
    n = x.strands
    out = x
    for f in pair_factors(0, 1):
        out = AlgebraElement(n, [(c.div_by_factor(f), w) for c, w in out])
    return out


def relator_identities() -> dict[str, tuple[AlgebraElement, AlgebraElement]]:
    """Named (lhs, rhs) pairs that must be equal in P_3 B_3."""
    n = 3
    w = lambda *ls: _word(n, *ls)  # noqa: E731
    t = _t(n)
    F = Fraction.from_poly
    t1, t2, t3 = t
    II = relator_II(n)
    III = relator_III(n)
    III4 = relator_III4(n)
    III8 = relator_III8(n)
    III7 = relator_III7(n)

    rhs_4 = _div_pair12(w(1) * III * w(-2) - w(-1) * III * w(2))

    rhs_8 = (
        _div_pair12((AlgebraElement.braid(w(1, 1)) - AlgebraElement.scalar(t1 * t2, n)) * III)
        + II * w(1, 2, -1)
        - II * _div_pair12(
            AlgebraElement.braid(w(1, -2, -1), pair_poly(n, 1, 2))
            + AlgebraElement.braid(w(1, 2, 1), t1 * t3 ** -1 - t1 ** -1 * t3)
        )
    )

    rhs_3 = w(-1, -2, -1) * III8 * w(1, 2, 1) - III8 + III4

    c13 = t1 * t3 ** -1 - t1 ** -1 * t3
    rhs_7 = (
        III.scale(F(t1 ** -1 * t3))
        - III8.scale(F(c13))
        + _div_pair12(III.scale(F(t2 * t3 ** -1 - t2 ** -1 * t3)) - (w(-1) * III * w(2)).scale(F(c13)))
    )
    return {
        "III4": (III4, rhs_4),
        "III8": (III8, rhs_8),
        "III": (III, rhs_3),
        "III7": (III7 * w(-1, -2, -1), rhs_7),
    }


def verify_relator_identities() -> dict[str, bool]:
    return {name: elem_equal(lhs, rhs) for name, (lhs, rhs) in relator_identities().items()}
