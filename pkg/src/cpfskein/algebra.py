"""
Exact arithmetic for the coefficient domain.

Three layers live here:

- ``LaurentPoly``: sparse multivariate Laurent polynomials with Python ``int``
  coefficients. Variables are indexed ``0..nvars-1``; an exponent vector is a
  tuple of length ``nvars``.
- ``DenomFactor``: the three denominator shapes the skein reduction can produce,
  ``t_a - t_a^-1``, ``t_a + t_a^-1`` and ``t_a t_b - t_a^-1 t_b^-1``. All of them
  survive the one-variable reduction, so a fraction whose denominator is built
  from them is persistent by construction.
- ``Fraction``: a Laurent numerator over a multiset of ``DenomFactor`` and an
  optional unfactored fallback denominator.

No multivariate gcd is computed anywhere. The three factor kinds are pairwise
coprime, so trial division of the numerator by each factor gives a canonical
form whenever the fallback denominator is absent.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Exps = tuple[int, ...]


class AlgebraError(ArithmeticError):
    """Raised on an operation outside the persistent-fraction domain."""


@dataclass(frozen=True)
class ColorVar:
    """A color symbol. ``index`` is the variable slot used in polynomials."""

    index: int
    name: str

    @property
    def display_name(self) -> str:
        return self.name


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _sub_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


class LaurentPoly:
    """Immutable sparse Laurent polynomial over the integers.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps agree.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exps, int] | None = None):
        self.nvars = nvars
        clean: dict[Exps, int] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    if len(e) != nvars:
                        raise ValueError(f"exponent vector {e} does not have length {nvars}")
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exps, int]) -> LaurentPoly:
        # terms must already be clean
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> LaurentPoly:
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, c: int, nvars: int) -> LaurentPoly:
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: int = 1) -> LaurentPoly:
        exps = tuple(exps)
        return cls._raw(len(exps), {exps: coef} if coef else {})

    @classmethod
    def var(cls, i: int, nvars: int, power: int = 1) -> LaurentPoly:
        e = [0] * nvars
        e[i] = power
        return cls.monomial(e)

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return self.is_zero() or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> int:
        if not self.is_constant():
            raise AlgebraError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, 0)

    def variables(self) -> set[int]:
        used: set[int] = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    # ring operations

    def _check(self, other: LaurentPoly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} != {other.nvars}")

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if not self.is_monomial():
                raise AlgebraError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise AlgebraError("only unit monomials have Laurent inverses")
            return LaurentPoly.monomial(tuple(x * k for x in e), c ** (-k))
        result = LaurentPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exps: Exps, coef: int = 1) -> LaurentPoly:
        """Multiply by the monomial ``coef * x^exps``."""
        return LaurentPoly._raw(
            self.nvars, {_add_exps(e, exps): c * coef for e, c in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other, self.nvars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # division

    def divexact(self, divisor: LaurentPoly) -> LaurentPoly | None:
        """Return ``self / divisor`` if it is a Laurent polynomial, else ``None``."""
        self._check(divisor)
        if divisor.is_zero():
            raise AlgebraError("division by zero polynomial")
        if self.is_zero():
            return self
        if divisor.is_monomial():
            (de, dc), = divisor.terms.items()
            out = {}
            for e, c in self.terms.items():
                q, r = divmod(c, dc)
                if r:
                    return None
                out[_sub_exps(e, de)] = q
            return LaurentPoly._raw(self.nvars, out)
        # Degrees in each variable add under multiplication, so every quotient
        # exponent lies in a finite box; leaving it proves non-divisibility.
        lead_d = max(divisor.terms)
        lead_c = divisor.terms[lead_d]
        lo = [min(e[i] for e in self.terms) - min(e[i] for e in divisor.terms) for i in range(self.nvars)]
        hi = [max(e[i] for e in self.terms) - max(e[i] for e in divisor.terms) for i in range(self.nvars)]
        if any(a > b for a, b in zip(lo, hi)):
            return None
        rem = dict(self.terms)
        quot: dict[Exps, int] = {}
        dterms = list(divisor.terms.items())
        while rem:
            lt = max(rem)
            qe = _sub_exps(lt, lead_d)
            if any(x < a or x > b for x, a, b in zip(qe, lo, hi)):
                return None
            qc, r = divmod(rem[lt], lead_c)
            if r:
                return None
            quot[qe] = qc
            for de, dc in dterms:
                e = _add_exps(qe, de)
                v = rem.get(e, 0) - qc * dc
                if v:
                    rem[e] = v
                else:
                    rem.pop(e, None)
        return LaurentPoly._raw(self.nvars, quot)

    # substitutions

    def substitute(self, var_map: Sequence[int], nvars: int) -> LaurentPoly:
        """Rename variable ``i`` to ``var_map[i]`` in a ring with ``nvars`` variables.

        Several variables may map to the same target (color merging).
        """
        out: dict[Exps, int] = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, x in enumerate(e):
                if x:
                    ne[var_map[i]] += x
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return LaurentPoly._raw(nvars, {e: c for e, c in out.items() if c})

    def scale_exponents(self, k: int) -> LaurentPoly:
        return LaurentPoly._raw(
            self.nvars, {tuple(x * k for x in e): c for e, c in self.terms.items()}
        )

    def evaluate_at_one(self) -> int:
        return sum(self.terms.values())

    # display

    def sorted_terms(self, names: Sequence[str] | None = None) -> list[tuple[Exps, int]]:
        """Terms in print order: variables ranked by name, exponents lex descending."""
        order = _name_order(self.nvars, names)
        return sorted(self.terms.items(), key=lambda t: tuple(t[0][i] for i in order), reverse=True)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = _default_names(self.nvars, names)
        if not self.terms:
            return "0"
        order = _name_order(self.nvars, names)
        pieces = []
        for e, c in self.sorted_terms(names):
            mono = "*".join(_power_str(names[i], e[i]) for i in order if e[i])
            pieces.append((c, mono))
        return _join_terms(pieces)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_str()!r}, nvars={self.nvars})"


def _default_names(nvars: int, names: Sequence[str] | None) -> Sequence[str]:
    if names is None:
        return [f"t{i + 1}" for i in range(nvars)]
    if len(names) < nvars:
        raise ValueError("not enough variable names")
    return names


def _name_order(nvars: int, names: Sequence[str] | None) -> list[int]:
    names = _default_names(nvars, names)
    return sorted(range(nvars), key=lambda i: names[i])


def _power_str(name: str, k: int, half: bool = False) -> str:
    if half:
        if k % 2 == 0:
            k //= 2
        else:
            return f"{name}^({k}/2)"
    return name if k == 1 else f"{name}^{k}"


def _join_terms(pieces: Sequence[tuple[int, str]]) -> str:
    out = []
    for idx, (c, mono) in enumerate(pieces):
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# denominator factors

MINUS, PLUS, PAIR = "minus", "plus", "pair"


@dataclass(frozen=True, order=True)
class DenomFactor:
    """``t_a - t_a^-1`` (minus), ``t_a + t_a^-1`` (plus) or ``t_a t_b - t_a^-1 t_b^-1`` (pair, a < b)."""

    kind: str
    a: int
    b: int = -1

    def __post_init__(self):
        if self.kind not in (MINUS, PLUS, PAIR):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == PAIR and not self.a < self.b:
            raise ValueError("pair factors need a < b; use pair_factors() to normalise")

    @property
    def colors(self) -> tuple[int, ...]:
        return (self.a, self.b) if self.kind == PAIR else (self.a,)

    def poly(self, nvars: int) -> LaurentPoly:
        return _factor_poly(self, nvars)

    def renamed(self, var_map: Sequence[int]) -> list[DenomFactor]:
        if self.kind == PAIR:
            return pair_factors(var_map[self.a], var_map[self.b])
        return [DenomFactor(self.kind, var_map[self.a])]

    def to_str(self, names: Sequence[str]) -> str:
        if self.kind == MINUS:
            return f"{names[self.a]} - {names[self.a]}^-1"
        if self.kind == PLUS:
            return f"{names[self.a]} + {names[self.a]}^-1"
        x, y = sorted((names[self.a], names[self.b]))
        return f"{x}*{y} - {x}^-1*{y}^-1"


def Minus(a: int) -> DenomFactor:
    return DenomFactor(MINUS, a)


def Plus(a: int) -> DenomFactor:
    return DenomFactor(PLUS, a)


def pair_factors(a: int, b: int) -> list[DenomFactor]:
    """Factors of ``t_a t_b - t_a^-1 t_b^-1``; the same-color case splits as minus*plus."""
    if a == b:
        return [Minus(a), Plus(a)]
    return [DenomFactor(PAIR, min(a, b), max(a, b))]


@functools.lru_cache(maxsize=4096)
def _factor_poly(f: DenomFactor, nvars: int) -> LaurentPoly:
    if f.kind == PAIR:
        e = [0] * nvars
        e[f.a] = e[f.b] = 1
        up = tuple(e)
        down = tuple(-x for x in e)
        return LaurentPoly._raw(nvars, {up: 1, down: -1})
    e = [0] * nvars
    e[f.a] = 1
    up = tuple(e)
    down = tuple(-x for x in e)
    return LaurentPoly._raw(nvars, {up: 1, down: 1 if f.kind == PLUS else -1})


def candidate_factors(variables: Iterable[int]) -> list[DenomFactor]:
    vs = sorted(set(variables))
    out = [Minus(a) for a in vs] + [Plus(a) for a in vs]
    out += [DenomFactor(PAIR, a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]
    return out


def factor_persistent(p: LaurentPoly) -> tuple[LaurentPoly, dict[DenomFactor, int]] | None:
    """Split ``p`` as ``unit * prod(factors)`` with a signed unit monomial, or return None."""
    if p.is_zero():
        return None
    found: dict[DenomFactor, int] = {}
    rest = p
    for f in candidate_factors(p.variables()):
        fp = f.poly(p.nvars)
        while True:
            q = rest.divexact(fp)
            if q is None:
                break
            found[f] = found.get(f, 0) + 1
            rest = q
    if rest.is_monomial() and abs(next(iter(rest.terms.values()))) == 1:
        return rest, found
    return None


# ---------------------------------------------------------------------------
# fractions

DenomKey = tuple[tuple[DenomFactor, int], ...]


class Fraction:
    """``numerator / (prod(factor^mult) * general)`` with exact canonicalisation."""

    __slots__ = ("num", "den", "general", "_hash")

    def __init__(
        self,
        num: LaurentPoly,
        den: Mapping[DenomFactor, int] | Iterable[tuple[DenomFactor, int]] = (),
        general: LaurentPoly | None = None,
        *,
        reduce: bool = True,
    ):
        items = den.items() if isinstance(den, Mapping) else den
        merged: dict[DenomFactor, int] = {}
        for f, m in items:
            if m < 0:
                raise ValueError("negative multiplicity")
            if m:
                merged[f] = merged.get(f, 0) + m
        if general is not None:
            if general.nvars != num.nvars:
                raise ValueError("variable count mismatch")
            if general.is_zero():
                raise AlgebraError("division by zero polynomial")
            if general.is_monomial():
                unit = general ** -1 if abs(next(iter(general.terms.values()))) == 1 else None
                if unit is not None:
                    num = num * unit
                    general = None
        if num.is_zero():
            merged = {}
            general = None
        if reduce and merged:
            num, merged = _trial_divide(num, merged)
        if reduce and general is not None:
            q = num.divexact(general)
            if q is not None:
                num, general = q, None
        self.num = num
        self.den: DenomKey = tuple(sorted(merged.items()))
        self.general = general
        self._hash = None

    # constructors

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> Fraction:
        return cls(p, reduce=False)

    @classmethod
    def const(cls, c: int, nvars: int) -> Fraction:
        return cls(LaurentPoly.const(c, nvars), reduce=False)

    @classmethod
    def zero(cls, nvars: int) -> Fraction:
        return cls.const(0, nvars)

    @classmethod
    def one(cls, nvars: int) -> Fraction:
        return cls.const(1, nvars)

    @classmethod
    def inverse_of_factor(cls, f: DenomFactor, nvars: int) -> Fraction:
        return cls(LaurentPoly.const(1, nvars), {f: 1}, reduce=False)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def denom_factors(self) -> dict[DenomFactor, int]:
        return dict(self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den and self.general is None

    def is_factored(self) -> bool:
        return self.general is None

    def denominator_poly(self) -> LaurentPoly:
        d = LaurentPoly.const(1, self.nvars)
        for f, m in self.den:
            d = d * (f.poly(self.nvars) ** m)
        if self.general is not None:
            d = d * self.general
        return d

    # arithmetic

    def _coerce(self, other) -> Fraction:
        if isinstance(other, Fraction):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} != {other.nvars}")
            return other
        if isinstance(other, LaurentPoly):
            return Fraction.from_poly(other)
        if isinstance(other, int):
            return Fraction.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other) -> Fraction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        d1, d2 = dict(self.den), dict(other.den)
        if d1 == d2 and self.general is None and other.general is None:
            return Fraction(self.num + other.num, d1)
        lcm = dict(d1)
        for f, m in d2.items():
            if m > lcm.get(f, 0):
                lcm[f] = m
        n1 = self.num * _factor_product({f: m - d1.get(f, 0) for f, m in lcm.items()}, self.nvars)
        n2 = other.num * _factor_product({f: m - d2.get(f, 0) for f, m in lcm.items()}, self.nvars)
        g1, g2 = self.general, other.general
        if g1 is None and g2 is None:
            return Fraction(n1 + n2, lcm)
        if g1 is not None and g2 is not None and g1 == g2:
            return Fraction(n1 + n2, lcm, g1)
        if g1 is not None:
            n2 = n2 * g1
        if g2 is not None:
            n1 = n1 * g2
        g = g1 if g2 is None else (g2 if g1 is None else g1 * g2)
        return Fraction(n1 + n2, lcm, g)

    __radd__ = __add__

    def __neg__(self) -> Fraction:
        return Fraction(-self.num, self.den, self.general, reduce=False)

    def __sub__(self, other) -> Fraction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Fraction:
        return (-self) + other

    def __mul__(self, other) -> Fraction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Fraction.zero(self.nvars)
        if not other.den and other.general is None and not self.den and self.general is None:
            return Fraction(self.num * other.num, reduce=False)
        den = dict(self.den)
        for f, m in other.den:
            den[f] = den.get(f, 0) + m
        g1, g2 = self.general, other.general
        g = g1 if g2 is None else (g2 if g1 is None else g1 * g2)
        return Fraction(self.num * other.num, den, g)

    __rmul__ = __mul__

    def div_by_factor(self, f: DenomFactor, mult: int = 1) -> Fraction:
        den = dict(self.den)
        den[f] = den.get(f, 0) + mult
        return Fraction(self.num, den, self.general)

    def inverse(self) -> Fraction:
        """Reciprocal. Exact only when the numerator factors into known denominator kinds."""
        if self.is_zero():
            raise AlgebraError("division by zero")
        back = _factor_product(dict(self.den), self.nvars)
        if self.general is not None:
            back = back * self.general
        split = factor_persistent(self.num)
        if split is None:
            return Fraction(back, (), self.num)
        unit, factors = split
        return Fraction(back * (unit ** -1), factors)

    def __truediv__(self, other) -> Fraction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> Fraction:
        return self.inverse() * other

    def __pow__(self, k: int) -> Fraction:
        if k < 0:
            return self.inverse() ** -k
        out = Fraction.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = self._coerce(other)
        if not isinstance(other, Fraction):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.general is None and other.general is None:
            return self.num == other.num and self.den == other.den
        return self.num * other.denominator_poly() == other.num * self.denominator_poly()

    def __hash__(self) -> int:
        if self.general is not None:
            # consistent with cross-multiplied equality, deliberately coarse
            return hash((self.nvars, "general"))
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # substitutions

    def substitute(self, var_map: Sequence[int], nvars: int) -> Fraction:
        """Rename variables; raises if the image denominator vanishes."""
        num = self.num.substitute(var_map, nvars)
        den: dict[DenomFactor, int] = {}
        for f, m in self.den:
            for g in f.renamed(var_map):
                den[g] = den.get(g, 0) + m
        general = None
        if self.general is not None:
            general = self.general.substitute(var_map, nvars)
            if general.is_zero():
                raise AlgebraError("substitution kills the denominator")
        return Fraction(num, den, general)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = _default_names(self.nvars, names)
        num = self.num.to_str(names)
        if self.is_polynomial():
            return num
        if len(self.num.terms) > 1:
            num = f"({num})"
        parts = []
        for f, m in self.den:
            s = f"({f.to_str(names)})"
            parts.append(s if m == 1 else f"{s}^{m}")
        if self.general is not None:
            parts.append(f"({self.general.to_str(names)})")
        den = "*".join(parts)
        if len(parts) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Fraction({self.to_str()!r})"


def _factor_product(den: Mapping[DenomFactor, int], nvars: int) -> LaurentPoly:
    out = LaurentPoly.const(1, nvars)
    for f, m in den.items():
        for _ in range(m):
            out = out * f.poly(nvars)
    return out


def _trial_divide(num: LaurentPoly, den: dict[DenomFactor, int]) -> tuple[LaurentPoly, dict[DenomFactor, int]]:
    out = {}
    for f, m in den.items():
        fp = f.poly(num.nvars)
        while m:
            q = num.divexact(fp)
            if q is None:
                break
            num = q
            m -= 1
        if m:
            out[f] = m
    return num, out


# ---------------------------------------------------------------------------
# maps on the coefficient domain


def act_permute(c: Fraction, alpha_images: Sequence[int]) -> Fraction:
    """Left action of a braid through its permutation (0-based images).

    Variable ``t_i`` is replaced by ``t_j`` where ``j`` is sent to ``i``, so the
    renaming is ``i -> alpha^-1(i)``. Slots beyond the permutation are fixed.
    """
    n = len(alpha_images)
    inv = list(range(c.nvars))
    for j, i in enumerate(alpha_images):
        if i < c.nvars:
            inv[i] = j
    if n > c.nvars:
        raise ValueError("permutation acts on more strands than there are variables")
    if all(inv[i] == i for i in range(c.nvars)):
        return c
    return c.substitute(inv, c.nvars)


def rho_reduce(c: Fraction) -> Fraction:
    """Send every variable to a single variable ``t``."""
    if not is_persistent(c):
        raise AlgebraError("fraction is not persistent")
    return c.substitute([0] * c.nvars, 1)


def is_persistent(c: Fraction) -> bool:
    """True when the reduced denominator survives the one-variable reduction."""
    if c.general is None or c.is_zero():
        return True
    if not c.general.substitute([0] * c.nvars, 1).is_zero():
        return True
    # Only the unfactored fallback can hide a common factor; reduce it with sympy.
    num, den = _cancel_general(c.num, c.general)
    return not den.substitute([0] * c.nvars, 1).is_zero()


def _cancel_general(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    import sympy

    nv = num.nvars
    syms = sympy.symbols(f"x0:{nv}")

    def to_expr(p: LaurentPoly):
        return sympy.Add(*[c * sympy.Mul(*[s**k for s, k in zip(syms, e)]) for e, c in p.terms.items()])

    n_expr, d_expr = sympy.fraction(sympy.cancel(to_expr(num) / to_expr(den)))

    def from_expr(expr) -> LaurentPoly:
        poly = sympy.Poly(sympy.expand(expr), *syms)
        return LaurentPoly(nv, {tuple(m): int(c) for m, c in poly.terms()})

    return from_expr(n_expr), from_expr(d_expr)


def phi_square(c: Fraction) -> Fraction:
    """Substitute ``t_i -> t_i^2`` in numerator and denominator."""
    num = c.num.scale_exponents(2)
    den: dict[DenomFactor, int] = {}
    extra = LaurentPoly.const(1, c.nvars)
    for f, m in c.den:
        if f.kind == MINUS:
            den[f] = den.get(f, 0) + m
            den[Plus(f.a)] = den.get(Plus(f.a), 0) + m
        else:
            extra = extra * (f.poly(c.nvars).scale_exponents(2) ** m)
    general = None
    if c.general is not None:
        general = c.general.scale_exponents(2)
    if not extra.is_constant():
        general = extra if general is None else general * extra
    return Fraction(num, den, general)


def unit_ratio(x: Fraction, y: Fraction) -> tuple[int, Exps] | None:
    """Return ``(sign, exps)`` with ``x = sign * t^exps * y``, or None if no such unit exists."""
    if x.nvars != y.nvars:
        raise ValueError("variable count mismatch")
    p = x.num * y.denominator_poly()
    q = y.num * x.denominator_poly()
    if p.is_zero() or q.is_zero():
        return (1, (0,) * x.nvars) if p.is_zero() and q.is_zero() else None
    if len(p.terms) != len(q.terms):
        return None
    lp, lq = max(p.terms), max(q.terms)
    shift = _sub_exps(lp, lq)
    cp, cq = p.terms[lp], q.terms[lq]
    if cp not in (cq, -cq):
        return None
    sign = 1 if cp == cq else -1
    if q.shift(shift, sign) != p:
        return None
    return sign, shift
