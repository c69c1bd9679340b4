"""
Conway potential function of closed colored braids.

The recursion works on B_n: rewrite the braid as a combination of
``alpha * sigma_{n-1}^k * gamma`` and evaluate each term on fewer strands.
k=0 leaves a split circle (value 0), k=+-1 destabilises after a cyclic
conjugation, k=2 is a ring around one strand, contributing ``t_c - t_c^-1``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .algebra import (
    AlgebraError,
    DenomFactor,
    Fraction,
    LaurentPoly,
    Minus,
    _power_str,
    _join_terms,
    is_persistent,
    rho_reduce,
)
from .braid import ColoredBraid, NotClosableError, _garside, _perm_of, is_closable
from .skein import Reducer, _free

Trace = Callable[[int, tuple[int, ...], tuple[int, ...]], None]


@dataclass(frozen=True)
class CPFValue:
    """The invariant with its color names (variable i is ``colors[i]``) and component count."""

    value: Fraction
    colors: tuple[str, ...]
    components: int

    def names(self) -> list[str]:
        return [f"t_{c}" for c in self.colors]

    def to_str(self) -> str:
        return self.value.to_str(self.names())

    def __str__(self) -> str:
        return self.to_str()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CPFValue):
            return NotImplemented
        return self.colors == other.colors and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.colors, self.value))


class CPFEngine:
    """Evaluator with a memo shared across calls, keyed by (normal form, colors).

    Reads are lock-free; inserts take a lock and never overwrite, so
    concurrent evaluations see either nothing or a finished value.
    """

    def __init__(self):
        self.reducer = Reducer()
        self._memo: dict[tuple, Fraction] = {}
        self._lock = threading.Lock()

    def clear(self) -> None:
        self.reducer.clear()
        with self._lock:
            self._memo.clear()

    def evaluate(self, n: int, letters: tuple[int, ...], colors: tuple[int, ...], nvars: int,
                 trace: Trace | None = None) -> Fraction:
        letters = _free(letters)
        if trace is not None:
            trace(n, letters, colors)
        if n == 1:
            return Fraction.inverse_of_factor(Minus(colors[0]), nvars)
        if not any(abs(x) == n - 1 for x in letters):
            # the last strand is a separate circle
            return Fraction.zero(nvars)
        key = (n, _garside(n, letters), colors, nvars)
        hit = self._memo.get(key)
        if hit is not None and trace is None:
            return hit
        total = Fraction.zero(nvars)
        for coef, alpha, k, gamma in self.reducer.reduce(n, letters, colors, nvars):
            if k == 0:
                continue
            if k == 2:
                perm = _perm_of(n, alpha) if alpha else tuple(range(n))
                through = colors[perm.index(n - 2)]
                sub = self.evaluate(n - 1, _free(alpha + gamma), colors[: n - 1], nvars, trace)
                ring = Fraction.from_poly(Minus(through).poly(nvars))
                total = total + coef * ring * sub
            else:
                perm = _perm_of(n, gamma) if gamma else tuple(range(n))
                moved = tuple(colors[perm[p]] for p in range(n))
                sub = self.evaluate(n - 1, _free(gamma + alpha), moved[: n - 1], nvars, trace)
                total = total + coef * sub
        with self._lock:
            self._memo.setdefault(key, total)
        return total


_default_engine = CPFEngine()


def clear_caches() -> None:
    """Drop memoised evaluations of the shared engine (derived rewrite tables stay)."""
    _default_engine.clear()


def color_indices(colors: Sequence[str]) -> tuple[tuple[str, ...], tuple[int, ...]]:
    """Distinct color names in sorted order and the variable index of each strand."""
    names = tuple(sorted(set(colors)))
    index = {c: i for i, c in enumerate(names)}
    return names, tuple(index[c] for c in colors)


def component_count(n: int, letters: tuple[int, ...]) -> int:
    perm = _perm_of(n, letters) if letters else tuple(range(n))
    seen, count = set(), 0
    for p in range(n):
        if p in seen:
            continue
        count += 1
        while p not in seen:
            seen.add(p)
            p = perm[p]
    return count


def cpf_closed_braid(cb: ColoredBraid, engine: CPFEngine | None = None,
                     trace: Trace | None = None) -> CPFValue:
    """The Conway potential function of the closure of ``cb``."""
    if not is_closable(cb):
        raise NotClosableError(f"colored braid {cb} is not closable")
    names, ctx = color_indices(cb.top_colors)
    n = cb.strands
    eng = engine or _default_engine
    value = eng.evaluate(n, cb.word.letters, ctx, len(names), trace)
    return CPFValue(value, names, component_count(n, cb.word.letters))


def merge_colors(v: CPFValue, identification: Mapping[str, str]) -> CPFValue:
    """Identify colors: ``identification[c]`` replaces ``c`` (unlisted colors stay)."""
    images = [identification.get(c, c) for c in v.colors]
    names = tuple(sorted(set(images)))
    index = {c: i for i, c in enumerate(names)}
    var_map = [index[c] for c in images]
    try:
        value = v.value.substitute(var_map, len(names))
    except AlgebraError as exc:
        raise AlgebraError(f"merging {dict(identification)} kills the denominator") from exc
    return CPFValue(value, names, v.components)


def uncolored(v: CPFValue, color: str = "t") -> CPFValue:
    """All components given one color: the reduction that sends every variable to one."""
    if not is_persistent(v.value):
        raise AlgebraError("value does not survive the one-variable reduction")
    return CPFValue(rho_reduce(v.value), (color,), v.components)


@dataclass(frozen=True)
class AlexanderPoly:
    """Laurent polynomial in s-variables stored with doubled exponents (s = t^2)."""

    poly: LaurentPoly
    colors: tuple[str, ...]

    def names(self) -> list[str]:
        if len(self.colors) == 1:
            return ["s"]
        return [f"s_{c}" for c in self.colors]

    def to_str(self) -> str:
        if self.poly.is_zero():
            return "0"
        names = self.names()
        order = sorted(range(self.poly.nvars), key=lambda i: names[i])
        pieces = []
        for e, c in self.poly.sorted_terms(names):
            mono = "*".join(_power_str(names[i], e[i], half=True) for i in order if e[i])
            pieces.append((c, mono))
        return _join_terms(pieces)

    def __str__(self) -> str:
        return self.to_str()

    def exponents_integral(self) -> bool:
        return all(x % 2 == 0 for e in self.poly.terms for x in e)


def to_alexander(v: CPFValue) -> AlexanderPoly:
    """Alexander polynomial from the potential function, with s = t^2.

    One color: multiply by ``t - t^-1`` first. Half-integer s-exponents are
    kept rather than shifted to an integral representative.
    """
    value = v.value
    if len(v.colors) == 1:
        value = value * Fraction.from_poly(Minus(0).poly(value.nvars))
    if not value.is_polynomial():
        raise AlgebraError(f"potential function {v} does not give a Laurent polynomial")
    return AlexanderPoly(value.num, v.colors)


__all__ = [
    "AlexanderPoly",
    "CPFEngine",
    "CPFValue",
    "DenomFactor",
    "clear_caches",
    "color_indices",
    "component_count",
    "cpf_closed_braid",
    "merge_colors",
    "to_alexander",
    "uncolored",
]
